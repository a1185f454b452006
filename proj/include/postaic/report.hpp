#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "postaic/interval_union.hpp"

namespace postaic {

struct ScoreRow {
  std::vector<std::string> model;  // column names, forced columns included
  std::size_t size = 0;            // free columns
  double score = 0.0;
  double rss = 0.0;
  bool selected = false;

  bool operator==(const ScoreRow&) const = default;
};

struct TargetRow {
  std::string name;
  std::string method;    // "classical" | "corrected"
  std::string strategy;  // sigma strategy label
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;
  std::optional<double> pivot;
  double sigma_used = 0.0;

  bool operator==(const TargetRow&) const = default;
};

struct CoverageRow {
  std::string target;  // target name, or "average"
  std::string method;
  std::string strategy;
  std::size_t trials = 0;
  double coverage = 0.0;
  double standard_error = 0.0;
  double relative_loss = 0.0;

  bool operator==(const CoverageRow&) const = default;
};

struct HistogramRow {
  std::size_t size = 0;
  std::size_t count = 0;

  bool operator==(const HistogramRow&) const = default;
};

struct SizeCoverageRow {
  std::size_t size = 0;
  std::string method;
  std::string strategy;
  std::size_t trials = 0;  // target evaluations, not replications
  double coverage = 0.0;

  bool operator==(const SizeCoverageRow&) const = default;
};

struct RegionRow {
  std::string target;
  std::vector<Interval> intervals;

  bool operator==(const RegionRow&) const = default;
};

struct SigmaRow {
  std::string strategy;
  double mean = 0.0;
  std::size_t count = 0;

  bool operator==(const SigmaRow&) const = default;
};

struct FailureRow {
  std::string code;
  std::size_t count = 0;

  bool operator==(const FailureRow&) const = default;
};

/// Common output of every subcommand. Sections that do not apply stay empty.
struct Report {
  std::string kind;  // select | ci | analyze | simulate
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> selected_model;
  std::vector<ScoreRow> scores;
  std::vector<TargetRow> targets;
  std::vector<CoverageRow> coverage;
  std::vector<HistogramRow> histogram;
  std::vector<RegionRow> excluded_regions;
  std::vector<SizeCoverageRow> coverage_by_size;
  std::vector<SigmaRow> sigma_estimates;
  std::vector<FailureRow> failures;
  std::optional<double> sigma_contribution;
  std::size_t replications = 0;
  std::string timestamp;  // not part of equality

  bool operator==(const Report& other) const;
};

// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
std::string to_json_text(const Report& report);

enum class ReportFormat { Json, Csv, PlotData };
ReportFormat parse_format(const std::string& text);

/// Writes the report into out_dir (created when missing) and returns the
/// paths written. Throws IoError.
std::vector<std::string> emit_report(const Report& report, ReportFormat format, const std::string& out_dir);

// Flat per-target rows, one header line.
std::string targets_csv(const Report& report);
std::string coverage_csv(const Report& report);
// Columns: point index, method, then one coverage column per strategy.
std::string coverage_plot_data(const Report& report);
std::string histogram_plot_data(const Report& report);
std::string size_coverage_plot_data(const Report& report);

}  // namespace postaic
