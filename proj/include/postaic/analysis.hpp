#pragma once

#include <optional>
#include <string>
#include <vector>

#include "postaic/inference.hpp"
#include "postaic/report.hpp"

namespace postaic {

struct AnalysisOptions {
  std::string response;
  std::vector<std::string> ignore;  // non-predictor columns, e.g. a date
  Criterion criterion = Criterion::AIC;
  double alpha = 0.05;
  std::vector<SigmaSpec> sigmas{SigmaSpec::mse_full()};
  bool intercept = true;
  bool skip_supersets = true;
  CandidatePolicy policy{};
};

struct NamedTarget {
  std::string name;
  InferenceTarget target;
};

/// "coef:<column>", "point:<v1>,<v2>,..." (predictor values; the intercept
/// entry is added when forced) or "combo:<c1>,..." over the selected model.
NamedTarget parse_target(const std::string& text, const Dataset& data);

struct TargetAnalysis {
  std::string name;
  std::vector<CIResult> classical;  // one per sigma strategy
  std::vector<CIResult> corrected;
  IntervalUnion excluded;           // values of eta^T Y that change the selection
};

struct AnalysisResult {
  SelectionResult selection;
  std::vector<TargetAnalysis> targets;
};

/// Runs the selection and interval queries. Without explicit targets every
/// non-forced coefficient of the selected model is analysed.
AnalysisResult run_analysis(const Dataset& data, const AnalysisOptions& options,
                            const std::vector<NamedTarget>& targets = {});

Report selection_report(const Dataset& data, const SelectionResult& selection, const AnalysisOptions& options);
Report analysis_report(const Dataset& data, const AnalysisResult& result, const AnalysisOptions& options,
                       const std::string& kind = "analyze");

Dataset load_dataset(const std::string& csv_path, const AnalysisOptions& options);
Report analyze(const std::string& csv_path, const AnalysisOptions& options);

}  // namespace postaic
