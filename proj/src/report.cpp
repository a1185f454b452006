#include "postaic/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "postaic/error.hpp"

namespace postaic {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorCode::ParseError, "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return read_number(j);
}

const json& field(const json& j, const char* key) {
  static const json empty_array = json::array();
  auto it = j.find(key);
  return it == j.end() ? empty_array : *it;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> ordered_unique(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& s : items)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

}  // namespace

bool Report::operator==(const Report& o) const {
  return kind == o.kind && config == o.config && selected_model == o.selected_model && scores == o.scores &&
         targets == o.targets && coverage == o.coverage && histogram == o.histogram &&
         excluded_regions == o.excluded_regions && coverage_by_size == o.coverage_by_size &&
         sigma_estimates == o.sigma_estimates && failures == o.failures &&
         sigma_contribution == o.sigma_contribution && replications == o.replications;
}

json to_json(const Report& r) {
  json j;
  j["kind"] = r.kind;
  j["config"] = r.config;
  j["selected_model"] = r.selected_model;

  j["scores"] = json::array();
  for (const auto& s : r.scores)
    j["scores"].push_back(
        {{"model", s.model}, {"size", s.size}, {"score", number(s.score)}, {"rss", number(s.rss)}, {"selected", s.selected}});

  j["targets"] = json::array();
  for (const auto& t : r.targets)
    j["targets"].push_back({{"name", t.name},
                            {"method", t.method},
                            {"strategy", t.strategy},
                            {"lower", number(t.lower)},
                            {"upper", number(t.upper)},
                            {"point", number(t.point)},
                            {"pivot", optional_number(t.pivot)},
                            {"sigma_used", number(t.sigma_used)}});

  j["coverage"] = json::array();
  for (const auto& c : r.coverage)
    j["coverage"].push_back({{"target", c.target},
                             {"method", c.method},
                             {"strategy", c.strategy},
                             {"trials", c.trials},
                             {"coverage", number(c.coverage)},
                             {"stderr", number(c.standard_error)},
                             {"relative_loss", number(c.relative_loss)}});

  j["histogram"] = json::array();
  for (const auto& h : r.histogram) j["histogram"].push_back({{"size", h.size}, {"count", h.count}});

  j["excluded_regions"] = json::array();
  for (const auto& e : r.excluded_regions) {
    json ivs = json::array();
    for (const auto& iv : e.intervals) ivs.push_back(json::array({number(iv.lo), number(iv.hi)}));
    j["excluded_regions"].push_back({{"target", e.target}, {"intervals", ivs}});
  }

  j["coverage_by_size"] = json::array();
  for (const auto& c : r.coverage_by_size)
    j["coverage_by_size"].push_back({{"size", c.size},
                                     {"method", c.method},
                                     {"strategy", c.strategy},
                                     {"trials", c.trials},
                                     {"coverage", number(c.coverage)}});

  j["sigma_estimates"] = json::array();
  for (const auto& s : r.sigma_estimates)
    j["sigma_estimates"].push_back({{"strategy", s.strategy}, {"mean", number(s.mean)}, {"count", s.count}});

  j["failures"] = json::array();
  for (const auto& f : r.failures) j["failures"].push_back({{"code", f.code}, {"count", f.count}});

  j["sigma_contribution"] = optional_number(r.sigma_contribution);
  j["replications"] = r.replications;
  j["timestamp"] = r.timestamp;
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.kind = j.value("kind", "");
    r.config = j.value("config", json::object());
    r.selected_model = j.value("selected_model", std::vector<std::string>{});

    for (const auto& s : field(j, "scores"))
      r.scores.push_back({s.at("model").get<std::vector<std::string>>(), s.at("size").get<std::size_t>(),
                          read_number(s.at("score")), read_number(s.at("rss")), s.at("selected").get<bool>()});

    for (const auto& t : field(j, "targets"))
      r.targets.push_back({t.at("name").get<std::string>(), t.at("method").get<std::string>(),
                           t.value("strategy", ""), read_number(t.at("lower")), read_number(t.at("upper")),
                           read_number(t.at("point")), read_optional(t.at("pivot")),
                           read_number(t.at("sigma_used"))});

    for (const auto& c : field(j, "coverage"))
      r.coverage.push_back({c.at("target").get<std::string>(), c.value("method", ""),
                            c.at("strategy").get<std::string>(), c.value<std::size_t>("trials", 0),
                            read_number(c.at("coverage")), read_number(c.at("stderr")),
                            read_number(c.at("relative_loss"))});

    for (const auto& h : field(j, "histogram"))
      r.histogram.push_back({h.at("size").get<std::size_t>(), h.at("count").get<std::size_t>()});

    for (const auto& e : field(j, "excluded_regions")) {
      RegionRow row{e.at("target").get<std::string>(), {}};
      for (const auto& iv : e.at("intervals")) row.intervals.push_back({read_number(iv.at(0)), read_number(iv.at(1))});
      r.excluded_regions.push_back(std::move(row));
    }

    for (const auto& c : field(j, "coverage_by_size"))
      r.coverage_by_size.push_back({c.at("size").get<std::size_t>(), c.at("method").get<std::string>(),
                                    c.at("strategy").get<std::string>(), c.at("trials").get<std::size_t>(),
                                    read_number(c.at("coverage"))});

    for (const auto& s : field(j, "sigma_estimates"))
      r.sigma_estimates.push_back(
          {s.at("strategy").get<std::string>(), read_number(s.at("mean")), s.at("count").get<std::size_t>()});

    for (const auto& f : field(j, "failures"))
      r.failures.push_back({f.at("code").get<std::string>(), f.at("count").get<std::size_t>()});

    if (j.contains("sigma_contribution")) r.sigma_contribution = read_optional(j.at("sigma_contribution"));
    r.replications = j.value<std::size_t>("replications", 0);
    r.timestamp = j.value("timestamp", "");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string to_json_text(const Report& report) { return to_json(report).dump(2) + "\n"; }

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "plotdata") return ReportFormat::PlotData;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + text + "' (json, csv, plotdata)");
}

std::string targets_csv(const Report& r) {
  std::ostringstream os;
  os << "name,method,strategy,lower,upper,point,pivot,sigma_used\n";
  for (const auto& t : r.targets)
    os << csv_field(t.name) << ',' << t.method << ',' << csv_field(t.strategy) << ',' << fmt(t.lower) << ','
       << fmt(t.upper) << ',' << fmt(t.point) << ',' << (t.pivot ? fmt(*t.pivot) : "") << ',' << fmt(t.sigma_used)
       << '\n';
  return os.str();
}

std::string coverage_csv(const Report& r) {
  std::ostringstream os;
  os << "target,method,strategy,trials,coverage,stderr,relative_loss\n";
  for (const auto& c : r.coverage)
    os << csv_field(c.target) << ',' << c.method << ',' << csv_field(c.strategy) << ',' << c.trials << ','
       << fmt(c.coverage) << ',' << fmt(c.standard_error) << ',' << fmt(c.relative_loss) << '\n';
  return os.str();
}

std::string coverage_plot_data(const Report& r) {
  std::vector<std::string> targets, methods, strategies;
  for (const auto& c : r.coverage) {
    if (c.target == "average") continue;
    targets.push_back(c.target);
    methods.push_back(c.method);
    strategies.push_back(c.strategy);
  }
  targets = ordered_unique(targets);
  methods = ordered_unique(methods);
  strategies = ordered_unique(strategies);

  std::map<std::tuple<std::string, std::string, std::string>, double> cell;
  for (const auto& c : r.coverage) cell[{c.target, c.method, c.strategy}] = c.coverage;

  std::ostringstream os;
  os << "# targets:";
  for (std::size_t k = 0; k < targets.size(); ++k) os << ' ' << (k + 1) << '=' << targets[k];
  os << "\n# point method";
  for (const auto& s : strategies) os << ' ' << s;
  os << '\n';
  for (std::size_t k = 0; k < targets.size(); ++k)
    for (const auto& m : methods) {
      os << (k + 1) << ' ' << m;
      for (const auto& s : strategies) {
        auto it = cell.find({targets[k], m, s});
        os << ' ' << (it == cell.end() ? "nan" : fmt(it->second));
      }
      os << '\n';
    }
  return os.str();
}

std::string histogram_plot_data(const Report& r) {
  std::ostringstream os;
  os << "# size count\n";
  for (const auto& h : r.histogram) os << h.size << ' ' << h.count << '\n';
  return os.str();
}

std::string size_coverage_plot_data(const Report& r) {
  std::vector<std::string> columns;
  for (const auto& c : r.coverage_by_size) columns.push_back(c.method + ":" + c.strategy);
  columns = ordered_unique(columns);
  std::map<std::size_t, std::map<std::string, double>> rows;
  for (const auto& c : r.coverage_by_size) rows[c.size][c.method + ":" + c.strategy] = c.coverage;

  std::ostringstream os;
  os << "# size";
  for (const auto& c : columns) os << ' ' << c;
  os << '\n';
  for (const auto& [size, values] : rows) {
    os << size;
    for (const auto& c : columns) {
      auto it = values.find(c);
      os << ' ' << (it == values.end() ? "nan" : fmt(it->second));
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> emit_report(const Report& report, ReportFormat format, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());

  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    written.push_back(path);
  };

  switch (format) {
    case ReportFormat::Json:
      write("report.json", to_json_text(report));
      break;
    case ReportFormat::Csv:
      write("targets.csv", targets_csv(report));
      if (!report.coverage.empty()) write("coverage.csv", coverage_csv(report));
      break;
    case ReportFormat::PlotData:
      write("coverage_vs_point.dat", coverage_plot_data(report));
      write("size_histogram.dat", histogram_plot_data(report));
      write("coverage_by_size.dat", size_coverage_plot_data(report));
      break;
  }
  return written;
}

}  // namespace postaic
