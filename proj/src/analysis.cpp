#include "postaic/analysis.hpp"

#include <sstream>

#include "postaic/csv.hpp"
#include "postaic/error.hpp"

namespace postaic {

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in " + what);
    }
  }
  return out;
}

std::vector<std::string> model_names(const Dataset& data, const IndexSet& S) {
  std::vector<std::string> names;
  for (int j : S) names.push_back(data.column_names()[static_cast<std::size_t>(j)]);
  return names;
}

nlohmann::json options_json(const AnalysisOptions& o) {
  nlohmann::json j;
  j["response"] = o.response;
  j["ignore"] = o.ignore;
  j["criterion"] = to_string(o.criterion);
  j["alpha"] = o.alpha;
  j["sigma_strategies"] = nlohmann::json::array();
  for (const auto& s : o.sigmas) j["sigma_strategies"].push_back(s.label());
  j["intercept"] = o.intercept;
  j["skip_supersets"] = o.skip_supersets;
  j["include_empty"] = o.policy.include_empty;
  j["max_size"] = o.policy.max_size ? nlohmann::json(*o.policy.max_size) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

NamedTarget parse_target(const std::string& text, const Dataset& data) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "target '" + text + "' must be coef:, point: or combo:");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "coef") return {body, Coefficient{data.column_index(body)}};
  if (kind == "point") {
    const auto values = parse_numbers(body, "point target");
    const auto forced = static_cast<std::size_t>(data.forced_count());
    if (values.size() + forced != static_cast<std::size_t>(data.p()))
      throw Error(ErrorCode::DimensionMismatch, "point target needs " + std::to_string(data.p() - data.forced_count()) +
                                                    " predictor values");
    Eigen::VectorXd x(data.p());
    for (std::size_t j = 0; j < forced; ++j) x(static_cast<Eigen::Index>(j)) = 1.0;
    for (std::size_t j = 0; j < values.size(); ++j) x(static_cast<Eigen::Index>(j + forced)) = values[j];
    return {"point(" + body + ")", PredictionMean{x}};
  }
  if (kind == "combo") {
    const auto values = parse_numbers(body, "combo target");
    return {"combo(" + body + ")", LinearCombo{Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                                                  static_cast<Eigen::Index>(values.size()))}};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown target kind '" + kind + "'");
}

AnalysisResult run_analysis(const Dataset& data, const AnalysisOptions& options,
                            const std::vector<NamedTarget>& targets) {
  PostSelectionInference::Options o;
  o.criterion = options.criterion;
  o.policy = options.policy;
  o.skip_supersets = options.skip_supersets;
  const PostSelectionInference engine(data, o);

  AnalysisResult result;
  result.selection = *engine.selection();

  std::vector<NamedTarget> chosen = targets;
  if (chosen.empty())
    for (int j : engine.selected())
      if (!data.is_forced(j)) chosen.push_back({data.column_names()[static_cast<std::size_t>(j)], Coefficient{j}});

  for (const auto& t : chosen) {
    TargetAnalysis ta;
    ta.name = t.name;
    const Eigen::VectorXd eta = engine.eta(t.target);
    const auto event = engine.event(eta);
    ta.excluded = event->excluded();
    for (const auto& sigma : options.sigmas) {
      ta.classical.push_back(engine.classical(t.target, options.alpha, sigma));
      ta.corrected.push_back(engine.corrected(eta, event, options.alpha, sigma));
    }
    result.targets.push_back(std::move(ta));
  }
  return result;
}

Report selection_report(const Dataset& data, const SelectionResult& selection, const AnalysisOptions& options) {
  Report r;
  r.kind = "select";
  r.config = options_json(options);
  r.selected_model = model_names(data, selection.selected);
  for (const auto& s : selection.scored)
    r.scores.push_back({model_names(data, s.model), data.free_size(s.model), s.score, s.rss,
                        s.model == selection.selected});
  return r;
}

Report analysis_report(const Dataset& data, const AnalysisResult& result, const AnalysisOptions& options,
                       const std::string& kind) {
  Report r = selection_report(data, result.selection, options);
  r.kind = kind;
  for (const auto& t : result.targets) {
    for (std::size_t s = 0; s < t.classical.size(); ++s) {
      const auto& c = t.classical[s];
      r.targets.push_back({t.name, "classical", c.sigma_spec.label(), c.lower, c.upper, c.point, c.pivot, c.sigma_used});
    }
    for (std::size_t s = 0; s < t.corrected.size(); ++s) {
      const auto& c = t.corrected[s];
      r.targets.push_back({t.name, "corrected", c.sigma_spec.label(), c.lower, c.upper, c.point, c.pivot, c.sigma_used});
    }
    r.excluded_regions.push_back({t.name, t.excluded.intervals()});
  }
  return r;
}

Dataset load_dataset(const std::string& csv_path, const AnalysisOptions& options) {
  if (options.response.empty()) throw Error(ErrorCode::InvalidArgument, "a response column is required");
  return make_dataset(read_csv_file(csv_path, options.ignore), options.response, options.intercept);
}

Report analyze(const std::string& csv_path, const AnalysisOptions& options) {
  const Dataset data = load_dataset(csv_path, options);
  Report r = analysis_report(data, run_analysis(data, options), options);
  r.config["data"] = csv_path;
  return r;
}

}  // namespace postaic
