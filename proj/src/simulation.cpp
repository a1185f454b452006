#include "postaic/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "postaic/error.hpp"

namespace postaic {

Eigen::MatrixXd ar1_covariance(int p, double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in (-1, 1)");
  Eigen::MatrixXd sigma(p, p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < p; ++k) sigma(j, k) = std::pow(rho, std::abs(j - k));
  return sigma;
}

Eigen::MatrixXd draw_gaussian_rows(std::mt19937_64& rng, Eigen::Index rows, const Eigen::MatrixXd& lower) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Z(rows, lower.cols());
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < Z.cols(); ++j) Z(i, j) = normal(rng);
  return Z * lower.transpose();
}

namespace {

Eigen::MatrixXd cholesky_lower(const SimulationConfig& config) {
  Eigen::LLT<Eigen::MatrixXd> llt(ar1_covariance(config.p, config.rho));
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "AR(1) covariance is not positive definite");
  return llt.matrixL();
}

}  // namespace

SimulationDesign generate_design(const SimulationConfig& config) {
  config.validate();
  const Eigen::MatrixXd L = cholesky_lower(config);
  auto rng = make_stream(config.master_seed, StreamKind::Design, 0);
  SimulationDesign design;
  design.points = draw_gaussian_rows(rng, config.num_points, L);
  design.X = draw_gaussian_rows(rng, config.n, L);
  return design;
}

Eigen::MatrixXd replication_design(const SimulationConfig& config, int replication) {
  const Eigen::MatrixXd L = cholesky_lower(config);
  auto rng = make_stream(config.master_seed, StreamKind::Design, static_cast<std::uint64_t>(replication) + 1);
  return draw_gaussian_rows(rng, config.n, L);
}

std::vector<std::string> simulation_column_names(int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("X" + std::to_string(j));
  return names;
}

double relative_loss(double coverage, double alpha) { return std::max(0.0, 1.0 - coverage / (1.0 - alpha)); }

std::optional<double> sigma_contribution(double coverage_t, double coverage_known, double alpha) {
  const double level = 1.0 - alpha;
  const double denom = level - std::min(level, coverage_t);
  if (denom <= 0.0) return std::nullopt;
  return 1.0 - (level - std::min(level, coverage_known)) / denom;
}

double ks_distance_uniform(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / m - u, u - static_cast<double>(i) / m});
  }
  return d;
}

double CoverageReport::coverage(const std::string& method, std::size_t target, std::size_t strategy) const {
  const auto& t = targets.at(target);
  if (t.trials == 0) return std::numeric_limits<double>::quiet_NaN();
  const auto& covered = method == "classical" ? t.classical_covered : t.corrected_covered;
  return static_cast<double>(covered.at(strategy)) / static_cast<double>(t.trials);
}

double CoverageReport::average_coverage(const std::string& method, std::size_t strategy) const {
  if (prediction_targets == 0) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (std::size_t k = 0; k < prediction_targets; ++k) sum += coverage(method, k, strategy);
  return sum / static_cast<double>(prediction_targets);
}

double CoverageReport::size_coverage(const std::string& method, std::size_t size, std::size_t strategy) const {
  auto it = by_size.find(size);
  if (it == by_size.end() || it->second.trials == 0) return std::numeric_limits<double>::quiet_NaN();
  const auto& covered = method == "classical" ? it->second.classical_covered : it->second.corrected_covered;
  return static_cast<double>(covered.at(strategy)) / static_cast<double>(it->second.trials);
}

std::size_t CoverageReport::strategy_index(const std::string& label) const {
  for (std::size_t s = 0; s < strategies.size(); ++s)
    if (strategies[s] == label) return s;
  throw Error(ErrorCode::InvalidArgument, "no sigma strategy '" + label + "' in this report");
}

namespace {

// Prepends the intercept column when the config fits one.
Dataset simulation_dataset(const SimulationConfig& config, const Eigen::MatrixXd& X) {
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(X.rows());
  if (!config.intercept) return Dataset(X, y, simulation_column_names(config.p));
  Eigen::MatrixXd design(X.rows(), X.cols() + 1);
  design << Eigen::VectorXd::Ones(X.rows()), X;
  std::vector<std::string> names{"(Intercept)"};
  for (auto& name : simulation_column_names(config.p)) names.push_back(std::move(name));
  return Dataset(std::move(design), y, std::move(names), InterceptPolicy::ForcedFirstColumn);
}

Eigen::VectorXd augment(const SimulationConfig& config, const Eigen::VectorXd& v, double lead) {
  if (!config.intercept) return v;
  Eigen::VectorXd out(v.size() + 1);
  out << lead, v;
  return out;
}

struct CoefficientOutcome {
  std::string name;
  std::vector<char> classical;
  std::vector<char> corrected;
};

struct ReplicationOutcome {
  bool ok = false;
  std::string failure;
  std::size_t size = 0;
  std::vector<double> sigma;        // per strategy
  std::vector<char> classical;      // prediction target t, strategy s at t * S + s
  std::vector<char> corrected;
  std::vector<double> pivot;
  std::vector<CoefficientOutcome> coefficients;
};

class Replicator {
public:
  Replicator(const SimulationConfig& config, const SimulationDesign& design)
      : config_(config),
        design_(design),
        beta_(augment(config, Eigen::Map<const Eigen::VectorXd>(config.beta.data(), config.p), 0.0)) {
    options_.criterion = config.criterion;
    options_.policy.max_size = config.max_size;
    options_.skip_supersets = config.skip_supersets;
    options_.condition_on_selection = config.select;
    if (config.fixed_design) {
      base_.emplace(simulation_dataset(config, design.X));
      candidates_ = std::make_shared<const CandidateSet>(*base_, options_.policy);
    }
  }

  ReplicationOutcome run(int rep) const {
    ReplicationOutcome out;
    try {
      run_into(rep, out);
      out.ok = true;
    } catch (const Error& e) {
      out = ReplicationOutcome{};
      out.failure = to_string(e.code());
    }
    return out;
  }

private:
  void run_into(int rep, ReplicationOutcome& out) const {
    std::optional<Dataset> own;
    std::shared_ptr<const CandidateSet> candidates = candidates_;
    const Dataset* base = base_ ? &*base_ : nullptr;
    if (!base) {
      own.emplace(simulation_dataset(config_, replication_design(config_, rep)));
      candidates = std::make_shared<const CandidateSet>(*own, options_.policy);
      base = &*own;
    }

    auto rng = make_stream(config_.master_seed, StreamKind::Replication, static_cast<std::uint64_t>(rep));
    const Eigen::VectorXd mean = base->X() * beta_;
    Eigen::VectorXd y = mean + config_.sigma * standard_normal_vector(rng, config_.n);

    Dataset data = base->with_response(std::move(y));
    std::optional<PostSelectionInference> engine;
    if (config_.select)
      engine.emplace(std::move(data), candidates, options_);
    else
      engine.emplace(std::move(data), candidates, options_, base->full_model());
    const auto& S_hat = engine->selected();
    out.size = engine->data().free_size(S_hat);

    const std::size_t S = config_.sigma_strategies.size();
    for (const auto& spec : config_.sigma_strategies) out.sigma.push_back(engine->sigma(spec));

    for (Eigen::Index k = 0; k < design_.points.rows(); ++k) {
      const Eigen::VectorXd x = augment(config_, design_.points.row(k).transpose(), 1.0);
      const double truth = x.dot(beta_);
      const Eigen::VectorXd eta = engine->eta(PredictionMean{x});
      const double conditional_truth = eta.dot(mean);
      const auto event = engine->event(eta);
      for (std::size_t s = 0; s < S; ++s) {
        const auto& spec = config_.sigma_strategies[s];
        const CIResult classical = engine->classical(PredictionMean{x}, config_.alpha, spec);
        const CIResult corrected = engine->corrected(eta, event, config_.alpha, spec);
        out.classical.push_back(classical.covers(truth));
        out.corrected.push_back(corrected.covers(truth));
        double pv = std::numeric_limits<double>::quiet_NaN();
        try {
          pv = engine->pivot(eta, *event, conditional_truth, spec);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::RegionMassUnderflow) throw;
        }
        out.pivot.push_back(pv);
      }
    }

    if (config_.coefficient_targets) {
      const Eigen::VectorXd adjusted = adjusted_coefficients(engine->data(), S_hat, mean);
      for (std::size_t pos = 0; pos < S_hat.size(); ++pos) {
        const int column = S_hat[pos];
        if (engine->data().is_forced(column)) continue;
        CoefficientOutcome c;
        c.name = engine->data().column_names()[static_cast<std::size_t>(column)];
        const Eigen::VectorXd eta = engine->eta(Coefficient{column});
        const auto event = engine->event(eta);
        for (const auto& spec : config_.sigma_strategies) {
          const double truth = adjusted(static_cast<Eigen::Index>(pos));
          c.classical.push_back(engine->classical(Coefficient{column}, config_.alpha, spec).covers(truth));
          c.corrected.push_back(engine->corrected(eta, event, config_.alpha, spec).covers(truth));
        }
        out.coefficients.push_back(std::move(c));
      }
    }
  }

  const SimulationConfig& config_;
  const SimulationDesign& design_;
  Eigen::VectorXd beta_;
  PostSelectionInference::Options options_;
  std::optional<Dataset> base_;
  std::shared_ptr<const CandidateSet> candidates_;
};

}  // namespace

CoverageReport simulate_coverage(const SimulationConfig& config) {
  config.validate();
  const SimulationDesign design = generate_design(config);
  const Replicator replicator(config, design);

  const int reps = config.reps;
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(reps));
  const int workers = std::max(1, std::min(config.workers, reps));
  if (workers == 1) {
    for (int r = 0; r < reps; ++r) outcomes[static_cast<std::size_t>(r)] = replicator.run(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next++; r < reps; r = next++) outcomes[static_cast<std::size_t>(r)] = replicator.run(r);
      });
    for (auto& t : pool) t.join();
  }

  const std::size_t S = config.sigma_strategies.size();
  const std::size_t K = static_cast<std::size_t>(config.num_points);
  CoverageReport report;
  report.config = config;
  report.points = design.points;
  for (const auto& spec : config.sigma_strategies) report.strategies.push_back(spec.label());
  report.prediction_targets = K;
  for (std::size_t k = 0; k < K; ++k)
    report.targets.push_back({"x" + std::to_string(k + 1), std::vector<std::size_t>(S, 0),
                              std::vector<std::size_t>(S, 0), 0});
  if (config.coefficient_targets)
    for (const auto& name : simulation_column_names(config.p))
      report.targets.push_back({name, std::vector<std::size_t>(S, 0), std::vector<std::size_t>(S, 0), 0});
  report.sigma_sums.assign(S, 0.0);
  report.pivots.assign(S, std::vector<std::vector<double>>(K));
  report.attempted = static_cast<std::size_t>(reps);

  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++report.failures[o.failure];
      continue;
    }
    ++report.successes;
    ++report.size_counts[o.size];
    for (std::size_t s = 0; s < S; ++s) report.sigma_sums[s] += o.sigma[s];

    auto& by_size = report.by_size[o.size];
    if (by_size.classical_covered.empty()) {
      by_size.classical_covered.assign(S, 0);
      by_size.corrected_covered.assign(S, 0);
    }
    for (std::size_t k = 0; k < K; ++k) {
      auto& t = report.targets[k];
      ++t.trials;
      ++by_size.trials;
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t idx = k * S + s;
        t.classical_covered[s] += static_cast<std::size_t>(o.classical[idx]);
        t.corrected_covered[s] += static_cast<std::size_t>(o.corrected[idx]);
        by_size.classical_covered[s] += static_cast<std::size_t>(o.classical[idx]);
        by_size.corrected_covered[s] += static_cast<std::size_t>(o.corrected[idx]);
        report.pivots[s][k].push_back(o.pivot[idx]);
      }
    }
    for (const auto& c : o.coefficients) {
      auto it = std::find_if(report.targets.begin() + static_cast<std::ptrdiff_t>(K), report.targets.end(),
                             [&](const TargetTally& t) { return t.name == c.name; });
      ++it->trials;
      for (std::size_t s = 0; s < S; ++s) {
        it->classical_covered[s] += static_cast<std::size_t>(c.classical[s]);
        it->corrected_covered[s] += static_cast<std::size_t>(c.corrected[s]);
      }
    }
  }
  return report;
}

nlohmann::json config_json(const SimulationConfig& c, const Eigen::MatrixXd& points) {
  nlohmann::json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["beta"] = c.beta;
  j["rho"] = c.rho;
  j["sigma"] = c.sigma;
  j["reps"] = c.reps;
  j["alpha"] = c.alpha;
  j["criterion"] = to_string(c.criterion);
  j["sigma_strategies"] = nlohmann::json::array();
  for (const auto& s : c.sigma_strategies) j["sigma_strategies"].push_back(s.label());
  j["num_points"] = c.num_points;
  j["coefficient_targets"] = c.coefficient_targets;
  j["master_seed"] = c.master_seed;
  j["fixed_design"] = c.fixed_design;
  j["intercept"] = c.intercept;
  j["skip_supersets"] = c.skip_supersets;
  j["select"] = c.select;
  j["max_size"] = c.max_size ? nlohmann::json(*c.max_size) : nlohmann::json(nullptr);
  j["points"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index k = 0; k < points.cols(); ++k) row[static_cast<std::size_t>(k)] = points(i, k);
    j["points"].push_back(row);
  }
  return j;
}

Report to_report(const CoverageReport& cov) {
  Report r;
  r.kind = "simulate";
  r.config = config_json(cov.config, cov.points);
  r.replications = cov.successes;
  const double alpha = cov.config.alpha;
  const std::size_t S = cov.strategies.size();

  auto row = [&](const std::string& target, const std::string& method, std::size_t s, std::size_t trials,
                 double c) {
    const double se = trials ? std::sqrt(c * (1.0 - c) / static_cast<double>(trials)) : 0.0;
    r.coverage.push_back({target, method, cov.strategies[s], trials, c, se, relative_loss(c, alpha)});
  };
  for (const char* method : {"classical", "corrected"}) {
    for (std::size_t k = 0; k < cov.targets.size(); ++k)
      for (std::size_t s = 0; s < S; ++s)
        if (cov.targets[k].trials) row(cov.targets[k].name, method, s, cov.targets[k].trials, cov.coverage(method, k, s));
    if (cov.prediction_targets && cov.successes)
      for (std::size_t s = 0; s < S; ++s) row("average", method, s, cov.successes, cov.average_coverage(method, s));
  }

  for (const auto& [size, count] : cov.size_counts) r.histogram.push_back({size, count});
  for (const auto& [size, tally] : cov.by_size)
    for (const char* method : {"classical", "corrected"})
      for (std::size_t s = 0; s < S; ++s)
        r.coverage_by_size.push_back({size, method, cov.strategies[s], tally.trials, cov.size_coverage(method, size, s)});

  for (std::size_t s = 0; s < S; ++s)
    r.sigma_estimates.push_back(
        {cov.strategies[s], cov.successes ? cov.sigma_sums[s] / static_cast<double>(cov.successes) : 0.0, cov.successes});
  for (const auto& [code, count] : cov.failures) r.failures.push_back({code, count});

  // Classical-t uses the selected model's residual variance; the known-sigma
  // interval is its counterpart with the true sigma.
  const auto& strategies = cov.config.sigma_strategies;
  auto find = [&](SigmaSpec::Strategy kind) -> std::optional<std::size_t> {
    for (std::size_t s = 0; s < strategies.size(); ++s)
      if (strategies[s].strategy == kind) return s;
    return std::nullopt;
  };
  const auto t_index = find(SigmaSpec::Strategy::MseAic);
  const auto known_index = find(SigmaSpec::Strategy::Known);
  if (t_index && known_index && cov.prediction_targets && cov.successes)
    r.sigma_contribution = sigma_contribution(cov.average_coverage("classical", *t_index),
                                              cov.average_coverage("classical", *known_index), alpha);
  return r;
}

}  // namespace postaic
