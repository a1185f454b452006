#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postaic/config.hpp"
#include "postaic/report.hpp"
#include "postaic/rng.hpp"

namespace postaic {

// Sigma_jk = rho^|j-k|
Eigen::MatrixXd ar1_covariance(int p, double rho);

/// Rows i.i.d. N(0, L L^T) given the lower Cholesky factor L.
Eigen::MatrixXd draw_gaussian_rows(std::mt19937_64& rng, Eigen::Index rows, const Eigen::MatrixXd& lower);

struct SimulationDesign {
  Eigen::MatrixXd X;       // n x p
  Eigen::MatrixXd points;  // num_points x p, the prediction targets
};

/// The design stream (index 0) yields the new points first, then X. With a
/// random design, replication r redraws X from design stream r + 1.
SimulationDesign generate_design(const SimulationConfig& config);
Eigen::MatrixXd replication_design(const SimulationConfig& config, int replication);

std::vector<std::string> simulation_column_names(int p);

struct TargetTally {
  std::string name;
  // Indexed by sigma strategy.
  std::vector<std::size_t> classical_covered;
  std::vector<std::size_t> corrected_covered;
  std::size_t trials = 0;
};

struct SizeTally {
  std::vector<std::size_t> classical_covered;
  std::vector<std::size_t> corrected_covered;
  std::size_t trials = 0;  // prediction-target evaluations
};

struct CoverageReport {
  SimulationConfig config;
  Eigen::MatrixXd points;
  std::vector<std::string> strategies;  // sigma strategy labels
  std::size_t prediction_targets = 0;   // the first entries of `targets`
  std::vector<TargetTally> targets;
  std::size_t attempted = 0;
  std::size_t successes = 0;
  std::map<std::size_t, std::size_t> size_counts;
  std::map<std::size_t, SizeTally> by_size;
  std::map<std::string, std::size_t> failures;
  std::vector<double> sigma_sums;  // per strategy, over successes
  // pivots[strategy][target] over successful replications, evaluated at
  // eta^T X beta; NaN where the pivot underflowed.
  std::vector<std::vector<std::vector<double>>> pivots;

  double coverage(const std::string& method, std::size_t target, std::size_t strategy) const;
  // Mean over prediction targets.
  double average_coverage(const std::string& method, std::size_t strategy) const;
  double size_coverage(const std::string& method, std::size_t size, std::size_t strategy) const;
  std::size_t strategy_index(const std::string& label) const;
};

CoverageReport simulate_coverage(const SimulationConfig& config);

// 1 - coverage / (1 - alpha), floored at 0.
double relative_loss(double coverage, double alpha);
// Share of the classical-t coverage shortfall removed by knowing sigma;
// empty when the classical-t interval has no shortfall.
std::optional<double> sigma_contribution(double coverage_t, double coverage_known, double alpha);
// sup |F_n - F| against Unif(0,1); NaNs are ignored.
double ks_distance_uniform(std::vector<double> values);

nlohmann::json config_json(const SimulationConfig& config, const Eigen::MatrixXd& points);
Report to_report(const CoverageReport& coverage);

}  // namespace postaic
