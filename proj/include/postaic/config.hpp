#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "postaic/criteria.hpp"
#include "postaic/inference.hpp"

namespace postaic {

struct SimulationConfig {
  int n = 50;
  int p = 10;
  std::vector<double> beta{1, 2, 3, 0, 0, 0, 0, 0, 0, 0};
  double rho = 0.5;
  double sigma = 1.0;
  int reps = 5000;
  double alpha = 0.05;
  Criterion criterion = Criterion::AIC;
  std::vector<SigmaSpec> sigma_strategies{SigmaSpec::known(1.0), SigmaSpec::mse_aic(), SigmaSpec::mse_full()};
  int num_points = 10;             // prediction targets x^1..x^k
  bool coefficient_targets = false;
  std::uint64_t master_seed = 20240101;
  bool fixed_design = true;
  bool intercept = true;          // fit a forced intercept column in every model
  bool skip_supersets = true;
  bool select = true;              // false: always use the full model, no conditioning
  std::optional<std::size_t> max_size;
  int workers = 1;

  // Throws InvalidArgument on inconsistent dimensions or ranges.
  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Lists are comma separated.
/// A bare "known" sigma strategy uses the configured sigma.
SimulationConfig parse_config(std::istream& in);
SimulationConfig load_config(const std::string& path);
std::string to_text(const SimulationConfig& config);

}  // namespace postaic
