#pragma once

#include "postaic/interval_union.hpp"

namespace postaic {

/// log Phi(z) for the standard normal, accurate deep into the lower tail.
double log_ndtr(double z);
/// Phi(z)
double ndtr(double z);

/// Probability that N(mu, lambda^2) lands in (lo, hi), and its logarithm.
/// Differences are taken on the tail closest to the interval so that
/// intervals far from mu keep full relative precision.
double log_normal_measure(double lo, double hi, double mu, double lambda);
double normal_measure(double lo, double hi, double mu, double lambda);
double log_normal_measure(const IntervalUnion& region, double mu, double lambda);

struct TruncatedNormal {
  double mu;
  double lambda;
  IntervalUnion region;
};

/// F_{mu,lambda,R}(x) = Phi((-inf, x] ∩ R) / Phi(R).
/// Throws RegionMassUnderflow when neither side of x carries representable mass.
double truncated_cdf(double x, const TruncatedNormal& spec);
/// 1 - F, computed without cancellation.
double truncated_sf(double x, const TruncatedNormal& spec);

struct MeanInversion {
  double mu;
  // True when the target was not reached for any representable mean; mu is
  // then -inf or +inf.
  bool unbounded = false;
  int iterations = 0;
};

/// Solves F_{mu,lambda,R}(x_obs) = target for mu. F is strictly decreasing in
/// mu, so the root is bracketed by doubling steps away from x_obs and then
/// bisected until the bracket collapses to rounding level.
MeanInversion invert_mean(double target, double x_obs, double lambda, const IntervalUnion& region);

}  // namespace postaic
