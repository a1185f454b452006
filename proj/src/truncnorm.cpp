#include "postaic/truncnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "postaic/error.hpp"

namespace postaic {

namespace {

constexpr double kAsymptoticCut = -20.0;

// log(1 - exp(d)) for d <= 0.
double log1mexp(double d) {
  if (d == -kInf) return 0.0;
  if (d > -std::numbers::ln2) return std::log(-std::expm1(d));
  return std::log1p(-std::exp(d));
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Mills-ratio series S(z) with Phi(z) ~ phi(z) / (-z) * S(z), z << 0.
double mills_series(double z) {
  const double z2 = z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) / z2;
    sum += term;
  }
  return sum;
}

double log_ndtr_asymptotic(double z) {
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(mills_series(z));
}

double log_phi(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi); }

}  // namespace

double ndtr(double z) {
  if (std::isnan(z)) return z;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double log_ndtr(double z) {
  if (std::isnan(z)) return z;
  if (z == kInf) return 0.0;
  if (z == -kInf) return -kInf;
  if (z > 6.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > kAsymptoticCut) return std::log(ndtr(z));
  return log_ndtr_asymptotic(z);
}

namespace {

// Intervals with w * (|z| + w) below this are integrated directly.
constexpr double kShortInterval = 1.0;

// log Phi(z - w) - log Phi(z) for z <= 0 and w >= 0, without forming the two
// logarithms separately when they would cancel.
double log_ndtr_gap(double z, double w) {
  if (w == kInf) return -kInf;
  if (w == 0.0) return 0.0;
  const double y = z - w;
  if (z < kAsymptoticCut) {
    // difference of the asymptotic expansions, term by term
    const double az = -z;
    return w * z - 0.5 * w * w - std::log1p(w / az) + std::log(mills_series(y) / mills_series(z));
  }
  if (w * (std::abs(z) + w) <= kShortInterval) {
    // Phi(z) - Phi(z - w) = phi(z) * int_0^w exp(z s - s^2 / 2) ds
    auto f = [z](double s) { return std::exp(z * s - 0.5 * s * s); };
    const double J = boost::math::quadrature::gauss<double, 20>::integrate(f, 0.0, w);
    const double lz = log_ndtr(z);
    return std::log1p(-std::exp(log_phi(z) - lz) * J);
  }
  const double lz = log_ndtr(z);
  const double ly = log_ndtr(y);
  if (ly == -kInf) return -kInf;
  return ly - lz;
}

}  // namespace

namespace {

// log(Phi(z) / phi(z)) for z <= 0.
double log_mills(double z) {
  if (z < kAsymptoticCut) return -std::log(-z) + std::log(mills_series(z));
  return log_ndtr(z) - log_phi(z);
}

// log P(lo < N(mu, lambda^2) < hi) - log phi(d) with d = (r - mu) / lambda.
// Endpoints enter only through (t - r) / lambda, so pieces measured against
// the same reference r stay consistent even when mu is far from the region.
double log_mass_relative(double lo, double hi, double mu, double lambda, double r) {
  if (!(lo < hi)) return -kInf;
  const double d = (r - mu) / lambda;
  const double dlo = (lo - r) / lambda;
  const double dhi = (hi - r) / lambda;
  const double a = d + dlo;
  const double b = d + dhi;
  const double w = (std::isfinite(lo) && std::isfinite(hi)) ? (hi - lo) / lambda : kInf;
  // log phi(d + delta) - log phi(d)
  auto shift = [d](double delta) { return -0.5 * delta * (2.0 * d + delta); };
  if (b <= 0.0) {
    const double head = log_mills(b) + shift(dhi);
    if (std::isnan(head) || head == -kInf) return -kInf;
    return head + log1mexp(log_ndtr_gap(b, w));
  }
  if (a >= 0.0) {
    const double head = log_mills(-a) + shift(dlo);
    if (std::isnan(head) || head == -kInf) return -kInf;
    return head + log1mexp(log_ndtr_gap(-a, w));
  }
  // Straddles the mean. A short piece is integrated directly; otherwise both
  // excluded tails are at most one half and nothing cancels.
  double log_mass;
  if (w <= kShortInterval) {
    auto f = [](double t) { return std::exp(-0.5 * t * t); };
    log_mass = std::log(boost::math::quadrature::gauss<double, 20>::integrate(f, a, b)) -
               0.5 * std::log(2.0 * std::numbers::pi);
  } else {
    log_mass = std::log1p(-(ndtr(a) + ndtr(-b)));
  }
  return log_mass - log_phi(d);
}

}  // namespace

double log_normal_measure(double lo, double hi, double mu, double lambda) {
  return log_mass_relative(lo, hi, mu, lambda, mu) + log_phi(0.0);
}

double normal_measure(double lo, double hi, double mu, double lambda) {
  return std::exp(log_normal_measure(lo, hi, mu, lambda));
}

double log_normal_measure(const IntervalUnion& region, double mu, double lambda) {
  double total = -kInf;
  for (const auto& iv : region.intervals()) total = log_add(total, log_normal_measure(iv.lo, iv.hi, mu, lambda));
  return total;
}

namespace {

struct SplitMass {
  double log_below;
  double log_above;
};

// Point the masses are measured against: x itself inside the region, the end
// of the interval below it in a gap, the region point nearest mu for x = ±inf.
double reference_point(double x, const TruncatedNormal& spec) {
  const auto& ivs = spec.region.intervals();
  if (ivs.empty()) return spec.mu;
  if (!std::isfinite(x)) {
    double best = spec.mu, dist = kInf;
    for (const auto& iv : ivs) {
      const double c = std::clamp(spec.mu, iv.lo, iv.hi);
      if (std::abs(c - spec.mu) < dist) {
        dist = std::abs(c - spec.mu);
        best = c;
      }
    }
    return best;
  }
  double r = ivs.front().lo;
  for (const auto& iv : ivs) {
    if (iv.lo < x && x < iv.hi) return x;
    if (iv.hi <= x) r = iv.hi;
  }
  return r;
}

SplitMass split_mass(double x, const TruncatedNormal& spec) {
  if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive and finite");
  if (std::isnan(spec.mu) || std::isnan(x)) throw Error(ErrorCode::InvalidArgument, "NaN in truncated normal");
  SplitMass m{-kInf, -kInf};
  // Masses relative to phi at x; only their ratio matters.
  const double r = reference_point(x, spec);
  auto mass = [&](double lo, double hi) { return log_mass_relative(lo, hi, spec.mu, spec.lambda, r); };
  for (const auto& iv : spec.region.intervals()) {
    if (iv.hi <= x) {
      m.log_below = log_add(m.log_below, mass(iv.lo, iv.hi));
    } else if (iv.lo >= x) {
      m.log_above = log_add(m.log_above, mass(iv.lo, iv.hi));
    } else {
      m.log_below = log_add(m.log_below, mass(iv.lo, x));
      m.log_above = log_add(m.log_above, mass(x, iv.hi));
    }
  }
  if (m.log_below == -kInf && m.log_above == -kInf) {
    if (spec.region.empty()) throw Error(ErrorCode::InvalidArgument, "truncation region is empty");
    throw Error(ErrorCode::RegionMassUnderflow, "region carries no representable mass at mu=" + std::to_string(spec.mu));
  }
  return m;
}

// p / (p + q) from log p and log q.
double share(double log_p, double log_q) {
  if (log_p == -kInf) return 0.0;
  if (log_q == -kInf) return 1.0;
  const double d = log_q - log_p;
  if (d >= 0.0) {
    const double e = std::exp(-d);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(d));
}

}  // namespace

double truncated_cdf(double x, const TruncatedNormal& spec) {
  const SplitMass m = split_mass(x, spec);
  return share(m.log_below, m.log_above);
}

double truncated_sf(double x, const TruncatedNormal& spec) {
  const SplitMass m = split_mass(x, spec);
  return share(m.log_above, m.log_below);
}

MeanInversion invert_mean(double target, double x_obs, double lambda, const IntervalUnion& region) {
  if (!(target > 0.0 && target < 1.0)) throw Error(ErrorCode::InvalidArgument, "target must lie in (0, 1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!std::isfinite(x_obs)) throw Error(ErrorCode::InvalidArgument, "observation must be finite");
  const double slack = 1e-9 * std::max(1.0, std::abs(x_obs));
  if (!region.contains(x_obs) && region.distance(x_obs) > slack)
    throw Error(ErrorCode::ObservationOutsideRegion,
                "x=" + std::to_string(x_obs) + " not in " + region.to_string());

  MeanInversion out{};
  // G(mu) = F(mu) - target is strictly decreasing. A far-away mean whose mass
  // cannot be represented behaves like the limit of F on that side.
  auto excess = [&](double mu, double limit_sign) {
    try {
      return truncated_cdf(x_obs, {mu, lambda, region}) - target;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RegionMassUnderflow) throw;
      return limit_sign;
    }
  };

  constexpr int kMaxDoublings = 60;
  double step = lambda;
  double lo = x_obs - step;
  double g_lo = excess(lo, 1.0);
  for (int k = 0; g_lo <= 0.0; ++k) {
    if (k == kMaxDoublings) return MeanInversion{-kInf, true, k};
    step *= 2.0;
    lo = x_obs - step;
    g_lo = excess(lo, 1.0);
  }
  step = lambda;
  double hi = x_obs + step;
  double g_hi = excess(hi, -1.0);
  for (int k = 0; g_hi >= 0.0; ++k) {
    if (k == kMaxDoublings) return MeanInversion{kInf, true, k};
    step *= 2.0;
    hi = x_obs + step;
    g_hi = excess(hi, -1.0);
  }
  if (std::isnan(g_lo) || std::isnan(g_hi)) throw Error(ErrorCode::BracketFailure, "non-finite pivot while bracketing");

  constexpr int kMaxBisections = 200;
  double mid = 0.5 * (lo + hi);
  double g_mid = 0.0;
  int it = 0;
  for (; it < kMaxBisections; ++it) {
    mid = 0.5 * (lo + hi);
    g_mid = excess(mid, 0.0);
    if (std::isnan(g_mid)) throw Error(ErrorCode::BracketFailure, "non-finite pivot during bisection");
    if (g_mid == 0.0) break;
    if (g_mid > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::max({lambda, std::abs(lo), std::abs(hi)})) break;
  }
  mid = 0.5 * (lo + hi);
  g_mid = excess(mid, 0.0);
  if (std::abs(g_mid) > 1e-8)
    throw Error(ErrorCode::BracketFailure, "pivot residual " + std::to_string(g_mid) + " after bisection");
  out.mu = mid;
  out.iterations = it;
  return out;
}

}  // namespace postaic
