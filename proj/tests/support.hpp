// Independent reference computations used as test oracles. Nothing here
// calls into the library's QR, criteria or truncated-normal code.
#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "postaic/interval_union.hpp"
#include "postaic/model.hpp"

namespace oracle {

inline Eigen::MatrixXd columns(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X.col(cols[k]);
  return out;
}

// Normal equations solved with LDLT; fine for the well-conditioned test designs.
inline double rss(const Eigen::MatrixXd& X, const std::vector<int>& cols, const Eigen::VectorXd& y) {
  if (cols.empty()) return y.squaredNorm();
  const Eigen::MatrixXd Xs = columns(X, cols);
  const Eigen::VectorXd b = (Xs.transpose() * Xs).ldlt().solve(Xs.transpose() * y);
  return (y - Xs * b).squaredNorm();
}

// Dense residual projector I - X_S (X_S^T X_S)^{-1} X_S^T.
inline Eigen::MatrixXd residual_projector(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
  const Eigen::Index n = X.rows();
  if (cols.empty()) return Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Xs = columns(X, cols);
  return Eigen::MatrixXd::Identity(n, n) - Xs * (Xs.transpose() * Xs).inverse() * Xs.transpose();
}

enum class Kind { AIC, BIC, AICc };

// Textbook forms with the Gaussian log-likelihood constant kept in; they
// differ from the library's scores by a model-independent shift only.
inline double score(Kind kind, std::size_t k, double rss_value, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double loglik_term = nn * std::log(rss_value / nn) + nn * (1.0 + std::log(2.0 * M_PI));
  switch (kind) {
    case Kind::AIC: return loglik_term + 2.0 * kk;
    case Kind::BIC: return loglik_term + std::log(nn) * kk;
    case Kind::AICc: return loglik_term + 2.0 * kk * nn / (nn - kk - 1.0);
  }
  return 0.0;
}

// Exhaustive search over all nonempty subsets of the free columns, forced
// columns [0, forced) always present. Ties go to fewer columns, then the
// lexicographically smaller index list.
inline std::vector<int> best_subset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Kind kind, int forced = 0,
                                    bool include_empty = false) {
  const int p = static_cast<int>(X.cols());
  const int free = p - forced;
  std::vector<int> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (unsigned mask = include_empty ? 0u : 1u; mask < (1u << free); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < forced; ++j) cols.push_back(j);
    for (int j = 0; j < free; ++j)
      if (mask & (1u << j)) cols.push_back(forced + j);
    const std::size_t k = cols.size() - static_cast<std::size_t>(forced);
    const double s = score(kind, k, rss(X, cols, y), static_cast<std::size_t>(X.rows()));
    const bool better = s < best_score ||
                        (s == best_score && (cols.size() < best.size() || (cols.size() == best.size() && cols < best)));
    if (better) {
      best_score = s;
      best = cols;
    }
  }
  return best;
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Adaptive Gauss-Kronrod integration of the N(mu, lambda^2) density over the
// region, below x (or everywhere when x is +inf). The density is rescaled by
// its largest value on the region so far-tail regions do not underflow; the
// scale cancels in ratios.
struct QuadratureCdf {
  double mu;
  double lambda;
  postaic::IntervalUnion region;

  double anchor() const {
    // distance (in sd units) from mu to the nearest point of the region
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : region.intervals()) {
      double d = 0.0;
      if (mu <= iv.lo) d = (iv.lo - mu) / lambda;
      else if (mu >= iv.hi) d = (mu - iv.hi) / lambda;
      best = std::min(best, d);
    }
    return best;
  }

  double scaled_mass(double upto) const { return scaled_mass_between(-std::numeric_limits<double>::infinity(), upto); }
  double scaled_mass_above(double from) const {
    return scaled_mass_between(from, std::numeric_limits<double>::infinity());
  }

  double scaled_mass_between(double from, double upto) const {
    const double a = anchor();
    double total = 0.0;
    for (const auto& iv : region.intervals()) {
      const double lo = (std::max(iv.lo, from) - mu) / lambda;
      const double hi = (std::min(iv.hi, upto) - mu) / lambda;
      if (!(lo < hi)) continue;
      auto f = [a](double u) { return std::exp(-0.5 * (u * u - a * a)); };
      double err = 0.0;
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-15, &err);
    }
    return total;
  }

  double cdf(double x) const { return scaled_mass(x) / scaled_mass(std::numeric_limits<double>::infinity()); }
};

struct Instance {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

inline Instance gaussian_instance(std::mt19937_64& rng, int n, int p) {
  std::normal_distribution<double> normal;
  Instance inst{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) inst.X(i, j) = normal(rng);
    inst.y(i) = normal(rng);
  }
  return inst;
}

struct TruncationCase {
  double mu;
  double lambda;
  postaic::IntervalUnion region;
  double x;  // a point inside the region
};

// Random truncated-normal problems. One case in three sits entirely in a
// tail at least 10 standard deviations from the mean.
inline TruncationCase random_truncation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TruncationCase c{};
  c.mu = -5.0 + 10.0 * u(rng);
  c.lambda = std::exp(std::log(0.1) + u(rng) * std::log(100.0));
  std::vector<postaic::Interval> ivs;
  const int kind = static_cast<int>(u(rng) * 3.0);
  if (kind == 2) {
    const double side = u(rng) < 0.5 ? -1.0 : 1.0;
    const double start = 10.0 + 2.0 * u(rng);
    const double width = u(rng) < 0.3 ? postaic::kInf : 0.2 + 3.0 * u(rng);
    double a = c.mu + side * start * c.lambda;
    double b = width == postaic::kInf ? side * postaic::kInf : a + side * width * c.lambda;
    if (a > b) std::swap(a, b);
    ivs.push_back({a, b});
  } else {
    const int k = 1 + static_cast<int>(u(rng) * 4.0);
    for (int i = 0; i < k; ++i) {
      double a = c.mu + c.lambda * (-6.0 + 12.0 * u(rng));
      double b = c.mu + c.lambda * (-6.0 + 12.0 * u(rng));
      if (a > b) std::swap(a, b);
      if (i == 0 && u(rng) < 0.3) a = -postaic::kInf;
      if (i == k - 1 && u(rng) < 0.3) b = postaic::kInf;
      ivs.push_back({a, b + 0.05 * c.lambda});
    }
  }
  c.region = postaic::IntervalUnion(ivs);
  const auto& pick = c.region.intervals()[static_cast<std::size_t>(u(rng) * static_cast<double>(c.region.size()))];
  const double lo = std::isfinite(pick.lo) ? pick.lo : (std::isfinite(pick.hi) ? pick.hi : c.mu) - 3.0 * c.lambda;
  const double hi = std::isfinite(pick.hi) ? pick.hi : lo + 3.0 * c.lambda;
  c.x = lo + (0.05 + 0.9 * u(rng)) * (hi - lo);
  return c;
}

inline std::vector<std::string> names(int p) {
  std::vector<std::string> out;
  for (int j = 0; j < p; ++j) out.push_back("v" + std::to_string(j));
  return out;
}

}  // namespace oracle
