#include <gtest/gtest.h>

#include "postaic/error.hpp"
#include "postaic/geometry.hpp"
#include "postaic/inference.hpp"
#include "support.hpp"

using namespace postaic;

namespace {

ComparisonQuadratic quad(double a2, double a1, double a0) {
  ComparisonQuadratic q;
  q.a2 = a2;
  q.a1 = a1;
  q.a0 = a0;
  q.a2_scale = q.a1_scale = 1.0;
  return q;
}

oracle::Kind kind_of(Criterion c) {
  return c == Criterion::AIC ? oracle::Kind::AIC : c == Criterion::BIC ? oracle::Kind::BIC : oracle::Kind::AICc;
}

struct Problem {
  oracle::Instance inst;
  Dataset data;
  IndexSet selected;
  EtaDecomposition decomp;
};

// Random design with some signal, selection by the library, eta for either
// the first selected coefficient or a random new point.
Problem make_problem(std::mt19937_64& rng, int n, int p, Criterion crit, bool prediction) {
  auto inst = oracle::gaussian_instance(rng, n, p);
  inst.y += 0.7 * inst.X.col(0) - 0.4 * inst.X.col(p - 1);
  Dataset data(inst.X, inst.y, oracle::names(p));
  const IndexSet sel = best_subset(data, CriterionSpec(crit, n)).selected;
  InferenceTarget target = Coefficient{sel.indices().front()};
  if (prediction) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(p);
    for (int j = 0; j < p; ++j) x(j) = normal(rng);
    target = PredictionMean{x};
  }
  const Eigen::VectorXd eta = eta_for_target(data, sel, target);
  auto decomp = decompose(inst.y, eta);
  return {std::move(inst), std::move(data), sel, std::move(decomp)};
}

void expect_same_region(const IntervalUnion& a, const IntervalUnion& b, double tol) {
  ASSERT_EQ(a.size(), b.size()) << a.to_string() << " vs " << b.to_string();
  auto same = [tol](double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v)) return u == v;
    return std::abs(u - v) <= tol * (1.0 + std::abs(u));
  };
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(same(a.intervals()[k].lo, b.intervals()[k].lo)) << a.to_string() << " vs " << b.to_string();
    EXPECT_TRUE(same(a.intervals()[k].hi, b.intervals()[k].hi)) << a.to_string() << " vs " << b.to_string();
  }
}

}  // namespace

TEST(PositiveSet, QuadraticCases) {
  // (t-1)(t-3) > 0
  EXPECT_EQ(positive_set(quad(1, -4, 3)), IntervalUnion({{-kInf, 1}, {3, kInf}}));
  // -(t-1)(t-3) > 0
  EXPECT_EQ(positive_set(quad(-1, 4, -3)), IntervalUnion({{1, 3}}));
  EXPECT_TRUE(positive_set(quad(1, 0, 1)).is_real_line());
  EXPECT_TRUE(positive_set(quad(-1, 0, -1)).empty());
  // double root: everything but the root, or nothing
  EXPECT_EQ(positive_set(quad(1, -2, 1)), IntervalUnion({{-kInf, 1}, {1, kInf}}));
  EXPECT_TRUE(positive_set(quad(-1, 2, -1)).empty());
}

TEST(PositiveSet, DegenerateCases) {
  EXPECT_EQ(positive_set(quad(0, 2, -4)), IntervalUnion({{2, kInf}}));
  EXPECT_EQ(positive_set(quad(0, -2, -4)), IntervalUnion({{-kInf, -2}}));
  EXPECT_TRUE(positive_set(quad(0, 0, 1)).is_real_line());
  EXPECT_TRUE(positive_set(quad(0, 0, -1)).empty());
  // leading term far below its scale is treated as zero
  EXPECT_EQ(positive_set(quad(1e-13, 2, -4)), IntervalUnion({{2, kInf}}));
}

TEST(PositiveSet, RootsStayAccurateUnderCancellation) {
  // roots 1e-8 and 1e8
  const auto s = positive_set(quad(1, -(1e8 + 1e-8), 1));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.intervals()[0].hi, 1e-8, 1e-22);
  EXPECT_NEAR(s.intervals()[1].lo, 1e8, 1e-6);
}

TEST(Decompose, ReconstructsResponse) {
  std::mt19937_64 rng(40);
  auto inst = oracle::gaussian_instance(rng, 12, 2);
  const Eigen::VectorXd eta = inst.X.col(0);
  const auto d = decompose(inst.y, eta);
  EXPECT_LT((d.response_at(d.eta_dot_y) - inst.y).norm(), 1e-12);
  EXPECT_NEAR(d.z.dot(eta), 0.0, 1e-12);
  EXPECT_THROW(decompose(inst.y, Eigen::VectorXd::Zero(12)), Error);
  EXPECT_THROW(decompose(inst.y, Eigen::VectorXd::Ones(5)), Error);
}

TEST(ComparisonQuadratic, MatchesDirectRssDifference) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pr = make_problem(rng, 15, 4, Criterion::AIC, trial % 2 == 1);
    const SubmodelQR sel(pr.data.X(), pr.selected);
    const CriterionSpec spec(Criterion::AIC, 15);
    for (const auto& S : enumerate_candidates(pr.data, {})) {
      if (S == pr.selected) continue;
      const SubmodelQR comp(pr.data.X(), S);
      const auto q = general_quadratic(pr.decomp, sel, pr.selected.size(), comp, S.size(), spec);
      const double omega = std::exp(2.0 * (static_cast<double>(pr.selected.size()) - static_cast<double>(S.size())) / 15.0);
      for (double t : {-3.0, 0.0, 1.7, pr.decomp.eta_dot_y}) {
        const Eigen::VectorXd yt = pr.decomp.response_at(t);
        const double direct = oracle::rss(pr.inst.X, S.indices(), yt) - omega * oracle::rss(pr.inst.X, pr.selected.indices(), yt);
        EXPECT_NEAR(q(t), direct, 1e-9 * (1.0 + yt.squaredNorm()));
      }
    }
  }
}

TEST(SelectionEvent, RegionMatchesBruteForceSelectionOnGrid) {
  std::mt19937_64 rng(42);
  for (Criterion crit : {Criterion::AIC, Criterion::BIC}) {
    for (int trial = 0; trial < 24; ++trial) {
      const int p = 3 + trial % 3;
      const auto pr = make_problem(rng, 15, p, crit, trial % 2 == 0);
      const auto ev = selection_event(pr.data, pr.decomp, pr.selected, CriterionSpec(crit, 15));
      EXPECT_TRUE(ev.region.contains(pr.decomp.eta_dot_y));
      const double half = 8.0 * pr.decomp.eta.norm() * std::sqrt(pr.decomp.z.squaredNorm() / 15.0 + 1.0);
      for (int k = 0; k <= 200; ++k) {
        const double t = pr.decomp.eta_dot_y - half + 2.0 * half * k / 200.0;
        bool near_edge = false;
        for (const auto& iv : ev.region.intervals())
          near_edge |= std::abs(t - iv.lo) < 1e-7 || std::abs(t - iv.hi) < 1e-7;
        if (near_edge) continue;
        const auto picked = oracle::best_subset(pr.inst.X, pr.decomp.response_at(t), kind_of(crit));
        EXPECT_EQ(picked == pr.selected.indices(), ev.region.contains(t)) << "t=" << t;
      }
    }
  }
}

TEST(SelectionEvent, SimplifiedRouteMatchesGeneralWhenEtaInSpan) {
  std::mt19937_64 rng(43);
  const CriterionSpec spec(Criterion::AIC, 20);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pr = make_problem(rng, 20, 4, Criterion::AIC, false);
    const SubmodelQR sel(pr.data.X(), pr.selected);
    ASSERT_TRUE(eta_in_span(pr.decomp.eta, sel));
    for (const auto& S : enumerate_candidates(pr.data, {})) {
      if (S == pr.selected) continue;
      const auto general = comparison_feasible_set(pr.decomp, pr.data, pr.selected, S, spec);
      expect_same_region(general, simplified_comparison(pr.decomp, pr.data, pr.selected, S, spec), 1e-8);
    }
  }
}

TEST(SelectionEvent, SimplifiedRouteRejectsEtaOutsideSpan) {
  std::mt19937_64 rng(44);
  auto inst = oracle::gaussian_instance(rng, 20, 4);
  const Dataset data(inst.X, inst.y, oracle::names(4));
  const CriterionSpec spec(Criterion::AIC, 20);
  const IndexSet sel = best_subset(data, spec).selected;
  // a generic direction is not a combination of the selected columns
  const Eigen::VectorXd eta = oracle::gaussian_instance(rng, 20, 1).y;
  const auto d = decompose(inst.y, eta);
  ASSERT_FALSE(eta_in_span(eta, SubmodelQR(data.X(), sel)));
  try {
    selection_event(CandidateSet(data), d, sel, spec, {true, GeometryRoute::Simplified});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EtaNotInSpan);
  }
  // the general route still applies once supersets are compared too
  const auto ev = selection_event(CandidateSet(data), d, sel, spec, {false, GeometryRoute::General});
  EXPECT_TRUE(ev.region.contains(d.eta_dot_y));
}

TEST(SelectionEvent, SupersetComparisonsDoNotConstrainCoefficients) {
  std::mt19937_64 rng(45);
  const CriterionSpec spec(Criterion::AIC, 18);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pr = make_problem(rng, 18, 5, Criterion::AIC, false);
    for (const auto& S : enumerate_candidates(pr.data, {})) {
      if (S == pr.selected || !pr.selected.is_strict_subset_of(S)) continue;
      EXPECT_TRUE(comparison_feasible_set(pr.decomp, pr.data, pr.selected, S, spec).is_real_line()) << S.to_string();
    }
  }
}

TEST(SelectionEvent, SkippingSupersetsLeavesRegionUnchanged) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pr = make_problem(rng, 15, 4, Criterion::AIC, false);
    const CriterionSpec spec(Criterion::AIC, 15);
    const auto on = selection_event(pr.data, pr.decomp, pr.selected, spec, true);
    const auto off = selection_event(pr.data, pr.decomp, pr.selected, spec, false);
    EXPECT_EQ(off.skipped_count(), 0u);
    std::size_t supersets = 0;
    for (const auto& S : enumerate_candidates(pr.data, {})) supersets += pr.selected.is_strict_subset_of(S);
    EXPECT_EQ(on.skipped_count(), supersets);
    expect_same_region(on.region, off.region, 1e-8);
  }
}

TEST(SelectionEvent, RejectsModelThatWasNotSelected) {
  std::mt19937_64 rng(47);
  const auto pr = make_problem(rng, 15, 3, Criterion::AIC, false);
  IndexSet other{0, 1, 2};
  if (other == pr.selected) other = IndexSet{1};
  try {
    selection_event(pr.data, pr.decomp, other, CriterionSpec(Criterion::AIC, 15));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSelectedModel);
  }
}

TEST(SupersetLowerBound, HoldsOnTheSelectionEvent) {
  std::mt19937_64 rng(48);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto pr = make_problem(rng, 15, 4, Criterion::AIC, false);
    const int coef = pr.selected.indices().front();
    const double bound = superset_lower_bound(pr.data, pr.decomp, pr.selected, coef, CriterionSpec(Criterion::AIC, 15));
    EXPECT_GE(bound, 0.0);
    EXPECT_GE(pr.decomp.eta_dot_y * pr.decomp.eta_dot_y, bound * (1.0 - 1e-10));
    // points of the event sit at least sqrt(bound) from zero
    const auto ev = selection_event(pr.data, pr.decomp, pr.selected, CriterionSpec(Criterion::AIC, 15));
    if (bound > 0.0) {
      EXPECT_FALSE(ev.region.contains(0.0));
      EXPECT_GE(ev.region.distance(0.0), std::sqrt(bound) * (1.0 - 1e-8));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}
