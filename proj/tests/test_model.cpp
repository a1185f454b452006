#include <gtest/gtest.h>

#include "postaic/error.hpp"
#include "postaic/model.hpp"
#include "support.hpp"

using namespace postaic;

namespace {

Dataset small_dataset(std::uint64_t seed, int n, int p, InterceptPolicy policy = InterceptPolicy::None) {
  std::mt19937_64 rng(seed);
  auto inst = oracle::gaussian_instance(rng, n, p);
  if (policy == InterceptPolicy::ForcedFirstColumn) inst.X.col(0).setOnes();
  return Dataset(inst.X, inst.y, oracle::names(p), policy);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantViolation;
}

}  // namespace

TEST(IndexSet, SortsAndRejectsDuplicates) {
  IndexSet s{3, 0, 2};
  EXPECT_EQ(s.indices(), (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(s.position_of(2), 1);
  EXPECT_EQ(s.position_of(1), -1);
  EXPECT_EQ(code_of([] { IndexSet{1, 1}; }), ErrorCode::InvalidArgument);
}

TEST(IndexSet, SubsetRelationsAndMasks) {
  IndexSet a{0, 2};
  IndexSet b{0, 1, 2};
  EXPECT_TRUE(a.is_subset_of(b));
  EXPECT_TRUE(a.is_strict_subset_of(b));
  EXPECT_FALSE(b.is_subset_of(a));
  EXPECT_FALSE(b.is_strict_subset_of(b));
  EXPECT_EQ(IndexSet::from_mask(b.mask()), b);
  EXPECT_EQ(a.mask(), 5u);
}

TEST(Dataset, ValidatesShapesAndNames) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(6, 2);
  Eigen::VectorXd y = Eigen::VectorXd::Random(6);
  EXPECT_EQ(code_of([&] { Dataset(X, Eigen::VectorXd::Zero(5), {"a", "b"}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { Dataset(X, y, {"a", "a"}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { Dataset(X, y, {"a"}); }), ErrorCode::DimensionMismatch);
  Eigen::MatrixXd wide = Eigen::MatrixXd::Random(2, 2);
  EXPECT_ANY_THROW(Dataset(wide, Eigen::VectorXd::Zero(2), {"a", "b"}));
}

TEST(Dataset, RankDeficientDesignIsRejected) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 3);
  X.col(2) = 2.0 * X.col(0) - X.col(1);
  EXPECT_EQ(code_of([&] { Dataset(X, Eigen::VectorXd::Random(8), {"a", "b", "c"}); }), ErrorCode::RankDeficient);
}

TEST(Dataset, ForcedInterceptBookkeeping) {
  const Dataset d = small_dataset(1, 12, 4, InterceptPolicy::ForcedFirstColumn);
  EXPECT_EQ(d.forced_count(), 1);
  EXPECT_EQ(d.free_size(IndexSet{0, 2, 3}), 2u);
  EXPECT_EQ(residual_df(d, IndexSet{0, 2, 3}), 12 - 2 - 1);
  EXPECT_EQ(code_of([&] { d.validate(IndexSet{1, 2}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { d.validate(IndexSet{0, 7}); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(d.column_index("v2"), 2);
}

TEST(SubmodelQR, MatchesNormalEquationsAndProjector) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = small_dataset(seed, 15, 5);
    const IndexSet S{0, 2, 4};
    const SubmodelQR qr(d.X(), S);
    const Eigen::MatrixXd P = oracle::residual_projector(d.X(), S.indices());
    EXPECT_NEAR(qr.residual(d.y()).squaredNorm(), oracle::rss(d.X(), S.indices(), d.y()), 1e-10);
    EXPECT_LT((qr.residual(d.y()) - P * d.y()).norm(), 1e-10);

    const Eigen::MatrixXd Xs = oracle::columns(d.X(), S.indices());
    const Eigen::MatrixXd G = (Xs.transpose() * Xs).inverse();
    const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(3, -1.0, 2.0);
    EXPECT_LT((qr.coefficients(d.y()) - G * Xs.transpose() * d.y()).norm(), 1e-10);
    EXPECT_LT((qr.dual(c) - Xs * G * c).norm(), 1e-10);
    EXPECT_NEAR(qr.inverse_gram_form(c), c.dot(G * c), 1e-10);
  }
}

TEST(SubmodelQR, EmptyModelProjectsNothing) {
  const Dataset d = small_dataset(3, 10, 2);
  const SubmodelQR qr(d.X(), IndexSet{});
  EXPECT_EQ(qr.rank(), 0);
  EXPECT_LT((qr.residual(d.y()) - d.y()).norm(), 1e-15);
}

TEST(SubmodelQR, ProjectorIsIdempotentAndSymmetric) {
  const Dataset d = small_dataset(9, 20, 4);
  const SubmodelQR qr(d.X(), IndexSet{1, 3});
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd u(20), v(20);
    for (int i = 0; i < 20; ++i) {
      u(i) = normal(rng);
      v(i) = normal(rng);
    }
    EXPECT_LT((qr.residual(qr.residual(u)) - qr.residual(u)).norm(), 1e-12);
    EXPECT_NEAR(qr.residual(u).dot(v), u.dot(qr.residual(v)), 1e-12);
  }
}

TEST(FitSubmodel, ResidualsOrthogonalToColumns) {
  const Dataset d = small_dataset(5, 30, 4, InterceptPolicy::ForcedFirstColumn);
  const auto fit = fit_submodel(d, IndexSet{0, 1, 3});
  EXPECT_EQ(fit.df_residual, 30 - 2 - 1);
  EXPECT_NEAR(fit.rss, fit.residuals.squaredNorm(), 1e-12);
  for (int j : {0, 1, 3}) EXPECT_NEAR(d.X().col(j).dot(fit.residuals), 0.0, 1e-10);
  EXPECT_LT((fit.fitted + fit.residuals - d.y()).norm(), 1e-12);
}

TEST(AdjustedCoefficients, RecoverTrueCoefficientsWhenModelContainsSupport) {
  const Dataset d = small_dataset(6, 25, 4);
  Eigen::VectorXd beta(4);
  beta << 1.5, 0.0, -2.0, 0.0;
  const Eigen::VectorXd mean = d.X() * beta;
  const Eigen::VectorXd adj = adjusted_coefficients(d, IndexSet{0, 2, 3}, mean);
  EXPECT_NEAR(adj(0), 1.5, 1e-10);
  EXPECT_NEAR(adj(1), -2.0, 1e-10);
  EXPECT_NEAR(adj(2), 0.0, 1e-10);
}

TEST(Dataset, WithResponseKeepsDesign) {
  const Dataset d = small_dataset(8, 12, 3);
  const Dataset e = d.with_response(Eigen::VectorXd::Ones(12));
  EXPECT_EQ(e.X(), d.X());
  EXPECT_EQ(e.y(), Eigen::VectorXd::Ones(12));
  EXPECT_ANY_THROW(d.with_response(Eigen::VectorXd::Ones(5)));
}
