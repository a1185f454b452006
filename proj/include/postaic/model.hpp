#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace postaic {

enum class InterceptPolicy { None, ForcedFirstColumn };

/// A candidate submodel: sorted, duplicate-free, zero-based column indices.
class IndexSet {
public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> indices);
  explicit IndexSet(std::vector<int> indices);

  const std::vector<int>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  int operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(int index) const;
  // Position of `index` inside the model, or -1.
  int position_of(int index) const;
  bool is_subset_of(const IndexSet& other) const;
  bool is_strict_subset_of(const IndexSet& other) const {
    return size() < other.size() && is_subset_of(other);
  }

  std::uint64_t mask() const;
  static IndexSet from_mask(std::uint64_t mask);

  std::string to_string() const;

  bool operator==(const IndexSet&) const = default;
  auto operator<=>(const IndexSet&) const = default;

private:
  std::vector<int> indices_;
};

/// Fixed design plus response. Column 0 is the intercept when the policy
/// forces it; that column belongs to every submodel and is not counted in |S|.
class Dataset {
public:
  Dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> column_names,
          InterceptPolicy policy = InterceptPolicy::None);

  Eigen::Index n() const noexcept { return X_.rows(); }
  Eigen::Index p() const noexcept { return X_.cols(); }
  const Eigen::MatrixXd& X() const noexcept { return X_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  InterceptPolicy intercept_policy() const noexcept { return policy_; }

  int forced_count() const noexcept { return policy_ == InterceptPolicy::ForcedFirstColumn ? 1 : 0; }
  bool is_forced(int column) const noexcept { return column < forced_count(); }
  // |S| as used by the criteria: number of non-forced columns.
  std::size_t free_size(const IndexSet& S) const;
  int column_index(const std::string& name) const;

  IndexSet full_model() const;
  // Throws IndexOutOfRange, or InvalidArgument when a forced column is missing.
  void validate(const IndexSet& S) const;

  // Same design, new response. The design was already rank-checked.
  Dataset with_response(Eigen::VectorXd y) const;

private:
  struct Unchecked {};
  Dataset(Unchecked, Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> names,
          InterceptPolicy policy);

  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  std::vector<std::string> names_;
  InterceptPolicy policy_;
};

// A submodel is rank deficient when the smallest pivoted diagonal of R falls
// below this fraction of the largest.
inline constexpr double kRankTolerance = 1e-10;

/// Thin column-pivoted QR of X_S. Everything the other modules need from a
/// submodel (projections, coefficients, dual solves) goes through this.
class SubmodelQR {
public:
  SubmodelQR(const Eigen::MatrixXd& X, IndexSet S);

  const IndexSet& model() const noexcept { return model_; }
  Eigen::Index rows() const noexcept { return q_.rows(); }
  Eigen::Index rank() const noexcept { return q_.cols(); }

  // P_S v = v - X_S (X_S^T X_S)^{-1} X_S^T v
  Eigen::VectorXd residual(const Eigen::VectorXd& v) const;
  // (X_S^T X_S)^{-1} X_S^T v
  Eigen::VectorXd coefficients(const Eigen::VectorXd& v) const;
  // X_S (X_S^T X_S)^{-1} c
  Eigen::VectorXd dual(const Eigen::VectorXd& c) const;
  // c^T (X_S^T X_S)^{-1} c
  double inverse_gram_form(const Eigen::VectorXd& c) const;

private:
  IndexSet model_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::VectorXi perm_;  // X_S.col(perm_[k]) is the k-th factored column
};

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  Eigen::Index df_residual = 0;
};

// df_residual = n - |S| - 1 with |S| the free size.
Eigen::Index residual_df(const Dataset& data, const IndexSet& S);

LeastSquaresFit fit_submodel(const Dataset& data, const IndexSet& S);
double rss(const Dataset& data, const IndexSet& S);
Eigen::VectorXd residual_project(const Dataset& data, const IndexSet& S, const Eigen::VectorXd& v);
Eigen::VectorXd adjusted_coefficients(const Dataset& data, const IndexSet& S,
                                      const Eigen::VectorXd& mean_vector);

}  // namespace postaic
