#include "postaic/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "postaic/error.hpp"

namespace postaic {

IndexSet::IndexSet(std::initializer_list<int> indices) : IndexSet(std::vector<int>(indices)) {}

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw Error(ErrorCode::InvalidArgument, "duplicate column index in model");
  if (!indices_.empty() && indices_.front() < 0)
    throw Error(ErrorCode::IndexOutOfRange, "negative column index");
}

bool IndexSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

int IndexSet::position_of(int index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return -1;
  return static_cast<int>(it - indices_.begin());
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

std::uint64_t IndexSet::mask() const {
  std::uint64_t m = 0;
  for (int j : indices_) {
    if (j >= 64) throw Error(ErrorCode::IndexOutOfRange, "mask supports at most 64 columns");
    m |= std::uint64_t{1} << j;
  }
  return m;
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
  std::vector<int> idx;
  for (int j = 0; j < 64; ++j)
    if (mask & (std::uint64_t{1} << j)) idx.push_back(j);
  return IndexSet(std::move(idx));
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < indices_.size(); ++k) os << (k ? "," : "") << indices_[k];
  os << '}';
  return os.str();
}

Dataset::Dataset(Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> column_names,
                 InterceptPolicy policy)
    : Dataset(Unchecked{}, std::move(X), std::move(y), std::move(column_names), policy) {
  if (X_.cols() < 1) throw Error(ErrorCode::InvalidArgument, "design needs at least one column");
  if (X_.rows() <= X_.cols())
    throw Error(ErrorCode::InvalidArgument, "need n > p (n=" + std::to_string(X_.rows()) +
                                                ", p=" + std::to_string(X_.cols()) + ")");
  if (y_.size() != X_.rows()) throw Error(ErrorCode::DimensionMismatch, "length of y != rows of X");
  if (static_cast<Eigen::Index>(names_.size()) != X_.cols())
    throw Error(ErrorCode::DimensionMismatch, "one column name per column required");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size())
    throw Error(ErrorCode::InvalidArgument, "column names must be unique");
  if (!X_.allFinite() || !y_.allFinite())
    throw Error(ErrorCode::InvalidArgument, "data contains non-finite values");
  SubmodelQR(X_, full_model());  // rank check
}

Dataset::Dataset(Unchecked, Eigen::MatrixXd X, Eigen::VectorXd y, std::vector<std::string> names,
                 InterceptPolicy policy)
    : X_(std::move(X)), y_(std::move(y)), names_(std::move(names)), policy_(policy) {}

std::size_t Dataset::free_size(const IndexSet& S) const {
  std::size_t forced = 0;
  for (int j : S)
    if (is_forced(j)) ++forced;
  return S.size() - forced;
}

int Dataset::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::IndexOutOfRange, "no column named '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

IndexSet Dataset::full_model() const {
  std::vector<int> all(static_cast<std::size_t>(p()));
  for (int j = 0; j < p(); ++j) all[static_cast<std::size_t>(j)] = j;
  return IndexSet(std::move(all));
}

void Dataset::validate(const IndexSet& S) const {
  if (!S.empty() && S.indices().back() >= p())
    throw Error(ErrorCode::IndexOutOfRange, "model " + S.to_string() + " exceeds p=" + std::to_string(p()));
  for (int j = 0; j < forced_count(); ++j)
    if (!S.contains(j))
      throw Error(ErrorCode::InvalidArgument, "model " + S.to_string() + " misses forced column " + std::to_string(j));
}

Dataset Dataset::with_response(Eigen::VectorXd y) const {
  if (y.size() != n()) throw Error(ErrorCode::DimensionMismatch, "length of y != rows of X");
  return Dataset(Unchecked{}, X_, std::move(y), names_, policy_);
}

SubmodelQR::SubmodelQR(const Eigen::MatrixXd& X, IndexSet S) : model_(std::move(S)) {
  const Eigen::Index n = X.rows();
  const auto k = static_cast<Eigen::Index>(model_.size());
  if (!model_.empty() && model_.indices().back() >= X.cols())
    throw Error(ErrorCode::IndexOutOfRange, "model " + model_.to_string() + " exceeds design width");
  if (k > n) throw Error(ErrorCode::RankDeficient, "model " + model_.to_string() + " has more columns than rows");
  if (k == 0) {
    q_.resize(n, 0);
    r_.resize(0, 0);
    perm_.resize(0);
    return;
  }
  Eigen::MatrixXd XS(n, k);
  for (Eigen::Index c = 0; c < k; ++c) XS.col(c) = X.col(model_[static_cast<std::size_t>(c)]);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(XS);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  const double largest = std::abs(packed(0, 0));
  const double smallest = std::abs(packed(k - 1, k - 1));
  if (!(largest > 0.0) || smallest < kRankTolerance * largest)
    throw Error(ErrorCode::RankDeficient, "columns of model " + model_.to_string() + " are collinear");

  r_ = packed.topLeftCorner(k, k).triangularView<Eigen::Upper>();
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  perm_ = qr.colsPermutation().indices();
}

Eigen::VectorXd SubmodelQR::residual(const Eigen::VectorXd& v) const {
  if (v.size() != rows()) throw Error(ErrorCode::DimensionMismatch, "vector length != n");
  if (rank() == 0) return v;
  return v - q_ * (q_.transpose() * v);
}

Eigen::VectorXd SubmodelQR::coefficients(const Eigen::VectorXd& v) const {
  if (v.size() != rows()) throw Error(ErrorCode::DimensionMismatch, "vector length != n");
  Eigen::VectorXd out(rank());
  if (rank() == 0) return out;
  const Eigen::VectorXd pivoted =
      r_.triangularView<Eigen::Upper>().solve(Eigen::VectorXd(q_.transpose() * v));
  for (Eigen::Index k = 0; k < rank(); ++k) out(perm_(k)) = pivoted(k);
  return out;
}

Eigen::VectorXd SubmodelQR::dual(const Eigen::VectorXd& c) const {
  if (c.size() != rank()) throw Error(ErrorCode::DimensionMismatch, "contrast length != |S|");
  if (rank() == 0) return Eigen::VectorXd::Zero(rows());
  Eigen::VectorXd permuted(rank());
  for (Eigen::Index k = 0; k < rank(); ++k) permuted(k) = c(perm_(k));
  const Eigen::VectorXd w = r_.transpose().triangularView<Eigen::Lower>().solve(permuted);
  return q_ * w;
}

double SubmodelQR::inverse_gram_form(const Eigen::VectorXd& c) const {
  if (c.size() != rank()) throw Error(ErrorCode::DimensionMismatch, "contrast length != |S|");
  if (rank() == 0) return 0.0;
  Eigen::VectorXd permuted(rank());
  for (Eigen::Index k = 0; k < rank(); ++k) permuted(k) = c(perm_(k));
  return r_.transpose().triangularView<Eigen::Lower>().solve(permuted).squaredNorm();
}

Eigen::Index residual_df(const Dataset& data, const IndexSet& S) {
  return data.n() - static_cast<Eigen::Index>(data.free_size(S)) - 1;
}

LeastSquaresFit fit_submodel(const Dataset& data, const IndexSet& S) {
  data.validate(S);
  const SubmodelQR qr(data.X(), S);
  LeastSquaresFit fit;
  fit.coefficients = qr.coefficients(data.y());
  fit.residuals = qr.residual(data.y());
  fit.fitted = data.y() - fit.residuals;
  fit.rss = fit.residuals.squaredNorm();
  fit.df_residual = residual_df(data, S);
  return fit;
}

double rss(const Dataset& data, const IndexSet& S) {
  data.validate(S);
  return SubmodelQR(data.X(), S).residual(data.y()).squaredNorm();
}

Eigen::VectorXd residual_project(const Dataset& data, const IndexSet& S, const Eigen::VectorXd& v) {
  data.validate(S);
  if (v.size() != data.n()) throw Error(ErrorCode::DimensionMismatch, "vector length != n");
  return SubmodelQR(data.X(), S).residual(v);
}

Eigen::VectorXd adjusted_coefficients(const Dataset& data, const IndexSet& S,
                                      const Eigen::VectorXd& mean_vector) {
  data.validate(S);
  if (mean_vector.size() != data.n())
    throw Error(ErrorCode::DimensionMismatch, "mean vector length != n");
  return SubmodelQR(data.X(), S).coefficients(mean_vector);
}

}  // namespace postaic
