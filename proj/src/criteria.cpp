#include "postaic/criteria.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "postaic/error.hpp"

namespace postaic {

const char* to_string(Criterion kind) {
  switch (kind) {
    case Criterion::AIC: return "aic";
    case Criterion::BIC: return "bic";
    case Criterion::AICc: return "aicc";
  }
  return "aic";
}

Criterion parse_criterion(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "aic") return Criterion::AIC;
  if (t == "bic") return Criterion::BIC;
  if (t == "aicc") return Criterion::AICc;
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + text + "'");
}

CriterionSpec::CriterionSpec(Criterion kind_, Eigen::Index n_) : kind(kind_), n(n_) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "criterion needs n >= 3");
}

namespace {

double aicc_term(std::size_t size, Eigen::Index n) {
  const double denom = static_cast<double>(n) - static_cast<double>(size) - 1.0;
  if (denom <= 0.0)
    throw Error(ErrorCode::AiccDegenerate,
                "n - |S| - 1 <= 0 for |S|=" + std::to_string(size) + ", n=" + std::to_string(n));
  return static_cast<double>(size) / denom;
}

}  // namespace

double criterion_score(std::size_t model_size, double rss, const CriterionSpec& spec) {
  if (!(rss > 0.0)) throw Error(ErrorCode::NonPositiveRss, "rss must be positive");
  const double n = static_cast<double>(spec.n);
  const double k = static_cast<double>(model_size);
  switch (spec.kind) {
    case Criterion::AIC: return 2.0 * k + n * std::log(rss);
    case Criterion::BIC: return std::log(n) * k + n * std::log(rss);
    case Criterion::AICc: return n * std::log(rss) + 2.0 * n * aicc_term(model_size, spec.n);
  }
  return 0.0;
}

double log_penalty_ratio(std::size_t size_tilde, std::size_t size, const CriterionSpec& spec) {
  const double n = static_cast<double>(spec.n);
  const double diff = static_cast<double>(size_tilde) - static_cast<double>(size);
  switch (spec.kind) {
    case Criterion::AIC: return 2.0 * diff / n;
    case Criterion::BIC: return std::log(n) * diff / n;
    case Criterion::AICc: return 2.0 * (aicc_term(size_tilde, spec.n) - aicc_term(size, spec.n));
  }
  return 0.0;
}

double penalty_ratio(std::size_t size_tilde, std::size_t size, const CriterionSpec& spec) {
  return std::exp(log_penalty_ratio(size_tilde, size, spec));
}

bool ranks_before(const ScoredModel& a, const ScoredModel& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.model.size() != b.model.size()) return a.model.size() < b.model.size();
  return a.model.indices() < b.model.indices();
}

std::vector<IndexSet> enumerate_candidates(const Dataset& data, const CandidatePolicy& policy) {
  const int forced = data.forced_count();
  const int free_cols = static_cast<int>(data.p()) - forced;
  if (free_cols > 30) throw Error(ErrorCode::InvalidArgument, "exhaustive search limited to 30 free columns");
  std::vector<IndexSet> out;
  const std::uint64_t count = std::uint64_t{1} << free_cols;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const auto size = static_cast<std::size_t>(std::popcount(bits));
    if (size == 0 && !policy.include_empty) continue;
    if (policy.max_size && size > *policy.max_size) continue;
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(forced) + size);
    for (int j = 0; j < forced; ++j) idx.push_back(j);
    for (int j = 0; j < free_cols; ++j)
      if (bits & (std::uint64_t{1} << j)) idx.push_back(forced + j);
    if (idx.empty() && !policy.include_empty) continue;
    out.emplace_back(std::move(idx));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "candidate policy admits no models");
  return out;
}

CandidateSet::CandidateSet(const Dataset& data, const CandidatePolicy& policy)
    : n_(data.n()), policy_(policy) {
  for (auto& S : enumerate_candidates(data, policy)) {
    const std::size_t free = data.free_size(S);
    SubmodelQR qr(data.X(), S);
    entries_.push_back(Entry{std::move(S), free, std::move(qr)});
  }
}

const CandidateSet::Entry* CandidateSet::find(const IndexSet& S) const {
  for (const auto& e : entries_)
    if (e.model == S) return &e;
  return nullptr;
}

const CandidateSet::Entry& CandidateSet::at(const IndexSet& S) const {
  const Entry* e = find(S);
  if (!e) throw Error(ErrorCode::InvalidArgument, "model " + S.to_string() + " is not a candidate");
  return *e;
}

SelectionResult best_subset(const CandidateSet& candidates, const Eigen::VectorXd& y,
                            const CriterionSpec& spec) {
  if (y.size() != candidates.n()) throw Error(ErrorCode::DimensionMismatch, "length of y != n");
  SelectionResult result;
  result.scored.reserve(candidates.size());
  const ScoredModel* best = nullptr;
  for (const auto& e : candidates.entries()) {
    ScoredModel sm;
    sm.model = e.model;
    sm.rss = e.qr.residual(y).squaredNorm();
    try {
      sm.score = criterion_score(e.free_size, sm.rss, spec);
    } catch (const Error& err) {
      throw Error(err.code(), std::string(err.what()) + " (model " + e.model.to_string() + ")");
    }
    result.scored.push_back(std::move(sm));
  }
  for (const auto& sm : result.scored)
    if (!best || ranks_before(sm, *best)) best = &sm;
  result.selected = best->model;
  return result;
}

SelectionResult best_subset(const Dataset& data, const CriterionSpec& spec,
                            const CandidatePolicy& policy) {
  return best_subset(CandidateSet(data, policy), data.y(), spec);
}

}  // namespace postaic
