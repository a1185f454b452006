#pragma once

#include <optional>
#include <string>
#include <vector>

#include "postaic/model.hpp"

namespace postaic {

enum class Criterion { AIC, BIC, AICc };

const char* to_string(Criterion kind);
Criterion parse_criterion(const std::string& text);

struct CriterionSpec {
  Criterion kind = Criterion::AIC;
  Eigen::Index n = 0;

  CriterionSpec() = default;
  CriterionSpec(Criterion kind, Eigen::Index n);
};

struct ScoredModel {
  IndexSet model;
  double score = 0.0;
  double rss = 0.0;
};

/// Which submodels compete. Forced columns are always present; "empty" means
/// a model with no free columns.
struct CandidatePolicy {
  bool include_empty = false;
  std::optional<std::size_t> max_size;
};

// Scores are defined up to a constant shared by all models:
//   AIC  2|S| + n log RSS
//   BIC  log(n)|S| + n log RSS
//   AICc n log RSS + 2n|S| / (n - |S| - 1)
double criterion_score(std::size_t model_size, double rss, const CriterionSpec& spec);

// omega(S~, S): criterion(S~) < criterion(S)  <=>  rss(S)/rss(S~) > omega(S~, S).
double penalty_ratio(std::size_t size_tilde, std::size_t size, const CriterionSpec& spec);
double log_penalty_ratio(std::size_t size_tilde, std::size_t size, const CriterionSpec& spec);

// Strict order used for selection: score, then fewer columns, then
// lexicographically smaller index list.
bool ranks_before(const ScoredModel& a, const ScoredModel& b);

/// Factorizations of every candidate submodel of a fixed design. Building
/// this once lets repeated selections on new responses reuse the QRs.
class CandidateSet {
public:
  struct Entry {
    IndexSet model;
    std::size_t free_size;
    SubmodelQR qr;
  };

  CandidateSet(const Dataset& data, const CandidatePolicy& policy = {});

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Eigen::Index n() const noexcept { return n_; }
  const CandidatePolicy& policy() const noexcept { return policy_; }

  // nullptr when S is not a candidate.
  const Entry* find(const IndexSet& S) const;
  const Entry& at(const IndexSet& S) const;

private:
  std::vector<Entry> entries_;
  Eigen::Index n_;
  CandidatePolicy policy_;
};

std::vector<IndexSet> enumerate_candidates(const Dataset& data, const CandidatePolicy& policy);

struct SelectionResult {
  IndexSet selected;
  std::vector<ScoredModel> scored;  // in candidate enumeration order
};

SelectionResult best_subset(const Dataset& data, const CriterionSpec& spec,
                            const CandidatePolicy& policy = {});
SelectionResult best_subset(const CandidateSet& candidates, const Eigen::VectorXd& y,
                            const CriterionSpec& spec);

}  // namespace postaic
