#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "postaic/geometry.hpp"
#include "postaic/truncnorm.hpp"

namespace postaic {

/// Mean response at a new design point x (length p, all columns).
struct PredictionMean {
  Eigen::VectorXd x;
};
/// Regression coefficient of design column `column`; must be in S_hat.
struct Coefficient {
  int column;
};
/// c^T beta_{S_hat} with c indexed like S_hat.
struct LinearCombo {
  Eigen::VectorXd c;
};

using InferenceTarget = std::variant<PredictionMean, Coefficient, LinearCombo>;

std::string describe(const InferenceTarget& target, const Dataset& data);

struct SigmaSpec {
  enum class Strategy { Known, MseAic, MseFull, External };

  Strategy strategy = Strategy::Known;
  double value = 1.0;  // used by Known and External

  static SigmaSpec known(double sigma);
  static SigmaSpec mse_aic() { return {Strategy::MseAic, 0.0}; }
  static SigmaSpec mse_full() { return {Strategy::MseFull, 0.0}; }
  static SigmaSpec external(double sigma);

  // "known:1", "mse-aic", "mse-full", "external:1.3"
  static SigmaSpec parse(const std::string& text);
  std::string label() const;
  bool estimated() const { return strategy == Strategy::MseAic || strategy == Strategy::MseFull; }

  bool operator==(const SigmaSpec&) const = default;
};

enum class CIMethod { ClassicalT, ClassicalKnownSigma, Corrected };
const char* to_string(CIMethod method);

struct CIResult {
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;  // eta^T Y
  // Corrected intervals only: F at mean 0 truncated to the selection region, at eta^T Y, the pivot under
  // the null that the target is zero.
  std::optional<double> pivot;
  double alpha = 0.05;
  CIMethod method = CIMethod::Corrected;
  SigmaSpec sigma_spec;
  double sigma_used = 0.0;
  double estimate_sd = 0.0;  // sigma_used * ||eta||
  bool lower_unbounded = false;
  bool upper_unbounded = false;
  std::shared_ptr<const SelectionEvent> event;

  bool covers(double value) const { return lower < value && value < upper; }
};

double normal_quantile(double p);
double t_quantile(double p, double df);

/// Binds a response to a design, runs (or accepts) the selection and answers
/// interval queries against it. Candidate factorizations can be shared across
/// responses on the same design.
class PostSelectionInference {
public:
  struct Options {
    Criterion criterion = Criterion::AIC;
    CandidatePolicy policy{};
    bool skip_supersets = true;
    GeometryRoute route = GeometryRoute::Automatic;
    // false: events are the whole real line (no selection was performed).
    bool condition_on_selection = true;
  };

  PostSelectionInference(Dataset data, Options options);
  PostSelectionInference(Dataset data, std::shared_ptr<const CandidateSet> candidates, Options options);
  // Uses `selected` instead of running the search; it must still be the
  // criterion minimizer (NotSelectedModel otherwise, raised lazily by events).
  PostSelectionInference(Dataset data, std::shared_ptr<const CandidateSet> candidates, Options options,
                         IndexSet selected);

  const Dataset& data() const noexcept { return data_; }
  const CandidateSet& candidates() const noexcept { return *candidates_; }
  const Options& options() const noexcept { return options_; }
  const CriterionSpec& criterion_spec() const noexcept { return spec_; }
  const IndexSet& selected() const noexcept { return selected_; }
  // Empty when the selected model was supplied.
  const std::optional<SelectionResult>& selection() const noexcept { return selection_; }

  Eigen::VectorXd eta(const InferenceTarget& target) const;
  double sigma(const SigmaSpec& spec) const;
  std::shared_ptr<const SelectionEvent> event(const Eigen::VectorXd& eta) const;

  CIResult classical(const InferenceTarget& target, double alpha, const SigmaSpec& sigma) const;
  CIResult corrected(const InferenceTarget& target, double alpha, const SigmaSpec& sigma) const;
  // Same as corrected() but reuses an event built for this eta.
  CIResult corrected(const Eigen::VectorXd& eta, const std::shared_ptr<const SelectionEvent>& event,
                     double alpha, const SigmaSpec& sigma) const;
  double pivot(const InferenceTarget& target, double hypothesized, const SigmaSpec& sigma) const;
  double pivot(const Eigen::VectorXd& eta, const SelectionEvent& event, double hypothesized,
               const SigmaSpec& sigma) const;

private:
  Dataset data_;
  std::shared_ptr<const CandidateSet> candidates_;
  Options options_;
  CriterionSpec spec_;
  IndexSet selected_;
  std::optional<SelectionResult> selection_;
  const CandidateSet::Entry* selected_entry_;
};

// Free-function forms. `data` carries the observed response.
Eigen::VectorXd eta_for_target(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target);
double estimate_sigma(const Dataset& data, const IndexSet& S_hat, const SigmaSpec& spec);
CIResult classical_ci(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target, double alpha,
                      const SigmaSpec& sigma);
CIResult corrected_ci(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target, double alpha,
                      const SigmaSpec& sigma, Criterion criterion = Criterion::AIC, bool skip_supersets = true,
                      const CandidatePolicy& policy = {});
double pivot_value(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target,
                   double hypothesized, const SigmaSpec& sigma, Criterion criterion = Criterion::AIC,
                   const CandidatePolicy& policy = {});

}  // namespace postaic
