#include "postaic/inference.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "postaic/error.hpp"

namespace postaic {

std::string describe(const InferenceTarget& target, const Dataset& data) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PredictionMean>) {
          std::ostringstream os;
          os << "mean(";
          for (Eigen::Index j = 0; j < t.x.size(); ++j) os << (j ? "," : "") << t.x(j);
          os << ')';
          return os.str();
        } else if constexpr (std::is_same_v<T, Coefficient>) {
          if (t.column >= 0 && t.column < data.p()) return data.column_names()[static_cast<std::size_t>(t.column)];
          return "column" + std::to_string(t.column);
        } else {
          std::ostringstream os;
          os << "combo(";
          for (Eigen::Index j = 0; j < t.c.size(); ++j) os << (j ? "," : "") << t.c(j);
          os << ')';
          return os.str();
        }
      },
      target);
}

SigmaSpec SigmaSpec::known(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  return {Strategy::Known, sigma};
}

SigmaSpec SigmaSpec::external(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  return {Strategy::External, sigma};
}

SigmaSpec SigmaSpec::parse(const std::string& text) {
  auto value_after = [&](std::size_t colon) {
    try {
      std::size_t used = 0;
      const std::string v = text.substr(colon + 1);
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad sigma value in '" + text + "'");
    }
  };
  if (text == "mse-aic" || text == "mse_aic") return mse_aic();
  if (text == "mse-full" || text == "mse_full") return mse_full();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    if (head == "known") return known(value_after(colon));
    if (head == "external") return external(value_after(colon));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown sigma strategy '" + text + "'");
}

std::string SigmaSpec::label() const {
  std::ostringstream os;
  switch (strategy) {
    case Strategy::Known: os << "known:" << value; break;
    case Strategy::MseAic: os << "mse-aic"; break;
    case Strategy::MseFull: os << "mse-full"; break;
    case Strategy::External: os << "external:" << value; break;
  }
  return os.str();
}

const char* to_string(CIMethod method) {
  switch (method) {
    case CIMethod::ClassicalT: return "classical_t";
    case CIMethod::ClassicalKnownSigma: return "classical_known_sigma";
    case CIMethod::Corrected: return "corrected";
  }
  return "corrected";
}

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

double t_quantile(double p, double df) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
}

Eigen::VectorXd contrast_for(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target) {
  const auto k = static_cast<Eigen::Index>(S_hat.size());
  return std::visit(
      [&](const auto& t) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PredictionMean>) {
          if (t.x.size() != data.p()) throw Error(ErrorCode::DimensionMismatch, "prediction point needs p entries");
          Eigen::VectorXd c(k);
          for (Eigen::Index j = 0; j < k; ++j) c(j) = t.x(S_hat[static_cast<std::size_t>(j)]);
          return c;
        } else if constexpr (std::is_same_v<T, Coefficient>) {
          const int pos = S_hat.position_of(t.column);
          if (pos < 0)
            throw Error(ErrorCode::IndexNotInModel,
                        "column " + std::to_string(t.column) + " is not in " + S_hat.to_string());
          Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
          c(pos) = 1.0;
          return c;
        } else {
          if (t.c.size() != k) throw Error(ErrorCode::DimensionMismatch, "contrast needs |S_hat| entries");
          return t.c;
        }
      },
      target);
}

// t quantile with `df` for estimated sigma, normal quantile otherwise.
CIResult classical_interval(double point, double eta_norm, double sigma_used, double df, double alpha,
                            const SigmaSpec& sigma) {
  CIResult r;
  r.alpha = alpha;
  r.point = point;
  r.sigma_spec = sigma;
  r.sigma_used = sigma_used;
  r.estimate_sd = sigma_used * eta_norm;
  double quantile = 0.0;
  if (sigma.estimated()) {
    quantile = t_quantile(1.0 - alpha / 2.0, df);
    r.method = CIMethod::ClassicalT;
  } else {
    quantile = normal_quantile(1.0 - alpha / 2.0);
    r.method = CIMethod::ClassicalKnownSigma;
  }
  r.lower = point - quantile * r.estimate_sd;
  r.upper = point + quantile * r.estimate_sd;
  return r;
}

}  // namespace

PostSelectionInference::PostSelectionInference(Dataset data, Options options)
    : PostSelectionInference(data, std::make_shared<const CandidateSet>(data, options.policy), options) {}

PostSelectionInference::PostSelectionInference(Dataset data, std::shared_ptr<const CandidateSet> candidates,
                                               Options options)
    : data_(std::move(data)),
      candidates_(std::move(candidates)),
      options_(options),
      spec_(options.criterion, data_.n()) {
  selection_ = best_subset(*candidates_, data_.y(), spec_);
  selected_ = selection_->selected;
  selected_entry_ = &candidates_->at(selected_);
}

PostSelectionInference::PostSelectionInference(Dataset data, std::shared_ptr<const CandidateSet> candidates,
                                               Options options, IndexSet selected)
    : data_(std::move(data)),
      candidates_(std::move(candidates)),
      options_(options),
      spec_(options.criterion, data_.n()),
      selected_(std::move(selected)) {
  data_.validate(selected_);
  selected_entry_ = &candidates_->at(selected_);
}

Eigen::VectorXd PostSelectionInference::eta(const InferenceTarget& target) const {
  return selected_entry_->qr.dual(contrast_for(data_, selected_, target));
}

double PostSelectionInference::sigma(const SigmaSpec& spec) const {
  switch (spec.strategy) {
    case SigmaSpec::Strategy::Known:
    case SigmaSpec::Strategy::External:
      if (!(spec.value > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
      return spec.value;
    case SigmaSpec::Strategy::MseAic:
    case SigmaSpec::Strategy::MseFull: {
      const IndexSet model = spec.strategy == SigmaSpec::Strategy::MseAic ? selected_ : data_.full_model();
      const Eigen::Index df = residual_df(data_, model);
      if (df <= 0) throw Error(ErrorCode::NonPositiveDf, "no residual degrees of freedom for " + model.to_string());
      const auto* entry = candidates_->find(model);
      const double r = entry ? entry->qr.residual(data_.y()).squaredNorm() : rss(data_, model);
      if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveRss, "zero residual sum of squares; sigma estimate degenerate");
      return std::sqrt(r / static_cast<double>(df));
    }
  }
  return 0.0;
}

std::shared_ptr<const SelectionEvent> PostSelectionInference::event(const Eigen::VectorXd& eta) const {
  if (!options_.condition_on_selection) {
    auto ev = std::make_shared<SelectionEvent>();
    ev->selected = selected_;
    ev->region = IntervalUnion::real_line();
    ev->observed = decompose(data_.y(), eta).eta_dot_y;
    return ev;
  }
  EventOptions eo;
  eo.skip_supersets = options_.skip_supersets;
  eo.route = options_.route;
  return std::make_shared<const SelectionEvent>(
      selection_event(*candidates_, decompose(data_.y(), eta), selected_, spec_, eo));
}

CIResult PostSelectionInference::classical(const InferenceTarget& target, double alpha,
                                           const SigmaSpec& sigma_spec) const {
  check_alpha(alpha);
  const Eigen::VectorXd e = eta(target);
  const IndexSet model = sigma_spec.strategy == SigmaSpec::Strategy::MseFull ? data_.full_model() : selected_;
  return classical_interval(e.dot(data_.y()), e.norm(), sigma(sigma_spec),
                            static_cast<double>(residual_df(data_, model)), alpha, sigma_spec);
}

CIResult PostSelectionInference::corrected(const Eigen::VectorXd& e, const std::shared_ptr<const SelectionEvent>& ev,
                                           double alpha, const SigmaSpec& sigma_spec) const {
  check_alpha(alpha);
  CIResult r;
  r.alpha = alpha;
  r.method = CIMethod::Corrected;
  r.point = ev->observed;
  r.sigma_spec = sigma_spec;
  r.sigma_used = sigma(sigma_spec);
  r.estimate_sd = r.sigma_used * e.norm();
  r.event = ev;

  const MeanInversion lo = invert_mean(1.0 - alpha / 2.0, r.point, r.estimate_sd, ev->region);
  const MeanInversion hi = invert_mean(alpha / 2.0, r.point, r.estimate_sd, ev->region);
  r.lower = lo.mu;
  r.upper = hi.mu;
  r.lower_unbounded = lo.unbounded;
  r.upper_unbounded = hi.unbounded;
  if (!(r.lower < r.upper))
    throw Error(ErrorCode::InvariantViolation, "corrected interval endpoints out of order");
  try {
    r.pivot = truncated_cdf(r.point, {0.0, r.estimate_sd, ev->region});
  } catch (const Error& err) {
    if (err.code() != ErrorCode::RegionMassUnderflow) throw;
  }
  return r;
}

CIResult PostSelectionInference::corrected(const InferenceTarget& target, double alpha,
                                           const SigmaSpec& sigma_spec) const {
  const Eigen::VectorXd e = eta(target);
  return corrected(e, event(e), alpha, sigma_spec);
}

double PostSelectionInference::pivot(const Eigen::VectorXd& e, const SelectionEvent& ev, double hypothesized,
                                     const SigmaSpec& sigma_spec) const {
  return truncated_cdf(ev.observed, {hypothesized, sigma(sigma_spec) * e.norm(), ev.region});
}

double PostSelectionInference::pivot(const InferenceTarget& target, double hypothesized,
                                     const SigmaSpec& sigma_spec) const {
  const Eigen::VectorXd e = eta(target);
  return pivot(e, *event(e), hypothesized, sigma_spec);
}

namespace {

PostSelectionInference bind(const Dataset& data, const IndexSet& S_hat, Criterion criterion, bool skip_supersets,
                            const CandidatePolicy& policy) {
  data.validate(S_hat);
  PostSelectionInference::Options o;
  o.criterion = criterion;
  o.policy = policy;
  o.skip_supersets = skip_supersets;
  return PostSelectionInference(data, std::make_shared<const CandidateSet>(data, policy), o, S_hat);
}

}  // namespace

Eigen::VectorXd eta_for_target(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target) {
  data.validate(S_hat);
  return SubmodelQR(data.X(), S_hat).dual(contrast_for(data, S_hat, target));
}

double estimate_sigma(const Dataset& data, const IndexSet& S_hat, const SigmaSpec& spec) {
  if (!spec.estimated()) {
    if (!(spec.value > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    return spec.value;
  }
  data.validate(S_hat);
  const IndexSet model = spec.strategy == SigmaSpec::Strategy::MseAic ? S_hat : data.full_model();
  const Eigen::Index df = residual_df(data, model);
  if (df <= 0) throw Error(ErrorCode::NonPositiveDf, "no residual degrees of freedom for " + model.to_string());
  const double r = rss(data, model);
  if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveRss, "zero residual sum of squares; sigma estimate degenerate");
  return std::sqrt(r / static_cast<double>(df));
}

CIResult classical_ci(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target, double alpha,
                      const SigmaSpec& sigma) {
  check_alpha(alpha);
  data.validate(S_hat);
  const Eigen::VectorXd e = eta_for_target(data, S_hat, target);
  const IndexSet model = sigma.strategy == SigmaSpec::Strategy::MseFull ? data.full_model() : S_hat;
  return classical_interval(e.dot(data.y()), e.norm(), estimate_sigma(data, S_hat, sigma),
                            static_cast<double>(residual_df(data, model)), alpha, sigma);
}

CIResult corrected_ci(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target, double alpha,
                      const SigmaSpec& sigma, Criterion criterion, bool skip_supersets,
                      const CandidatePolicy& policy) {
  return bind(data, S_hat, criterion, skip_supersets, policy).corrected(target, alpha, sigma);
}

double pivot_value(const Dataset& data, const IndexSet& S_hat, const InferenceTarget& target, double hypothesized,
                   const SigmaSpec& sigma, Criterion criterion, const CandidatePolicy& policy) {
  return bind(data, S_hat, criterion, true, policy).pivot(target, hypothesized, sigma);
}

}  // namespace postaic
