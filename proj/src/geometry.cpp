#include "postaic/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "postaic/error.hpp"

namespace postaic {

namespace {

constexpr double kLeadTolerance = 1e-10;
constexpr double kSpanTolerance = 1e-8;

}  // namespace

EtaDecomposition decompose(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
  if (y.size() != eta.size()) throw Error(ErrorCode::DimensionMismatch, "eta and y lengths differ");
  const double norm2 = eta.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorCode::ZeroEta, "eta has zero norm");
  EtaDecomposition d;
  d.eta = eta;
  d.eta_tilde = eta / norm2;
  d.eta_dot_y = eta.dot(y);
  d.z = y - d.eta_dot_y * d.eta_tilde;
  return d;
}

IntervalUnion positive_set(const ComparisonQuadratic& q) {
  const bool quadratic = std::abs(q.a2) > kLeadTolerance * q.a2_scale;
  const bool linear = std::abs(q.a1) > kLeadTolerance * q.a1_scale;
  if (quadratic) {
    const double disc = q.a1 * q.a1 - 4.0 * q.a2 * q.a0;
    if (disc < 0.0) return q.a2 > 0.0 ? IntervalUnion::real_line() : IntervalUnion::empty_set();
    // One root from the cancellation-free branch, the other from Vieta.
    const double s = std::sqrt(disc);
    const double half = -0.5 * (q.a1 + std::copysign(s, q.a1));
    double r1 = half / q.a2;
    double r2 = half != 0.0 ? q.a0 / half : -r1;
    if (r1 > r2) std::swap(r1, r2);
    if (q.a2 > 0.0) return IntervalUnion({{-kInf, r1}, {r2, kInf}});
    if (disc > 0.0) return IntervalUnion({{r1, r2}});
    return IntervalUnion::empty_set();
  }
  if (linear) {
    const double root = -q.a0 / q.a1;
    return q.a1 > 0.0 ? IntervalUnion({{root, kInf}}) : IntervalUnion({{-kInf, root}});
  }
  return q.a0 > 0.0 ? IntervalUnion::real_line() : IntervalUnion::empty_set();
}

namespace {

// P_S_hat applied to eta_tilde and z; shared by every comparison of one event.
struct SelectedProjections {
  Eigen::VectorXd eta;
  Eigen::VectorXd z;
  double z_norm2;
};

SelectedProjections project_selected(const EtaDecomposition& d, const SubmodelQR& selected) {
  SelectedProjections sp{selected.residual(d.eta_tilde), selected.residual(d.z), 0.0};
  sp.z_norm2 = sp.z.squaredNorm();
  return sp;
}

ComparisonQuadratic general_from(const EtaDecomposition& d, const SelectedProjections& sel,
                                 const SubmodelQR& competitor, double omega) {
  const Eigen::VectorXd ps_eta = competitor.residual(d.eta_tilde);
  const Eigen::VectorXd ps_z = competitor.residual(d.z);
  ComparisonQuadratic q;
  q.competitor = competitor.model();
  q.a2 = ps_eta.squaredNorm() - omega * sel.eta.squaredNorm();
  q.a1 = 2.0 * (ps_z.dot(ps_eta) - omega * sel.z.dot(sel.eta));
  q.a0 = ps_z.squaredNorm() - omega * sel.z_norm2;
  q.a2_scale = (1.0 + omega) * d.eta_tilde.squaredNorm();
  q.a1_scale = 2.0 * (1.0 + omega) * d.z.norm() * d.eta_tilde.norm();
  return q;
}

ComparisonQuadratic simplified_from(const EtaDecomposition& d, double zpz_selected, const SubmodelQR& competitor,
                                    double omega) {
  const Eigen::VectorXd ps_eta = competitor.residual(d.eta_tilde);
  const Eigen::VectorXd ps_z = competitor.residual(d.z);
  ComparisonQuadratic q;
  q.competitor = competitor.model();
  q.a2 = ps_eta.squaredNorm();
  q.a1 = 2.0 * ps_z.dot(ps_eta);
  q.a0 = ps_z.squaredNorm() - omega * zpz_selected;
  q.a2_scale = d.eta_tilde.squaredNorm();
  q.a1_scale = 2.0 * d.z.norm() * d.eta_tilde.norm();
  return q;
}

}  // namespace

ComparisonQuadratic general_quadratic(const EtaDecomposition& d, const SubmodelQR& selected,
                                      std::size_t selected_size, const SubmodelQR& competitor,
                                      std::size_t competitor_size, const CriterionSpec& spec) {
  return general_from(d, project_selected(d, selected), competitor,
                      penalty_ratio(selected_size, competitor_size, spec));
}

bool eta_in_span(const Eigen::VectorXd& eta, const SubmodelQR& selected) {
  return selected.residual(eta).norm() <= kSpanTolerance * eta.norm();
}

ComparisonQuadratic simplified_quadratic(const EtaDecomposition& d, const SubmodelQR& selected,
                                         std::size_t selected_size, const SubmodelQR& competitor,
                                         std::size_t competitor_size, const CriterionSpec& spec) {
  if (!eta_in_span(d.eta, selected))
    throw Error(ErrorCode::EtaNotInSpan, "eta is not in the column span of " + selected.model().to_string());
  return simplified_from(d, selected.residual(d.z).squaredNorm(), competitor,
                         penalty_ratio(selected_size, competitor_size, spec));
}

namespace {

void require_distinct(const IndexSet& S_hat, const IndexSet& S) {
  if (S == S_hat) throw Error(ErrorCode::InvalidArgument, "competitor equals the selected model");
}

}  // namespace

IntervalUnion comparison_feasible_set(const EtaDecomposition& decomp, const Dataset& data,
                                      const IndexSet& S_hat, const IndexSet& S, const CriterionSpec& spec) {
  require_distinct(S_hat, S);
  data.validate(S_hat);
  data.validate(S);
  const SubmodelQR selected(data.X(), S_hat);
  const SubmodelQR competitor(data.X(), S);
  return positive_set(general_quadratic(decomp, selected, data.free_size(S_hat), competitor,
                                        data.free_size(S), spec));
}

IntervalUnion simplified_comparison(const EtaDecomposition& decomp, const Dataset& data,
                                    const IndexSet& S_hat, const IndexSet& S, const CriterionSpec& spec) {
  require_distinct(S_hat, S);
  data.validate(S_hat);
  data.validate(S);
  const SubmodelQR selected(data.X(), S_hat);
  const SubmodelQR competitor(data.X(), S);
  return positive_set(simplified_quadratic(decomp, selected, data.free_size(S_hat), competitor,
                                           data.free_size(S), spec));
}

std::size_t SelectionEvent::skipped_count() const {
  return static_cast<std::size_t>(
      std::count_if(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.skipped; }));
}

SelectionEvent selection_event(const CandidateSet& candidates, const EtaDecomposition& decomp,
                               const IndexSet& S_hat, const CriterionSpec& spec, const EventOptions& options) {
  if (decomp.eta.size() != candidates.n()) throw Error(ErrorCode::DimensionMismatch, "eta length != n");
  const auto& selected = candidates.at(S_hat);

  bool simplified = false;
  switch (options.route) {
    case GeometryRoute::General: simplified = false; break;
    case GeometryRoute::Simplified:
      if (!eta_in_span(decomp.eta, selected.qr))
        throw Error(ErrorCode::EtaNotInSpan, "simplified route requires eta in the span of the selected model");
      simplified = true;
      break;
    case GeometryRoute::Automatic: simplified = eta_in_span(decomp.eta, selected.qr); break;
  }
  if (options.skip_supersets && !eta_in_span(decomp.eta, selected.qr))
    throw Error(ErrorCode::EtaNotInSpan, "skipping supersets requires eta in the span of the selected model");

  SelectionEvent event;
  event.selected = S_hat;
  event.observed = decomp.eta_dot_y;
  event.region = IntervalUnion::real_line();
  event.comparisons.reserve(candidates.size() - 1);

  const double t = decomp.eta_dot_y;
  const SelectedProjections sel = project_selected(decomp, selected.qr);
  for (const auto& entry : candidates.entries()) {
    if (entry.model == S_hat) continue;
    Comparison c;
    c.competitor = entry.model;
    const double omega = penalty_ratio(selected.free_size, entry.free_size, spec);
    c.quadratic = simplified ? simplified_from(decomp, sel.z_norm2, entry.qr, omega)
                             : general_from(decomp, sel, entry.qr, omega);
    // At the observed point q(t) = RSS(S) - omega RSS(S_hat) must not be negative.
    const double value = c.quadratic(t);
    const double scale = std::abs(c.quadratic.a2 * t * t) + std::abs(c.quadratic.a1 * t) + std::abs(c.quadratic.a0);
    if (value < -1e-10 * scale)
      throw Error(ErrorCode::NotSelectedModel, "model " + entry.model.to_string() + " beats " + S_hat.to_string() +
                                                   " on the observed response");
    if (options.skip_supersets && S_hat.is_strict_subset_of(entry.model)) {
      c.skipped = true;
      c.skip_reason = "superset of selected model; comparison depends on z only";
      c.feasible = IntervalUnion::real_line();
    } else {
      c.feasible = positive_set(c.quadratic);
      event.region = event.region.intersect(c.feasible);
    }
    event.comparisons.push_back(std::move(c));
  }

  if (!event.region.contains(t) && event.region.distance(t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw Error(ErrorCode::ObservationOutsideRegion,
                "observed eta^T y=" + std::to_string(t) + " outside its selection region " + event.region.to_string());
  return event;
}

SelectionEvent selection_event(const Dataset& data, const EtaDecomposition& decomp, const IndexSet& S_hat,
                               const CriterionSpec& spec, bool skip_supersets, const CandidatePolicy& policy) {
  data.validate(S_hat);
  const CandidateSet candidates(data, policy);
  EventOptions options;
  options.skip_supersets = skip_supersets;
  return selection_event(candidates, decomp, S_hat, spec, options);
}

double superset_lower_bound(const CandidateSet& candidates, const EtaDecomposition& decomp,
                            const IndexSet& S_hat, int coefficient, const CriterionSpec& spec) {
  if (!S_hat.contains(coefficient))
    throw Error(ErrorCode::IndexNotInModel,
                "column " + std::to_string(coefficient) + " is not in " + S_hat.to_string());
  const auto& selected = candidates.at(S_hat);
  const double zpz_hat = selected.qr.residual(decomp.z).squaredNorm();
  double best = 0.0;
  for (const auto& entry : candidates.entries()) {
    if (!entry.model.is_strict_subset_of(S_hat) || entry.model.contains(coefficient)) continue;
    const double omega = penalty_ratio(selected.free_size, entry.free_size, spec);
    best = std::max(best, omega * zpz_hat - entry.qr.residual(decomp.z).squaredNorm());
  }
  return decomp.eta_norm2() * best;
}

double superset_lower_bound(const Dataset& data, const EtaDecomposition& decomp, const IndexSet& S_hat,
                            int coefficient, const CriterionSpec& spec, const CandidatePolicy& policy) {
  data.validate(S_hat);
  return superset_lower_bound(CandidateSet(data, policy), decomp, S_hat, coefficient, spec);
}

}  // namespace postaic
