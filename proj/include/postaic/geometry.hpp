#pragma once

#include <string>
#include <vector>

#include "postaic/criteria.hpp"
#include "postaic/interval_union.hpp"

namespace postaic {

/// Y = (eta^T Y) eta_tilde + z with eta_tilde = eta / (eta^T eta); z is
/// orthogonal to eta and hence independent of eta^T Y under spherical noise.
struct EtaDecomposition {
  Eigen::VectorXd eta;
  Eigen::VectorXd eta_tilde;
  double eta_dot_y = 0.0;
  Eigen::VectorXd z;

  double eta_norm2() const { return eta.squaredNorm(); }
  // Y(t) = t * eta_tilde + z
  Eigen::VectorXd response_at(double t) const { return t * eta_tilde + z; }
};

EtaDecomposition decompose(const Eigen::VectorXd& y, const Eigen::VectorXd& eta);

/// a2 t^2 + a1 t + a0 > 0 describes {criterion(S_hat) < criterion(competitor)}
/// along Y(t).
struct ComparisonQuadratic {
  double a2 = 0.0;
  double a1 = 0.0;  // includes the factor 2 of the cross term
  double a0 = 0.0;
  IndexSet competitor;
  // Magnitudes that a2 and a1 are judged against when deciding degeneracy.
  double a2_scale = 0.0;
  double a1_scale = 0.0;

  double operator()(double t) const { return (a2 * t + a1) * t + a0; }
};

/// {t : q(t) > 0} with the degenerate (linear / constant) cases resolved.
/// Leading terms below 1e-10 of their natural scale count as zero.
IntervalUnion positive_set(const ComparisonQuadratic& q);

/// General route: M = P_S - omega P_S_hat without assuming anything about eta.
ComparisonQuadratic general_quadratic(const EtaDecomposition& decomp, const SubmodelQR& selected,
                                      std::size_t selected_size, const SubmodelQR& competitor,
                                      std::size_t competitor_size, const CriterionSpec& spec);

/// Route for eta in span(X_S_hat): P_S_hat eta = 0 removes the S_hat terms
/// from a2 and a1. Throws EtaNotInSpan when that precondition fails.
ComparisonQuadratic simplified_quadratic(const EtaDecomposition& decomp, const SubmodelQR& selected,
                                         std::size_t selected_size, const SubmodelQR& competitor,
                                         std::size_t competitor_size, const CriterionSpec& spec);

IntervalUnion comparison_feasible_set(const EtaDecomposition& decomp, const Dataset& data,
                                      const IndexSet& S_hat, const IndexSet& S, const CriterionSpec& spec);
IntervalUnion simplified_comparison(const EtaDecomposition& decomp, const Dataset& data,
                                    const IndexSet& S_hat, const IndexSet& S, const CriterionSpec& spec);

// ||P_S_hat eta|| <= 1e-8 ||eta||
bool eta_in_span(const Eigen::VectorXd& eta, const SubmodelQR& selected);

enum class GeometryRoute { Automatic, General, Simplified };

struct Comparison {
  IndexSet competitor;
  ComparisonQuadratic quadratic;
  IntervalUnion feasible;
  bool skipped = false;
  std::string skip_reason;
};

struct SelectionEvent {
  IndexSet selected;
  IntervalUnion region;
  std::vector<Comparison> comparisons;
  double observed = 0.0;  // eta^T Y of the generating decomposition

  IntervalUnion excluded() const { return region.complement(); }
  std::size_t skipped_count() const;
};

struct EventOptions {
  bool skip_supersets = true;
  GeometryRoute route = GeometryRoute::Automatic;
};

/// Intersects the per-comparison feasible sets over every candidate other
/// than S_hat. Supersets of S_hat are recorded as skipped when requested;
/// they constrain z only, not eta^T Y. Throws NotSelectedModel when S_hat is
/// not the criterion minimizer for the observed response.
SelectionEvent selection_event(const CandidateSet& candidates, const EtaDecomposition& decomp,
                               const IndexSet& S_hat, const CriterionSpec& spec,
                               const EventOptions& options = {});
SelectionEvent selection_event(const Dataset& data, const EtaDecomposition& decomp, const IndexSet& S_hat,
                               const CriterionSpec& spec, bool skip_supersets = true,
                               const CandidatePolicy& policy = {});

/// ||eta||^2 * max_{S ⊂ S_hat \ {i}} { omega(S) z^T P_S_hat z - z^T P_S z }, floored at
/// zero. On the selection event (eta^T Y)^2 must exceed it. `coefficient` is a
/// column index of the design that belongs to S_hat.
double superset_lower_bound(const CandidateSet& candidates, const EtaDecomposition& decomp,
                            const IndexSet& S_hat, int coefficient, const CriterionSpec& spec);
double superset_lower_bound(const Dataset& data, const EtaDecomposition& decomp, const IndexSet& S_hat,
                            int coefficient, const CriterionSpec& spec, const CandidatePolicy& policy = {});

}  // namespace postaic
