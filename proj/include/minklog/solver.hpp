#pragma once

#include <string>
#include <vector>

#include "minklog/density.hpp"
#include "minklog/geometry.hpp"
#include "minklog/measures.hpp"
#include "minklog/quadrature.hpp"

namespace minklog {

struct SolveConfig {
  double kappa0 = 0.8;
  int max_iters = 5000;
  double el_tol = 1e-8;
  double step0 = 0.5;  // largest change of any log h_i on the first trial step
  double backtrack = 0.5;
  double min_step = 1e-12;
  QuadratureSpec quad;
  // Accept kappa0 anywhere in (0, 1) and skip the h >= 1e-6 floor check.
  bool allow_small_kappa = false;
  // Precondition the descent direction with a BFGS inverse-Hessian estimate;
  // false gives plain projected steepest descent.
  bool quasi_newton = true;
  // Extra steps once el_tol is met, each kept only if the residual drops.
  // Matters when a nearly degenerate facet makes the body sensitive to G.
  int polish_steps = 3;

  static SolveConfig defaults_for(int n);
  void validate() const;
};

enum class SolveStatus { converged, max_iters, line_search_stalled, floor_violation };
std::string to_string(SolveStatus status);

struct EntropyBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  Vec v0 = Vec::Zero();
  double alpha0 = 0.0;
  double c = 0.0;
  double c_tilde = 0.0;
};

struct TraceEntry {
  double entropy = 0.0;
  double gamma = 0.0;
  double residual = 0.0;
  double step = 0.0;  // accepted line-search parameter leading to this iterate (0 for the start)
  double min_h = 0.0;
  double outer_radius = 0.0;
  bool bound_holds = false;
};

struct SolveReport {
  SupportVector h_star;
  double gamma = 0.0;
  MeasureVector surface;
  MeasureVector cone;
  double entropy = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::max_iters;
  EntropyBound bound;
  std::string diagnostic;
};

// Phi_mu(h) = sum c_i log h_i over the raw support numbers.
double entropy(const DiscreteMeasure& mu, const SupportVector& sv);
// Phi_mu(K) evaluated on the support function of the Wulff shape.
double body_entropy(const DiscreteMeasure& mu, const PolytopeGeometry& body);

// The s > 0 with gamma([s h]) = kappa0.
double rescale_to_constraint(const SupportVector& sv, const GGParams& params, double kappa0,
                             const QuadratureSpec& quad);

// max_i | c_i / |mu| - G_i / G_total |.
double euler_lagrange_residual(const DiscreteMeasure& mu, const MeasureVector& cone);
double euler_lagrange_residual(const SupportVector& sv, const DiscreteMeasure& mu, const GGParams& params,
                               const QuadratureSpec& quad);

// Lower bound on the normalized entropy in terms of the inner and outer radii.
EntropyBound entropy_bound_check(const SupportVector& sv, const DiscreteMeasure& mu);
EntropyBound entropy_bound_check(const PolytopeGeometry& body, const DiscreteMeasure& mu);

// Minimizes Phi_mu over bodies with gamma = kappa0 and returns a body whose
// normalized cone measure matches mu / |mu| to el_tol on convergence.
// Throws HemisphereError, VariationalDomainError or DomainError on bad input.
SolveReport solve(const DiscreteMeasure& mu, const GGParams& params, const SolveConfig& cfg);

}  // namespace minklog
