#pragma once

#include <functional>
#include <span>

namespace minklog {

// Accuracy targets for the adaptive rules used by the measure computations.
struct QuadratureSpec {
  double target_abs_tol = 1e-14;
  double target_rel_tol = 1e-9;
  int max_subdivisions = 2000;
  int facet_rule_order = 16;

  void validate() const;
  static QuadratureSpec defaults_for(int n);
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order, thread-safe.
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};
GaussLegendreRule gauss_legendre(int order);

// Globally adaptive Gauss-Legendre integration of f over [a, b]. Each panel is
// estimated with the order-k rule on the panel and on its two halves; the
// halves' sum is kept and their difference is the error estimate. Panels with
// the largest estimate are split until the total meets the tolerance.
// Throws ToleranceError when the subdivision budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec);

}  // namespace minklog
