#pragma once

#include <functional>

namespace minklog {

struct RootResult {
  double root = 0.0;
  double value = 0.0;  // f(root)
  int evaluations = 0;
};

// Brent's method on a sign-changing bracket [a, b]. Stops when the bracket is
// narrower than xtol (absolute) or f hits zero exactly. Throws DomainError if
// f(a) and f(b) have the same strict sign.
RootResult brent(const std::function<double(double)>& f, double a, double b, double xtol,
                 int max_evaluations = 200);

// Root of an increasing function g(x) = target on (lo, +inf). Starting from
// guess, the bracket is grown geometrically by factor until it changes sign.
RootResult solve_increasing(const std::function<double(double)>& g, double target, double guess,
                            double factor, double xtol);

}  // namespace minklog
