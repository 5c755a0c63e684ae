#pragma once

// Gamma/Beta family on the positive reals, accurate to ~1e-14 relative.

namespace minklog::special {

// log Gamma(x), x > 0 (Lanczos, g = 7).
double log_gamma(double x);

// Gamma(x), x > 0; overflows to +inf above ~171.6.
double gamma(double x);

double log_beta(double a, double b);
double beta(double a, double b);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), a > 0, x >= 0.
double gamma_p(double a, double x);
// Q(a, x) = 1 - P(a, x), computed without cancellation.
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b). The complement y = 1 - x is passed
// separately so callers that know it exactly (e.g. y = 1/(1+t)) keep full precision.
double beta_inc(double a, double b, double x, double y);
inline double beta_inc(double a, double b, double x) { return beta_inc(a, b, x, 1.0 - x); }

}  // namespace minklog::special
