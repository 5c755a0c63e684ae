#include "minklog/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "minklog/errors.hpp"
#include "minklog/quadrature.hpp"
#include "minklog/special_functions.hpp"

namespace minklog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(double b, double m, int n) {
  std::ostringstream msg;
  if (!(m > 0.0) || !std::isfinite(m)) {
    msg << "m must be positive and finite (got " << m << ")";
  } else if (n < 2) {
    msg << "dimension n must be at least 2 (got " << n << ")";
  } else if (!std::isfinite(b) || !(b < m / n)) {
    msg << "b must satisfy b < m/n = " << m / n << " (got " << b << ")";
  } else {
    return;
  }
  throw DomainError(msg.str());
}

}  // namespace

double normalization_constant(double b, double m, int n) {
  validate(b, m, n);
  using special::beta;
  using special::gamma;
  const double dn = n;
  const double common = gamma(dn / 2.0 + 1.0) / std::pow(std::numbers::pi, dn / 2.0);
  if (b == 0.0) return common / (std::pow(m, dn / m) * gamma(dn / m + 1.0));
  const double scale = (m / dn) * std::pow(std::abs(b) / m, dn / m);
  if (b < 0.0) return scale * common / beta(dn / m, 1.0 - 1.0 / b);
  return scale * common / beta(dn / m, 1.0 / b - dn / m);
}

GGParams::GGParams(double b, double m, int n) : b_(b), m_(m), n_(n) {
  validate(b, m, n);
  q_ = normalization_constant(b, m, n);
  exponent_ = b == 0.0 ? 0.0 : 1.0 / b - static_cast<double>(n) / m - 1.0;
  variational_ok_ = b < m / (n + m);
}

void GGParams::require_variational() const {
  if (!variational_ok_) {
    std::ostringstream msg;
    msg << "b must satisfy b < m/(n+m) = " << m_ / (n_ + m_) << " for variational quantities (got " << b_ << ")";
    throw VariationalDomainError(msg.str());
  }
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / special::gamma(n / 2.0);
}

double radial_profile(const GGParams& params, double r) {
  const double b = params.b();
  const double m = params.m();
  const double rm = std::pow(r, m);
  if (b == 0.0) return std::exp(-rm / m);
  const double t = -(b / m) * rm;  // bracket = 1 + t
  if (t <= -1.0) return 0.0;
  if (b > 0.0 && r >= std::pow(m / b, 1.0 / m)) return 0.0;  // rounding near the edge
  return std::exp(params.exponent() * std::log1p(t));
}

double density_at_radius(const GGParams& params, double r) { return params.q() * radial_profile(params, r); }

double density(const GGParams& params, std::span<const double> x) {
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return density_at_radius(params, std::sqrt(r2));
}

double support_radius(const GGParams& params) {
  if (params.b() > 0.0) return std::pow(params.m() / params.b(), 1.0 / params.m());
  return kInf;
}

double radial_moment(const GGParams& params, int k, double s) {
  if (!(s >= 0.0)) throw DomainError("radial integrals need s >= 0");
  if (k < 1 || k > params.n()) throw DomainError("radial moment order must lie in [1, n]");
  if (s == 0.0) return 0.0;
  const double b = params.b();
  const double m = params.m();
  const double a = k / m;
  if (b == 0.0) {
    const double full = std::pow(m, a - 1.0) * special::gamma(a);
    return full * special::gamma_p(a, std::pow(s, m) / m);
  }
  const double ab = std::abs(b);
  const double scale = std::pow(m / ab, a) / m;
  if (b > 0.0) {
    const double c = params.exponent() + 1.0;  // 1/b - n/m > 0
    const double x = (b / m) * std::pow(s, m);
    const double full = scale * special::beta(a, c);
    if (x >= 1.0) return full;
    return full * special::beta_inc(a, c, x, 1.0 - x);
  }
  // b < 0: substitute t = (|b|/m) r^m, y = t / (1 + t).
  const double c = 1.0 - 1.0 / b + (params.n() - k) / m;
  const double t = (ab / m) * std::pow(s, m);
  const double full = scale * special::beta(a, c);
  if (std::isinf(t)) return full;
  return full * special::beta_inc(a, c, t / (1.0 + t), 1.0 / (1.0 + t));
}

double radial_cumulative(const GGParams& params, double s) { return radial_moment(params, params.n(), s); }

double radial_cumulative_quadrature(const GGParams& params, double s, double rel_tol) {
  if (!(s >= 0.0)) throw DomainError("radial integrals need s >= 0");
  const double end = std::min(s, support_radius(params));
  const int n = params.n();
  QuadratureSpec spec;
  spec.target_rel_tol = rel_tol;
  spec.target_abs_tol = 1e-300;
  spec.max_subdivisions = 20000;
  auto f = [&](double r) { return radial_profile(params, r) * std::pow(r, n - 1); };
  if (std::isinf(end)) {
    // Map [0, inf) onto [0, 1) with r = t / (1 - t).
    auto g = [&](double t) {
      const double one_minus = 1.0 - t;
      return f(t / one_minus) / (one_minus * one_minus);
    };
    return integrate(g, 0.0, 1.0, spec).value;
  }
  return integrate(f, 0.0, end, spec).value;
}

}  // namespace minklog
