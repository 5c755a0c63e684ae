#pragma once

#include <span>

namespace minklog {

// Parameters of the generalized Gaussian family g_{b,m} on R^n.
//
// The density is q * [1 - (b/m)|x|^m]_+^(1/b - n/m - 1) for b != 0 and
// q * exp(-|x|^m / m) for b = 0. It is a probability density whenever
// b < m/n; volume derivatives additionally need b < m/(n+m).
class GGParams {
 public:
  // Throws DomainError unless m > 0, n >= 2 and b < m/n.
  GGParams(double b, double m, int n);

  double b() const { return b_; }
  double m() const { return m_; }
  int n() const { return n_; }
  double q() const { return q_; }
  bool variational_ok() const { return variational_ok_; }

  // Exponent 1/b - n/m - 1 of the bracket (unused when b = 0).
  double exponent() const { return exponent_; }

  // Throws VariationalDomainError when !variational_ok().
  void require_variational() const;

 private:
  double b_;
  double m_;
  int n_;
  double q_;
  double exponent_;
  bool variational_ok_;
};

double normalization_constant(double b, double m, int n);

// Surface area n * omega_n of the unit sphere in R^n.
double unit_sphere_area(int n);

// g(x) for a point with Euclidean norm r.
double density_at_radius(const GGParams& params, double r);
double density(const GGParams& params, std::span<const double> x);

// The unnormalized radial profile g(x)/q at |x| = r.
double radial_profile(const GGParams& params, double r);

// Radius beyond which g vanishes: (m/b)^(1/m) for b > 0, +inf otherwise.
double support_radius(const GGParams& params);

// W_k(s) = integral_0^s profile(r) r^(k-1) dr for 1 <= k <= n, in closed form
// (regularized incomplete gamma for b = 0, incomplete beta otherwise).
double radial_moment(const GGParams& params, int k, double s);

// F(s) = W_n(s); q * |S^{n-1}| * F(s) is the mass of the ball of radius s.
double radial_cumulative(const GGParams& params, double s);

// Same integral by adaptive quadrature; an independent route for cross-checks.
double radial_cumulative_quadrature(const GGParams& params, double s, double rel_tol = 1e-14);

}  // namespace minklog
