#include "minklog/root_finding.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "minklog/errors.hpp"

namespace minklog {

RootResult brent(const std::function<double(double)>& f, double a, double b, double xtol,
                 int max_evaluations) {
  double fa = f(a);
  double fb = f(b);
  int evals = 2;
  if (fa == 0.0) return {a, fa, evals};
  if (fb == 0.0) return {b, fb, evals};
  if ((fa > 0.0) == (fb > 0.0)) throw DomainError("brent: interval does not bracket a root");

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (evals < max_evaluations) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) break;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    ++evals;
  }
  return {b, fb, evals};
}

RootResult solve_increasing(const std::function<double(double)>& g, double target, double guess,
                            double factor, double xtol) {
  auto f = [&](double x) { return g(x) - target; };
  double lo = guess;
  double hi = guess;
  double flo = f(lo);
  int evals = 1;
  if (flo == 0.0) return {lo, 0.0, evals};
  if (flo < 0.0) {
    double fhi = flo;
    while (fhi < 0.0) {
      lo = hi;
      hi *= factor;
      fhi = f(hi);
      ++evals;
      if (!std::isfinite(hi) || evals > 400) throw DomainError("solve_increasing: no upper bracket");
    }
  } else {
    double fl = flo;
    while (fl > 0.0) {
      hi = lo;
      lo /= factor;
      fl = f(lo);
      ++evals;
      if (lo == 0.0 || evals > 400) throw DomainError("solve_increasing: no lower bracket");
    }
  }
  RootResult r = brent(f, lo, hi, xtol);
  r.evaluations += evals;
  r.value += target;
  return r;
}

}  // namespace minklog
