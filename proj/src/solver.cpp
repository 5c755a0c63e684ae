#include "minklog/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "minklog/errors.hpp"
#include "minklog/root_finding.hpp"

namespace minklog {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kFloor = 1e-6;
constexpr double kConstraintTol = 1e-10;
// Below this multiple of el_tol the metric is rebuilt from a finite-difference
// Hessian; BFGS alone crawls when two normals are nearly parallel.
constexpr double kRefreshFactor = 100.0;
constexpr double kHessianStep = 1e-6;

}  // namespace

SolveConfig SolveConfig::defaults_for(int n) {
  SolveConfig cfg;
  cfg.el_tol = n == 2 ? 1e-8 : 1e-5;
  cfg.quad = QuadratureSpec::defaults_for(n);
  return cfg;
}

void SolveConfig::validate() const {
  if (allow_small_kappa) {
    if (!(kappa0 > 0.0 && kappa0 < 1.0)) throw DomainError("kappa0 must lie in (0, 1)");
  } else if (!(kappa0 > 0.75 && kappa0 < 1.0)) {
    std::ostringstream msg;
    msg << "kappa0 must lie in (3/4, 1) (got " << kappa0 << "); pass the expert override to relax";
    throw DomainError(msg.str());
  }
  if (!(el_tol > 0.0)) throw DomainError("el_tol must be positive");
  if (max_iters < 0) throw DomainError("max_iters must be non-negative");
  if (polish_steps < 0) throw DomainError("polish_steps must be non-negative");
  if (!(step0 > 0.0)) throw DomainError("step0 must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw DomainError("backtrack must lie in (0, 1)");
  if (!(min_step > 0.0)) throw DomainError("min_step must be positive");
  quad.validate();
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iters:
      return "max_iters";
    case SolveStatus::line_search_stalled:
      return "line_search_stalled";
    case SolveStatus::floor_violation:
      return "floor_violation";
  }
  return "unknown";
}

double entropy(const DiscreteMeasure& mu, const SupportVector& sv) {
  if (mu.dirs().size() != sv.size()) throw DomainError("measure and support vector have different sizes");
  // Accumulated in extended precision: near the optimum successive values
  // differ by a few ulps and the trace has to show the decrease.
  long double acc = 0.0L;
  for (std::size_t i = 0; i < sv.size(); ++i) acc += static_cast<long double>(mu.weights()[i]) * std::log(static_cast<long double>(sv[i]));
  return static_cast<double>(acc);
}

double body_entropy(const DiscreteMeasure& mu, const PolytopeGeometry& body) {
  return entropy(mu, body.source().with_h(body.effective_h()));
}

namespace {

// Scale of a fixed body that meets the volume constraint, found in log-scale.
double constraint_scale(const PolytopeGeometry& body, const GGParams& params, double kappa0,
                        const QuadratureSpec& quad) {
  if (!(kappa0 > 0.0 && kappa0 < 1.0)) throw DomainError("volume target must lie in (0, 1)");
  auto f = [&](double t) { return gg_volume(body.scaled(std::exp(t)), params, quad) - kappa0; };
  double lo = 0.0;
  double hi = 0.0;
  double f0 = f(0.0);
  if (f0 == 0.0) return 1.0;
  double step = 0.5;
  if (f0 < 0.0) {
    double fh = f0;
    while (fh < 0.0) {
      lo = hi;
      hi += step;
      step *= 2.0;
      fh = f(hi);
      if (hi > 700.0) throw DomainError("cannot bracket the volume constraint from above");
    }
  } else {
    double fl = f0;
    while (fl > 0.0) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      fl = f(lo);
      if (lo < -700.0) throw DomainError("cannot bracket the volume constraint from below");
    }
  }
  // t is a small correction after the first iterate, so the bracket is
  // closed down to the noise in gamma rather than to a fixed width.
  return std::exp(brent(f, lo, hi, 1e-300).root);
}

}  // namespace

double rescale_to_constraint(const SupportVector& sv, const GGParams& params, double kappa0,
                             const QuadratureSpec& quad) {
  params.require_variational();
  return constraint_scale(wulff_shape(sv), params, kappa0, quad);
}

double euler_lagrange_residual(const DiscreteMeasure& mu, const MeasureVector& cone) {
  if (!(cone.total > 0.0)) throw DomainError("cone measure has zero total mass");
  if (cone.values.size() != mu.weights().size()) throw DomainError("measure and cone measure sizes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < cone.values.size(); ++i)
    worst = std::max(worst, std::abs(mu.weights()[i] / mu.total() - cone.values[i] / cone.total));
  return worst;
}

double euler_lagrange_residual(const SupportVector& sv, const DiscreteMeasure& mu, const GGParams& params,
                               const QuadratureSpec& quad) {
  return euler_lagrange_residual(mu, gg_cone_measure(wulff_shape(sv), params, quad));
}

EntropyBound entropy_bound_check(const PolytopeGeometry& body, const DiscreteMeasure& mu) {
  const auto& dirs = mu.dirs();
  if (dirs.size() != body.source().size()) throw DomainError("measure and body have different direction sets");
  EntropyBound out;
  const Radii rad = radii(body);
  for (const auto& x : body.vertices())
    if (x.norm() == rad.outer) out.v0 = x.normalized();

  // Largest alpha on the 0.1 grid whose cap around v0 carries mass; the
  // non-concentration hypothesis guarantees some u_i . v0 > 0 otherwise.
  auto cap_mass = [&](double alpha) {
    double mass = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
      if (dirs[i].dot(out.v0) >= alpha) mass += mu.weights()[i];
    return mass;
  };
  double mass = 0.0;
  for (int k = 9; k >= 1; --k) {
    mass = cap_mass(0.1 * k);
    if (mass > 0.0) {
      out.alpha0 = 0.1 * k;
      break;
    }
  }
  if (mass == 0.0) {
    for (std::size_t i = 0; i < dirs.size(); ++i) out.alpha0 = std::max(out.alpha0, dirs[i].dot(out.v0));
    if (!(out.alpha0 > 0.0)) throw HemisphereError("measure is concentrated in the hemisphere opposite v0");
    mass = cap_mass(out.alpha0);
  }
  out.c = mass / mu.total();
  out.c_tilde = out.c * std::log(out.alpha0 / 2.0);
  const Eigen::VectorXd& h = body.effective_h();
  for (std::size_t i = 0; i < dirs.size(); ++i)
    out.lhs += mu.weights()[i] * std::log(h[static_cast<Eigen::Index>(i)]);
  out.lhs /= mu.total();
  out.rhs = std::log(rad.inner) + out.c * std::log(rad.outer / rad.inner) + out.c_tilde;
  out.holds = out.lhs >= out.rhs - 1e-12;
  return out;
}

EntropyBound entropy_bound_check(const SupportVector& sv, const DiscreteMeasure& mu) {
  return entropy_bound_check(wulff_shape(sv), mu);
}

namespace {

// A feasible point of the constrained problem with everything the iteration needs.
struct Iterate {
  PolytopeGeometry body;
  Eigen::VectorXd phi;       // log of the effective support numbers
  Eigen::VectorXd gradient;  // c/|mu| - G/G_total: gradient of the reduced objective
  BodyMeasures measures;
  double entropy;
  double residual;
};

// Projects onto the Wulff support function, restores gamma = kappa0 and evaluates.
Iterate make_iterate(const SupportVector& raw, const DiscreteMeasure& mu, const GGParams& params,
                     const SolveConfig& cfg) {
  const PolytopeGeometry projected = wulff_shape(raw.with_h(wulff_shape(raw).effective_h()));
  const double s = constraint_scale(projected, params, cfg.kappa0, cfg.quad);
  PolytopeGeometry body = projected.scaled(s);
  BodyMeasures measures = measure_body(body, params, cfg.quad);
  if (!(measures.cone.total > 0.0)) throw DomainError("body carries no cone measure");
  const std::size_t count = mu.dirs().size();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(count));
  Eigen::VectorXd gradient(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    phi[k] = std::log(body.effective_h()[k]);
    gradient[k] = mu.weights()[i] / mu.total() - measures.cone.values[i] / measures.cone.total;
  }
  const double phi_value = body_entropy(mu, body);
  const double residual = gradient.cwiseAbs().maxCoeff();
  return {std::move(body), std::move(phi), std::move(gradient), std::move(measures), phi_value, residual};
}

TraceEntry trace_entry(const Iterate& it, const DiscreteMeasure& mu, double step) {
  TraceEntry e;
  e.entropy = it.entropy;
  e.gamma = it.measures.volume;
  e.residual = it.residual;
  e.step = step;
  e.min_h = it.body.effective_h().minCoeff();
  e.outer_radius = radii(it.body).outer;
  e.bound_holds = entropy_bound_check(it.body, mu).holds;
  return e;
}

// Pseudo-inverse of the symmetrized finite-difference Hessian of the reduced
// objective on the complement of the all-ones direction. Empty if the
// Hessian is not positive semidefinite there or a probe leaves the domain.
std::optional<Eigen::MatrixXd> fd_inverse_hessian(const Iterate& at, const DiscreteMeasure& mu,
                                                  const GGParams& params, const SolveConfig& cfg) {
  const Eigen::Index dim = at.phi.size();
  Eigen::MatrixXd hess(dim, dim);
  try {
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::VectorXd up = at.phi;
      Eigen::VectorXd down = at.phi;
      up[j] += kHessianStep;
      down[j] -= kHessianStep;
      const Iterate a = make_iterate(at.body.source().with_h(up.array().exp().matrix()), mu, params, cfg);
      const Iterate b = make_iterate(at.body.source().with_h(down.array().exp().matrix()), mu, params, cfg);
      hess.col(j) = (a.gradient - b.gradient) / (2.0 * kHessianStep);
    }
  } catch (const UnboundedBodyError&) {
    return std::nullopt;
  }
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim) -
                               Eigen::MatrixXd::Constant(dim, dim, 1.0 / static_cast<double>(dim));
  const Eigen::MatrixXd sym = proj * (0.5 * (hess + hess.transpose())) * proj;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  if (!(top > 0.0) || lambda.minCoeff() < -1e-6 * top) return std::nullopt;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    if (lambda[k] > 1e-10 * top) inv[k] = 1.0 / lambda[k];
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

SolveReport solve(const DiscreteMeasure& mu, const GGParams& params, const SolveConfig& cfg) {
  cfg.validate();
  params.require_variational();
  if (params.n() != mu.dirs().n()) throw DomainError("density dimension does not match the measure");
  if (const auto v = hemisphere_witness(mu.dirs())) {
    std::ostringstream msg;
    msg << "measure concentrated in a closed hemisphere (all directions satisfy u . v >= 0 for v = ("
        << v->x() << ", " << v->y();
    if (mu.dirs().n() == 3) msg << ", " << v->z();
    msg << "))";
    throw HemisphereError(msg.str());
  }

  const std::size_t count = mu.dirs().size();
  const auto dim = static_cast<Eigen::Index>(count);
  const double r0 = ball_radius_for_volume(cfg.kappa0, params);
  Iterate current = make_iterate(SupportVector(mu.dirs(), Eigen::VectorXd::Constant(dim, r0)), mu, params, cfg);

  SolveReport report{current.body.source(), 0.0, {}, {}, 0.0, 0.0, 0, {}, SolveStatus::max_iters, {}, {}};
  report.trace.push_back(trace_entry(current, mu, 0.0));

  // Inverse-Hessian estimate of the reduced objective on the complement of the
  // all-ones direction (rescaling absorbs that direction exactly).
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(dim, dim);
  bool fresh_metric = true;
  const Eigen::VectorXd ones_unit = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  double step_hint = 1.0;
  bool refreshed = false;
  int polish_left = -1;  // counts down once el_tol is met

  int iter = 0;
  for (;; ++iter) {
    if (current.residual <= cfg.el_tol) {
      report.status = SolveStatus::converged;
      if (polish_left < 0) polish_left = cfg.polish_steps;
      if (polish_left-- == 0) break;
    }
    const bool polishing = polish_left >= 0;
    if (iter >= cfg.max_iters) {
      if (polishing) break;
      report.status = SolveStatus::max_iters;
      std::ostringstream msg;
      msg << "iteration budget " << cfg.max_iters << " exhausted with residual " << current.residual;
      report.diagnostic = msg.str();
      break;
    }
    const Eigen::VectorXd& g = current.gradient;
    if (!(current.residual > 0.0)) break;  // exact optimum, only reachable once converged
    if (cfg.quasi_newton && !refreshed && current.residual < kRefreshFactor * cfg.el_tol) {
      refreshed = true;
      if (auto inv = fd_inverse_hessian(current, mu, params, cfg)) {
        inv_hessian = std::move(*inv);
        fresh_metric = false;
      }
    }
    Eigen::VectorXd direction;
    if (cfg.quasi_newton && !fresh_metric) {
      direction = -(inv_hessian * g);
      if (!(direction.dot(g) < 0.0)) {
        inv_hessian.setIdentity();
        fresh_metric = true;
      }
    }
    if (!cfg.quasi_newton || fresh_metric) direction = -g * (cfg.step0 / g.cwiseAbs().maxCoeff());
    const double slope = g.dot(direction);

    // First trial: the full quasi-Newton step, or the last accepted steepest step.
    double tau = cfg.quasi_newton ? 1.0 : step_hint;
    const double cap = direction.cwiseAbs().maxCoeff();
    if (tau * cap > 1.0) tau = 1.0 / cap;
    const double phi_scale = mu.total();

    bool accepted = false;
    std::optional<Iterate> next;
    while (tau >= cfg.min_step) {
      const Eigen::VectorXd trial_phi = current.phi + tau * direction;
      try {
        Iterate cand = make_iterate(current.body.source().with_h(trial_phi.array().exp().matrix()), mu, params, cfg);
        const double decrease = (cand.entropy - current.entropy) / phi_scale;
        if (cand.entropy < current.entropy && decrease <= kArmijo * tau * slope &&
            (!polishing || cand.residual < current.residual)) {
          next.emplace(std::move(cand));
          accepted = true;
          break;
        }
      } catch (const UnboundedBodyError&) {
        // Step left the set of positively spanning bodies; shrink it.
      }
      tau *= cfg.backtrack;
    }
    if (!accepted && polishing) break;
    if (!accepted) {
      report.status = SolveStatus::line_search_stalled;
      std::ostringstream msg;
      msg << "no decrease down to step " << cfg.min_step << " at iteration " << iter << ", residual "
          << current.residual;
      report.diagnostic = msg.str();
      break;
    }

    // BFGS update with the realized step (after projection and rescaling),
    // restricted to the complement of the all-ones direction.
    Eigen::VectorXd s = next->phi - current.phi;
    s -= ones_unit * ones_unit.dot(s);
    const Eigen::VectorXd y = next->gradient - current.gradient;
    const double sy = s.dot(y);
    if (cfg.quasi_newton && sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh_metric) {
        inv_hessian = Eigen::MatrixXd::Identity(dim, dim) * (sy / y.squaredNorm());
        fresh_metric = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(dim, dim) - rho * s * y.transpose();
      inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
    }
    step_hint = std::min(1.0, tau / cfg.backtrack);

    current = std::move(*next);
    report.trace.push_back(trace_entry(current, mu, tau));
    if (!cfg.allow_small_kappa && report.trace.back().min_h < kFloor) {
      report.status = SolveStatus::floor_violation;
      std::ostringstream msg;
      msg << "support number dropped to " << report.trace.back().min_h << " < " << kFloor << " at iteration "
          << iter + 1;
      report.diagnostic = msg.str();
      ++iter;
      break;
    }
  }

  if (std::abs(current.measures.volume - cfg.kappa0) > kConstraintTol) {
    std::ostringstream msg;
    msg << "volume constraint drifted to " << current.measures.volume;
    report.diagnostic += (report.diagnostic.empty() ? "" : "; ") + msg.str();
  }
  report.h_star = current.body.source();
  report.gamma = current.measures.volume;
  report.surface = current.measures.surface;
  report.cone = current.measures.cone;
  report.entropy = current.entropy;
  report.el_residual = euler_lagrange_residual(mu, current.measures.cone);
  report.iterations = iter;
  report.bound = entropy_bound_check(current.body, mu);
  return report;
}

}  // namespace minklog
