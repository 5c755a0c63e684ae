#include "minklog/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "minklog/errors.hpp"

namespace minklog {

void QuadratureSpec::validate() const {
  if (!(target_abs_tol > 0.0) || !(target_rel_tol > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (facet_rule_order < 2) throw DomainError("quadrature rule order must be at least 2");
  if (max_subdivisions < 0) throw DomainError("quadrature subdivision budget must be non-negative");
}

QuadratureSpec QuadratureSpec::defaults_for(int n) {
  QuadratureSpec spec;
  spec.target_rel_tol = n == 2 ? 1e-9 : 1e-7;
  return spec;
}

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule build_rule(int order) {
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration on P_order from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double apply(const std::function<double(double)>& f, const GaussLegendreRule& rule, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

struct Panel {
  double a, b;
  double left, right;  // order-k estimates on the two halves
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

GaussLegendreRule gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<Rule>(build_rule(order));
  return {slot->nodes, slot->weights};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return {};
  const auto rule = gauss_legendre(spec.facet_rule_order);

  auto make_panel = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    Panel p{lo, hi, apply(f, rule, lo, mid), apply(f, rule, mid, hi), 0.0};
    p.error = std::abs(p.left + p.right - whole);
    return p;
  };

  std::priority_queue<Panel> queue;
  queue.push(make_panel(a, b, apply(f, rule, a, b)));
  double total = queue.top().left + queue.top().right;
  double error = queue.top().error;
  int splits = 0;
  while (error > std::max(spec.target_abs_tol, spec.target_rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature tolerance not met after " << splits << " subdivisions (estimate " << total
          << ", error " << error << ")";
      throw ToleranceError(msg.str());
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel lo = make_panel(worst.a, mid, worst.left);
    const Panel hi = make_panel(mid, worst.b, worst.right);
    total += (lo.left + lo.right + hi.left + hi.right) - (worst.left + worst.right);
    error += lo.error + hi.error - worst.error;
    queue.push(lo);
    queue.push(hi);
    ++splits;
  }
  // Re-sum in a fixed order so the value does not carry the running-update drift.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult result;
  for (const auto& p : panels) {
    result.value += p.left + p.right;
    result.error += p.error;
  }
  result.intervals = static_cast<int>(panels.size());
  return result;
}

}  // namespace minklog
