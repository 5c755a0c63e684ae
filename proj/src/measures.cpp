#include "minklog/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "minklog/errors.hpp"
#include "minklog/parallel.hpp"
#include "minklog/random.hpp"
#include "minklog/root_finding.hpp"

namespace minklog {

MeasureVector MeasureVector::from_values(std::vector<double> values) {
  MeasureVector mv;
  mv.values = std::move(values);
  for (double v : mv.values) mv.total += v;
  return mv;
}

void McSpec::validate() const {
  if (samples < 1000) throw DomainError("Monte Carlo needs at least 1000 samples");
  if (stratification < 1) throw DomainError("stratification must be at least 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FacetIntegrals {
  double volume = 0.0;   // integral of g over the cone from the origin to the facet
  double surface = 0.0;  // integral of g over the facet
};

// Integrates f over [lo, hi] after splitting at the given breakpoints.
double integrate_split(const std::function<double(double)>& f, double lo, double hi, std::vector<double> cuts,
                       const QuadratureSpec& quad) {
  const double sign = hi >= lo ? 1.0 : -1.0;
  const double a = std::min(lo, hi);
  const double b = std::max(lo, hi);
  std::vector<double> pts{a};
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  pts.push_back(b);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) total += integrate(f, pts[k], pts[k + 1], quad).value;
  return sign * total;
}

FacetIntegrals planar_facet(const Facet& facet, const Vec& u, double h, const GGParams& params,
                            const QuadratureSpec& quad, bool need_surface) {
  const Vec tangent(-u.y(), u.x(), 0.0);
  const double t_a = facet.vertices[0].dot(tangent);
  const double t_b = facet.vertices[1].dot(tangent);
  const double reach = support_radius(params);
  FacetIntegrals out;

  // Cone over the edge in the angle from the foot point: rho = h / cos(alpha).
  const double alpha_a = std::atan2(t_a, h);
  const double alpha_b = std::atan2(t_b, h);
  if (h >= reach) {
    out.volume = radial_cumulative(params, reach) * (alpha_b - alpha_a);
  } else {
    std::vector<double> cuts;
    if (std::isfinite(reach)) {
      const double alpha_star = std::acos(h / reach);
      cuts = {-alpha_star, alpha_star};
    }
    auto f = [&](double alpha) { return radial_cumulative(params, h / std::cos(alpha)); };
    out.volume = integrate_split(f, alpha_a, alpha_b, cuts, quad);
  }

  if (need_surface && h < reach) {
    double lo = t_a;
    double hi = t_b;
    if (std::isfinite(reach)) {
      const double half = std::sqrt(reach * reach - h * h);
      lo = std::max(lo, -half);
      hi = std::min(hi, half);
    }
    if (hi > lo) {
      auto g = [&](double t) { return radial_profile(params, std::sqrt(h * h + t * t)); };
      out.surface = integrate(g, lo, hi, quad).value;
    }
  }
  return out;
}

// For n = 3 both integrands depend only on the in-plane distance s from the
// foot point h u. Each facet is split into signed triangles (foot, a, b) and
// each triangle is integrated in polar coordinates about the foot, which
// leaves a 1-D integral in the angle of a closed-form radial antiderivative.
FacetIntegrals spatial_facet(const Facet& facet, const Vec& u, double h, const GGParams& params,
                             const QuadratureSpec& quad, bool need_surface) {
  const double reach = support_radius(params);
  const double f_h = radial_cumulative(params, std::min(h, reach));
  const double w2_h = radial_moment(params, 2, std::min(h, reach));

  // Integral over the disc of in-plane radius s of g / q (surface) and of the
  // cone integrand F(|x|) h / |x|^3 (volume).
  auto psi_surface = [&](double s) {
    const double rho = std::min(std::hypot(h, s), reach);
    return radial_moment(params, 2, rho) - w2_h;
  };
  auto psi_volume = [&](double s) {
    const double rho = std::hypot(h, s);
    const double clipped = std::min(rho, reach);
    return h * (f_h / h - radial_cumulative(params, clipped) / rho + radial_moment(params, 2, clipped) - w2_h);
  };

  Vec e1;
  Vec e2;
  {
    const Vec helper = std::abs(u.x()) < 0.9 ? Vec::UnitX() : Vec::UnitY();
    e1 = helper.cross(u).normalized();
    e2 = u.cross(e1);
  }
  const Vec foot = h * u;
  std::vector<Eigen::Vector2d> loop;
  loop.reserve(facet.vertices.size());
  for (const auto& v : facet.vertices) loop.emplace_back((v - foot).dot(e1), (v - foot).dot(e2));

  double in_plane_reach = kInf;
  if (std::isfinite(reach)) in_plane_reach = h < reach ? std::sqrt(reach * reach - h * h) : 0.0;
  const bool surface_vanishes = h >= reach || !need_surface;

  double scale = 0.0;
  for (const auto& w : loop) scale = std::max(scale, w.norm());
  scale = std::max(scale, h);

  FacetIntegrals out;
  const std::size_t k = loop.size();
  for (std::size_t j = 0; j < k; ++j) {
    const Eigen::Vector2d& a = loop[j];
    const Eigen::Vector2d& b = loop[(j + 1) % k];
    const Eigen::Vector2d edge = b - a;
    Eigen::Vector2d normal(edge.y(), -edge.x());
    normal.normalize();
    double d = normal.dot(a);
    if (d < 0.0) {
      normal = -normal;
      d = -d;
    }
    if (d <= 1e-14 * scale) continue;  // foot on the edge line: degenerate triangle
    const Eigen::Vector2d tangent(-normal.y(), normal.x());
    const double alpha_a = std::atan2(a.dot(tangent), d);
    const double alpha_b = std::atan2(b.dot(tangent), d);
    std::vector<double> cuts;
    if (std::isfinite(in_plane_reach) && d < in_plane_reach) {
      const double alpha_star = std::acos(d / in_plane_reach);
      cuts = {-alpha_star, alpha_star};
    }
    out.volume +=
        integrate_split([&](double alpha) { return psi_volume(d / std::cos(alpha)); }, alpha_a, alpha_b, cuts, quad);
    if (!surface_vanishes) {
      out.surface += integrate_split([&](double alpha) { return psi_surface(d / std::cos(alpha)); }, alpha_a,
                                     alpha_b, cuts, quad);
    }
  }
  if (surface_vanishes) out.surface = 0.0;
  return out;
}

std::vector<FacetIntegrals> facet_integrals(const PolytopeGeometry& body, const GGParams& params,
                                            const QuadratureSpec& quad, bool need_surface) {
  quad.validate();
  if (params.n() != body.n()) throw DomainError("density dimension does not match the body");
  const auto& facets = body.facets();
  std::vector<FacetIntegrals> parts(facets.size());
  parallel_for(facets.size(), [&](std::size_t k) {
    const Facet& f = facets[k];
    const Vec& u = body.source().dirs()[f.direction];
    const double h = body.source()[f.direction];
    parts[k] = body.n() == 2 ? planar_facet(f, u, h, params, quad, need_surface)
                             : spatial_facet(f, u, h, params, quad, need_surface);
  });
  return parts;
}

double finish_volume(double raw, const GGParams& params) {
  return std::clamp(params.q() * raw, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

}  // namespace

BodyMeasures measure_body(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad) {
  const auto parts = facet_integrals(body, params, quad, true);
  const auto& facets = body.facets();

  const std::size_t count = body.source().size();
  std::vector<double> surface(count, 0.0);
  std::vector<double> cone(count, 0.0);
  double volume = 0.0;
  for (std::size_t k = 0; k < facets.size(); ++k) {
    const int i = facets[k].direction;
    volume += parts[k].volume;
    surface[i] = params.q() * std::max(parts[k].surface, 0.0);
    cone[i] = body.source()[i] * surface[i];
  }
  BodyMeasures out;
  out.volume = finish_volume(volume, params);
  out.surface = MeasureVector::from_values(std::move(surface));
  out.cone = MeasureVector::from_values(std::move(cone));
  return out;
}

double gg_volume(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad) {
  double volume = 0.0;
  for (const auto& part : facet_integrals(body, params, quad, false)) volume += part.volume;
  return finish_volume(volume, params);
}

MeasureVector gg_surface_measure(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad) {
  return measure_body(body, params, quad).surface;
}

MeasureVector lp_surface_measure(const PolytopeGeometry& body, const GGParams& params, double p,
                                 const QuadratureSpec& quad) {
  if (p == 0.0) throw DomainError("p = 0 has no L_p surface measure; use the cone measure");
  MeasureVector s = gg_surface_measure(body, params, quad);
  std::vector<double> values(s.values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = s.values[i] == 0.0 ? 0.0 : std::pow(body.source()[i], 1.0 - p) * s.values[i] / p;
  return MeasureVector::from_values(std::move(values));
}

MeasureVector gg_cone_measure(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad) {
  return measure_body(body, params, quad).cone;
}

Eigen::VectorXd volume_gradient(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad) {
  params.require_variational();
  const MeasureVector s = gg_surface_measure(body, params, quad);
  return Eigen::Map<const Eigen::VectorXd>(s.values.data(), static_cast<Eigen::Index>(s.values.size()));
}

double ball_volume(double r, const GGParams& params) {
  if (!(r >= 0.0)) throw DomainError("ball radius must be non-negative");
  return params.q() * unit_sphere_area(params.n()) * radial_cumulative(params, r);
}

double ball_radius_for_volume(double kappa, const GGParams& params) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("ball volume target must lie in (0, 1)");
  const double reach = support_radius(params);
  auto g = [&](double r) { return ball_volume(std::min(r, reach), params); };
  double guess = 1.0;
  if (std::isfinite(reach)) guess = 0.5 * reach;
  RootResult r = solve_increasing(g, kappa, guess, 2.0, 0.0);
  return std::min(r.root, reach);
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double variance_of_mean() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / static_cast<double>(count - 1));
    return var / static_cast<double>(count);
  }
};

bool inside(const SupportVector& sv, const Vec& x) {
  for (std::size_t i = 0; i < sv.size(); ++i)
    if (x.dot(sv.dirs()[i]) > sv[i]) return false;
  return true;
}

}  // namespace

McEstimate mc_volume_oracle(const PolytopeGeometry& body, const GGParams& params, const McSpec& mc) {
  mc.validate();
  const int n = body.n();
  Vec lo = Vec::Constant(kInf);
  Vec hi = Vec::Constant(-kInf);
  for (const auto& v : body.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double reach = support_radius(params);
  if (std::isfinite(reach)) {
    lo = lo.cwiseMax(Vec::Constant(-reach));
    hi = hi.cwiseMin(Vec::Constant(reach));
  }
  if (n == 2) lo.z() = hi.z() = 0.0;

  const int k = mc.stratification;
  const std::int64_t cells = n == 2 ? std::int64_t{k} * k : std::int64_t{k} * k * k;
  const std::int64_t per_cell = std::max<std::int64_t>(2, mc.samples / cells);
  const Vec width = (hi - lo) / k;
  const double cell_volume = n == 2 ? width.x() * width.y() : width.x() * width.y() * width.z();
  const CounterRng rng(mc.seed, 1);

  std::vector<double> mean(static_cast<std::size_t>(cells));
  std::vector<double> var(static_cast<std::size_t>(cells));
  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t c) {
    const std::int64_t ix = static_cast<std::int64_t>(c) % k;
    const std::int64_t iy = (static_cast<std::int64_t>(c) / k) % k;
    const std::int64_t iz = static_cast<std::int64_t>(c) / (std::int64_t{k} * k);
    Moments mom;
    for (std::int64_t j = 0; j < per_cell; ++j) {
      const std::uint64_t base = 3 * static_cast<std::uint64_t>(static_cast<std::int64_t>(c) * per_cell + j);
      Vec x;
      x.x() = lo.x() + width.x() * (ix + rng.uniform(base));
      x.y() = lo.y() + width.y() * (iy + rng.uniform(base + 1));
      x.z() = n == 2 ? 0.0 : lo.z() + width.z() * (iz + rng.uniform(base + 2));
      mom.add(inside(body.source(), x) ? density_at_radius(params, x.norm()) : 0.0);
    }
    mean[c] = mom.mean();
    var[c] = mom.variance_of_mean();
  });
  McEstimate est;
  double variance = 0.0;
  for (std::size_t c = 0; c < mean.size(); ++c) {
    est.estimate += cell_volume * mean[c];
    variance += cell_volume * cell_volume * var[c];
  }
  est.stderr_ = std::sqrt(variance);
  return est;
}

McEstimate mc_surface_oracle(const PolytopeGeometry& body, const GGParams& params, std::size_t facet,
                             const McSpec& mc) {
  mc.validate();
  const Facet* f = facet < body.source().size() ? body.facet_for(facet) : nullptr;
  if (f == nullptr) throw DomainError("facet is inactive; its surface measure is zero by definition");

  // Pieces: strata of the edge (n = 2) or fan triangles (n = 3).
  struct Piece {
    Vec a, b, c;
    double measure;
  };
  std::vector<Piece> pieces;
  if (body.n() == 2) {
    const int k = mc.stratification;
    for (int s = 0; s < k; ++s) {
      const Vec a = f->vertices[0] + (f->vertices[1] - f->vertices[0]) * (static_cast<double>(s) / k);
      const Vec b = f->vertices[0] + (f->vertices[1] - f->vertices[0]) * (static_cast<double>(s + 1) / k);
      pieces.push_back({a, b, b, (b - a).norm()});
    }
  } else {
    for (const auto& tri : f->fan)
      pieces.push_back({tri[0], tri[1], tri[2], 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm()});
  }
  double total_measure = 0.0;
  for (const auto& p : pieces) total_measure += p.measure;

  const CounterRng rng(mc.seed, 2 + facet);
  McEstimate est;
  double variance = 0.0;
  std::uint64_t counter = 0;
  for (const auto& p : pieces) {
    const auto draws = std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::llround(static_cast<double>(mc.samples) * p.measure / total_measure)));
    Moments mom;
    for (std::int64_t j = 0; j < draws; ++j, counter += 2) {
      Vec x;
      if (body.n() == 2) {
        x = p.a + (p.b - p.a) * rng.uniform(counter);
      } else {
        // Uniform point in a triangle.
        const double r1 = std::sqrt(rng.uniform(counter));
        const double r2 = rng.uniform(counter + 1);
        x = (1.0 - r1) * p.a + r1 * (1.0 - r2) * p.b + r1 * r2 * p.c;
      }
      mom.add(density_at_radius(params, x.norm()));
    }
    est.estimate += p.measure * mom.mean();
    variance += p.measure * p.measure * mom.variance_of_mean();
  }
  est.stderr_ = std::sqrt(variance);
  return est;
}

}  // namespace minklog
