#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "minklog/density.hpp"
#include "minklog/geometry.hpp"
#include "minklog/quadrature.hpp"

namespace minklog {

// Finite measure on the direction set: one mass per facet normal.
struct MeasureVector {
  std::vector<double> values;
  double total = 0.0;

  static MeasureVector from_values(std::vector<double> values);
};

struct McSpec {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0x5eed;
  int stratification = 8;  // strata per axis (volume) or per facet piece (surface)

  void validate() const;
};

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Per-facet integrals of one body, computed in a single pass.
struct BodyMeasures {
  double volume = 0.0;    // gamma_{b,m}(K)
  MeasureVector surface;  // S_{b,m}(K, {u_i})
  MeasureVector cone;     // G_{b,m}(K, {u_i}) = h_i S_i
};

BodyMeasures measure_body(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad);

// gamma_{b,m}(K) = q * integral over S^{n-1} of F(rho_K(u)) du, in (0, 1).
double gg_volume(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad);

// S_i = integral of g over facet i (0 on inactive directions).
MeasureVector gg_surface_measure(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad);

// (1/p) h_i^(1-p) S_i; p = 0 is rejected (use gg_cone_measure).
MeasureVector lp_surface_measure(const PolytopeGeometry& body, const GGParams& params, double p,
                                 const QuadratureSpec& quad);

// G_i = h_i S_i.
MeasureVector gg_cone_measure(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad);

// d gamma / d h_i, which equals S_i. Requires b < m/(n+m).
Eigen::VectorXd volume_gradient(const PolytopeGeometry& body, const GGParams& params, const QuadratureSpec& quad);

// gamma_{b,m}(r B^n).
double ball_volume(double r, const GGParams& params);

// The r with ball_volume(r) = kappa.
double ball_radius_for_volume(double kappa, const GGParams& params);

// Stratified uniform sampling over the body's bounding box (clipped to the
// support ball when b > 0). Deterministic for a fixed seed.
McEstimate mc_volume_oracle(const PolytopeGeometry& body, const GGParams& params, const McSpec& mc);

// Uniform samples on one facet (area-weighted over the fan for n = 3).
// Throws DomainError for an inactive facet.
McEstimate mc_surface_oracle(const PolytopeGeometry& body, const GGParams& params, std::size_t facet,
                             const McSpec& mc);

}  // namespace minklog
