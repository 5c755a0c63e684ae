#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <vector>

namespace minklog {

// Points and directions live in R^3; planar (n = 2) data keeps z = 0.
using Vec = Eigen::Vector3d;

// Unit directions u_1..u_N in R^n (n = 2 or 3), N >= n + 1, pairwise distinct.
class DirectionSet {
 public:
  // Throws DomainError if a direction is not unit to 1e-12, if two directions
  // are within 1e-9 radians, if N < n + 1, or if n is not 2 or 3.
  DirectionSet(int n, std::vector<Vec> directions);

  // Normalizes each vector first (zero vectors are rejected).
  static DirectionSet normalized(int n, std::vector<Vec> directions);
  static DirectionSet from_rows(int n, const std::vector<std::vector<double>>& rows, bool normalize = false);

  // Regular polygon normals at angles offset + 2*pi*i/N (n = 2).
  static DirectionSet regular_polygon(int count, double offset = 0.0);

  int n() const { return n_; }
  std::size_t size() const { return directions_.size(); }
  const Vec& operator[](std::size_t i) const { return directions_[i]; }
  std::span<const Vec> all() const { return directions_; }

  DirectionSet rotated(const Eigen::Matrix3d& rotation) const;

 private:
  int n_;
  std::vector<Vec> directions_;
};

class DiscreteMeasure {
 public:
  // Throws DomainError unless weights.size() == N and every weight is positive and finite.
  DiscreteMeasure(DirectionSet dirs, std::vector<double> weights);

  const DirectionSet& dirs() const { return dirs_; }
  const std::vector<double>& weights() const { return weights_; }
  double total() const { return total_; }

 private:
  DirectionSet dirs_;
  std::vector<double> weights_;
  double total_;
};

// Support numbers h_i > 0 of a body over a fixed direction set.
class SupportVector {
 public:
  SupportVector(DirectionSet dirs, Eigen::VectorXd h);

  const DirectionSet& dirs() const { return dirs_; }
  const Eigen::VectorXd& h() const { return h_; }
  double operator[](std::size_t i) const { return h_[static_cast<Eigen::Index>(i)]; }
  std::size_t size() const { return dirs_.size(); }

  SupportVector scaled(double s) const { return {dirs_, h_ * s}; }
  SupportVector with_h(Eigen::VectorXd h) const { return {dirs_, std::move(h)}; }

 private:
  DirectionSet dirs_;
  Eigen::VectorXd h_;
};

struct Facet {
  int direction = -1;
  // n = 2: {start, end} in counter-clockwise order.
  // n = 3: boundary loop, counter-clockwise seen from outside.
  std::vector<Vec> vertices;
  double area = 0.0;  // (n-1)-dimensional measure
  // n = 3 only: triangles (centroid, v_j, v_{j+1}).
  std::vector<std::array<Vec, 3>> fan;
};

// The Wulff shape [h] = intersection of {x : x . u_i <= h_i}.
class PolytopeGeometry {
 public:
  const SupportVector& source() const { return source_; }
  int n() const { return source_.dirs().n(); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  // Only facets with positive (n-1)-measure, in direction-index order.
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<bool>& active() const { return active_; }
  bool is_active(std::size_t i) const { return active_[i]; }
  // Support function of [h] at each u_i; equals h_i on active facets.
  const Eigen::VectorXd& effective_h() const { return effective_h_; }
  // Facet for direction i, or nullptr when inactive.
  const Facet* facet_for(std::size_t i) const;

  // Geometry of [s h] without rebuilding the hull.
  PolytopeGeometry scaled(double s) const;

 private:
  friend PolytopeGeometry wulff_shape(const SupportVector& sv);
  explicit PolytopeGeometry(SupportVector source) : source_(std::move(source)) {}

  SupportVector source_;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  std::vector<bool> active_;
  std::vector<int> facet_index_;
  Eigen::VectorXd effective_h_;
};

// Throws UnboundedBodyError when the directions do not positively span R^n.
PolytopeGeometry wulff_shape(const SupportVector& sv);

// h_K(v) = max over vertices of x . v.
double support_function(const PolytopeGeometry& body, const Vec& v);

// rho(u) = min over u . u_i > 0 of h_i / (u . u_i).
double radial_function(const SupportVector& sv, const Vec& u);

// Normal u_i of the facet hit by the ray through u. Throws TieError when two
// constraints attain the minimum within 1e-12 relative.
Vec ray_normal(const SupportVector& sv, const Vec& u);
std::size_t ray_facet(const SupportVector& sv, const Vec& u);

// A unit v with u_i . v >= 0 for every direction, if one exists.
std::optional<Vec> hemisphere_witness(const DirectionSet& dirs);
// True iff the measure is NOT concentrated in any closed hemisphere.
bool hemisphere_check(const DiscreteMeasure& mu);
bool positively_spanning(const DirectionSet& dirs);

struct Radii {
  double inner;  // r_K = min |x| over the boundary
  double outer;  // R_K = max |x| over the body
};
Radii radii(const PolytopeGeometry& body);

// Sup-norm distance between the support functions of [A] and [B].
double hausdorff_distance(const SupportVector& a, const SupportVector& b);

// (a h_A^p + b h_B^p)^(1/p) for p != 0 and h_A^a h_B^b for p = 0.
SupportVector combine_lp(const SupportVector& a_body, const SupportVector& b_body, double a, double b, double p);

// Uniformly spread directions on S^2 (Fibonacci lattice).
std::vector<Vec> fibonacci_sphere(int count);

}  // namespace minklog
