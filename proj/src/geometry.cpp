#include "minklog/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "minklog/errors.hpp"

namespace minklog {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kMinSeparation = 1e-9;

double cross2(const Vec& a, const Vec& b) { return a.x() * b.y() - a.y() * b.x(); }

// Orthonormal e1, e2 with e1 x e2 = normal.
std::pair<Vec, Vec> plane_frame(const Vec& normal) {
  const Vec helper = std::abs(normal.x()) < 0.9 ? Vec::UnitX() : Vec::UnitY();
  Vec e1 = helper.cross(normal).normalized();
  Vec e2 = normal.cross(e1);
  return {e1, e2};
}

}  // namespace

// ---------------------------------------------------------------- data types

DirectionSet::DirectionSet(int n, std::vector<Vec> directions) : n_(n), directions_(std::move(directions)) {
  if (n != 2 && n != 3) throw DomainError("only dimensions 2 and 3 are supported");
  if (directions_.size() < static_cast<std::size_t>(n + 1)) {
    std::ostringstream msg;
    msg << "need at least n+1 = " << n + 1 << " directions (got " << directions_.size() << ")";
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < directions_.size(); ++i) {
    const Vec& u = directions_[i];
    if (!u.allFinite()) throw DomainError("direction has non-finite components");
    if (n == 2 && u.z() != 0.0) throw DomainError("planar directions must have z = 0");
    if (std::abs(u.norm() - 1.0) > kUnitTol) {
      std::ostringstream msg;
      msg << "direction " << i << " is not a unit vector (norm " << u.norm() << ")";
      throw DomainError(msg.str());
    }
  }
  for (std::size_t i = 0; i < directions_.size(); ++i) {
    for (std::size_t j = i + 1; j < directions_.size(); ++j) {
      const double angle = std::atan2(directions_[i].cross(directions_[j]).norm(), directions_[i].dot(directions_[j]));
      if (angle <= kMinSeparation) {
        std::ostringstream msg;
        msg << "directions " << i << " and " << j << " coincide (angle " << angle << ")";
        throw DomainError(msg.str());
      }
    }
  }
}

DirectionSet DirectionSet::normalized(int n, std::vector<Vec> directions) {
  for (auto& u : directions) {
    const double len = u.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("cannot normalize a zero or non-finite direction");
    u /= len;
  }
  return {n, std::move(directions)};
}

DirectionSet DirectionSet::from_rows(int n, const std::vector<std::vector<double>>& rows, bool normalize) {
  std::vector<Vec> dirs;
  dirs.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(n)) throw DomainError("direction has the wrong number of components");
    dirs.emplace_back(row[0], row[1], n == 3 ? row[2] : 0.0);
  }
  return normalize ? normalized(n, std::move(dirs)) : DirectionSet(n, std::move(dirs));
}

DirectionSet DirectionSet::regular_polygon(int count, double offset) {
  std::vector<Vec> dirs;
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = offset + 2.0 * std::numbers::pi * i / count;
    dirs.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  return {2, std::move(dirs)};
}

DirectionSet DirectionSet::rotated(const Eigen::Matrix3d& rotation) const {
  std::vector<Vec> dirs;
  dirs.reserve(size());
  for (const auto& u : directions_) {
    Vec r = rotation * u;
    if (n_ == 2) r.z() = 0.0;
    dirs.push_back(r.normalized());
  }
  return {n_, std::move(dirs)};
}

DiscreteMeasure::DiscreteMeasure(DirectionSet dirs, std::vector<double> weights)
    : dirs_(std::move(dirs)), weights_(std::move(weights)), total_(0.0) {
  if (weights_.size() != dirs_.size()) throw DomainError("measure needs one weight per direction");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      std::ostringstream msg;
      msg << "weight " << i << " must be positive (got " << weights_[i] << ")";
      throw DomainError(msg.str());
    }
    total_ += weights_[i];
  }
}

SupportVector::SupportVector(DirectionSet dirs, Eigen::VectorXd h) : dirs_(std::move(dirs)), h_(std::move(h)) {
  if (static_cast<std::size_t>(h_.size()) != dirs_.size()) throw DomainError("support vector needs one h per direction");
  for (Eigen::Index i = 0; i < h_.size(); ++i) {
    if (!(h_[i] > 0.0) || !std::isfinite(h_[i])) {
      std::ostringstream msg;
      msg << "support number " << i << " must be positive (got " << h_[i] << ")";
      throw DomainError(msg.str());
    }
  }
}

// ---------------------------------------------------------------- hulls

namespace {

struct Face {
  std::array<int, 3> v;
  Vec normal;  // unit, outward
  double offset;
  bool alive = true;
};

Face make_face(const std::vector<Vec>& pts, int a, int b, int c) {
  // Orientation in extended precision.
  using LVec = Eigen::Matrix<long double, 3, 1>;
  const LVec pa = pts[a].cast<long double>();
  const LVec nrm = (pts[b].cast<long double>() - pa).cross(pts[c].cast<long double>() - pa);
  const long double len = nrm.norm();
  Face f;
  f.v = {a, b, c};
  f.normal = (nrm / len).cast<double>();
  f.offset = static_cast<double>((nrm / len).dot(pa));
  return f;
}

double plane_distance(const Face& f, const Vec& p) {
  return static_cast<double>(f.normal.cast<long double>().dot(p.cast<long double>()) - static_cast<long double>(f.offset));
}

// Incremental convex hull of 3-D points. Points within eps of a face plane are
// treated as not visible, so points on the hull surface that are not corners
// are dropped. Returns the triangles of the hull with outward orientation.
// Throws UnboundedBodyError if the points are (nearly) coplanar.
std::vector<Face> convex_hull_3d(const std::vector<Vec>& pts, double eps) {
  const int count = static_cast<int>(pts.size());
  // Initial tetrahedron from extreme points.
  int i0 = 0;
  for (int i = 1; i < count; ++i)
    if (pts[i].x() < pts[i0].x()) i0 = i;
  int i1 = i0;
  double best = -1.0;
  for (int i = 0; i < count; ++i) {
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  int i2 = i0;
  best = -1.0;
  const Vec axis = (pts[i1] - pts[i0]).normalized();
  for (int i = 0; i < count; ++i) {
    const Vec w = pts[i] - pts[i0];
    const double d = (w - axis * w.dot(axis)).norm();
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps) throw UnboundedBodyError("directions do not positively span R^3 (collinear dual points)");
  int i3 = i0;
  best = -1.0;
  const Vec plane_n = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  for (int i = 0; i < count; ++i) {
    const double d = std::abs((pts[i] - pts[i0]).dot(plane_n));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) throw UnboundedBodyError("directions do not positively span R^3 (coplanar directions)");

  std::vector<Face> faces;
  const Vec centroid = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  auto add_oriented = [&](int a, int b, int c) {
    Face f = make_face(pts, a, b, c);
    if (plane_distance(f, centroid) > 0.0) f = make_face(pts, a, c, b);
    faces.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  std::map<std::pair<int, int>, int> edge_owner;  // directed edge -> face
  auto register_face = [&](int fi) {
    const auto& v = faces[fi].v;
    for (int k = 0; k < 3; ++k) edge_owner[{v[k], v[(k + 1) % 3]}] = fi;
  };
  for (int fi = 0; fi < 4; ++fi) register_face(fi);

  for (int p = 0; p < count; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
      if (faces[fi].alive && plane_distance(faces[fi], pts[p]) > eps) visible.push_back(fi);
    if (visible.empty()) continue;
    std::vector<char> is_visible(faces.size(), 0);
    for (int fi : visible) is_visible[fi] = 1;
    std::vector<std::pair<int, int>> horizon;
    for (int fi : visible) {
      const auto& v = faces[fi].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k];
        const int b = v[(k + 1) % 3];
        const auto it = edge_owner.find({b, a});
        if (it != edge_owner.end() && !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int fi : visible) {
      faces[fi].alive = false;
      const auto& v = faces[fi].v;
      for (int k = 0; k < 3; ++k) edge_owner.erase({v[k], v[(k + 1) % 3]});
    }
    // Horizon edges are processed in a fixed order for determinism.
    std::sort(horizon.begin(), horizon.end());
    for (const auto& [a, b] : horizon) {
      faces.push_back(make_face(pts, a, b, p));
      register_face(static_cast<int>(faces.size()) - 1);
    }
  }
  std::vector<Face> hull;
  for (const auto& f : faces)
    if (f.alive) hull.push_back(f);
  return hull;
}

double scale_of(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.norm());
  return s;
}

void finalize_facet_3d(Facet& facet, const Vec& normal) {
  Vec centroid = Vec::Zero();
  for (const auto& v : facet.vertices) centroid += v;
  centroid /= static_cast<double>(facet.vertices.size());
  const auto [e1, e2] = plane_frame(normal);
  std::vector<std::pair<double, Vec>> keyed;
  keyed.reserve(facet.vertices.size());
  for (const auto& v : facet.vertices) {
    const Vec w = v - centroid;
    keyed.emplace_back(std::atan2(w.dot(e2), w.dot(e1)), v);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  facet.vertices.clear();
  for (const auto& [angle, v] : keyed) facet.vertices.push_back(v);
  // Recompute the centroid of the ordered loop (same point set) and build the fan.
  facet.area = 0.0;
  facet.fan.clear();
  const std::size_t k = facet.vertices.size();
  for (std::size_t j = 0; j < k; ++j) {
    const Vec& a = facet.vertices[j];
    const Vec& b = facet.vertices[(j + 1) % k];
    facet.fan.push_back({centroid, a, b});
    facet.area += 0.5 * (a - centroid).cross(b - centroid).dot(normal);
  }
}

}  // namespace

// ---------------------------------------------------------------- Wulff shape

const Facet* PolytopeGeometry::facet_for(std::size_t i) const {
  const int idx = facet_index_[i];
  return idx < 0 ? nullptr : &facets_[idx];
}

PolytopeGeometry PolytopeGeometry::scaled(double s) const {
  if (!(s > 0.0)) throw DomainError("scale factor must be positive");
  PolytopeGeometry out(source_.scaled(s));
  out.vertices_ = vertices_;
  for (auto& v : out.vertices_) v *= s;
  out.facets_ = facets_;
  const double area_scale = n() == 2 ? s : s * s;
  for (auto& f : out.facets_) {
    for (auto& v : f.vertices) v *= s;
    for (auto& tri : f.fan)
      for (auto& v : tri) v *= s;
    f.area *= area_scale;
  }
  out.active_ = active_;
  out.facet_index_ = facet_index_;
  out.effective_h_ = effective_h_ * s;
  return out;
}

PolytopeGeometry wulff_shape(const SupportVector& sv) {
  const DirectionSet& dirs = sv.dirs();
  const int n = dirs.n();
  const std::size_t count = dirs.size();
  std::vector<Vec> dual(count);
  for (std::size_t i = 0; i < count; ++i) dual[i] = dirs[i] / sv[i];
  const double scale = scale_of(dual);
  const double eps = 1e-11 * scale;

  PolytopeGeometry body(sv);
  body.active_.assign(count, false);
  body.facet_index_.assign(count, -1);

  if (n == 2) {
    // Monotone chain on the dual points, collinear points dropped.
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dual[a].x() < dual[b].x() || (dual[a].x() == dual[b].x() && dual[a].y() < dual[b].y());
    });
    auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
      using L = long double;
      const L ax = L(dual[a].x()) - dual[o].x(), ay = L(dual[a].y()) - dual[o].y();
      const L bx = L(dual[b].x()) - dual[o].x(), by = L(dual[b].y()) - dual[o].y();
      const L len = std::sqrt(ax * ax + ay * ay);
      return static_cast<double>((ax * by - ay * bx) / (len > 0 ? len : 1));
    };
    std::vector<std::size_t> hull;
    for (int pass = 0; pass < 2; ++pass) {
      const std::size_t start = hull.size();
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = pass == 0 ? order[k] : order[count - 1 - k];
        while (hull.size() >= start + 2 && turn(hull[hull.size() - 2], hull.back(), idx) <= eps) hull.pop_back();
        hull.push_back(idx);
      }
      hull.pop_back();
    }
    const std::size_t hn = hull.size();
    if (hn < 3) throw UnboundedBodyError("directions do not positively span R^2");
    for (std::size_t k = 0; k < hn; ++k) {
      const Vec& a = dual[hull[k]];
      const Vec& b = dual[hull[(k + 1) % hn]];
      // Origin must be strictly left of every counter-clockwise hull edge.
      if (cross2(b - a, -a) / (b - a).norm() <= eps)
        throw UnboundedBodyError("directions do not positively span R^2");
    }
    // Primal vertex between consecutive active facets a -> b.
    std::vector<Vec> corner(hn);
    for (std::size_t k = 0; k < hn; ++k) {
      const std::size_t a = hull[k];
      const std::size_t b = hull[(k + 1) % hn];
      Eigen::Matrix2d m;
      m << dirs[a].x(), dirs[a].y(), dirs[b].x(), dirs[b].y();
      const Eigen::Vector2d x = m.partialPivLu().solve(Eigen::Vector2d(sv[a], sv[b]));
      corner[k] = Vec(x.x(), x.y(), 0.0);
    }
    // Rotate so vertices start after the facet with the smallest index.
    body.vertices_ = corner;
    std::vector<std::pair<std::size_t, Facet>> found;
    for (std::size_t k = 0; k < hn; ++k) {
      Facet f;
      f.direction = static_cast<int>(hull[k]);
      f.vertices = {corner[(k + hn - 1) % hn], corner[k]};
      f.area = (f.vertices[1] - f.vertices[0]).norm();
      found.emplace_back(hull[k], std::move(f));
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    double max_len = 0.0;
    for (const auto& [idx, f] : found) max_len = std::max(max_len, f.area);
    for (auto& [idx, f] : found) {
      if (f.area <= 1e-14 * max_len) continue;
      body.active_[idx] = true;
      body.facet_index_[idx] = static_cast<int>(body.facets_.size());
      body.facets_.push_back(std::move(f));
    }
  } else {
    const std::vector<Face> hull = convex_hull_3d(dual, eps);
    for (const auto& f : hull)
      if (f.offset <= eps) throw UnboundedBodyError("directions do not positively span R^3");
    // Each hull triangle is a primal vertex x with u . x = h on its three directions.
    std::vector<Vec> primal;
    std::vector<int> face_vertex(hull.size());
    double vertex_scale = 0.0;
    for (const auto& f : hull) vertex_scale = std::max(vertex_scale, 1.0 / f.offset);
    const double merge_tol = 1e-10 * vertex_scale;
    for (std::size_t fi = 0; fi < hull.size(); ++fi) {
      const Vec x = hull[fi].normal / hull[fi].offset;
      int found = -1;
      for (std::size_t k = 0; k < primal.size(); ++k)
        if ((primal[k] - x).norm() <= merge_tol) {
          found = static_cast<int>(k);
          break;
        }
      if (found < 0) {
        found = static_cast<int>(primal.size());
        primal.push_back(x);
      }
      face_vertex[fi] = found;
    }
    body.vertices_ = primal;
    std::vector<std::vector<int>> incident(count);
    for (std::size_t fi = 0; fi < hull.size(); ++fi)
      for (int v : hull[fi].v) incident[v].push_back(face_vertex[fi]);
    double max_area = 0.0;
    std::vector<Facet> candidates(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto& ids = incident[i];
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      if (ids.size() < 3) continue;
      Facet& f = candidates[i];
      f.direction = static_cast<int>(i);
      for (int id : ids) f.vertices.push_back(primal[id]);
      finalize_facet_3d(f, dirs[i]);
      max_area = std::max(max_area, f.area);
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (candidates[i].direction < 0 || candidates[i].area <= 1e-14 * max_area) continue;
      body.active_[i] = true;
      body.facet_index_[i] = static_cast<int>(body.facets_.size());
      body.facets_.push_back(std::move(candidates[i]));
    }
  }

  body.effective_h_.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    if (body.active_[i]) {
      body.effective_h_[static_cast<Eigen::Index>(i)] = sv[i];
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : body.vertices_) best = std::max(best, x.dot(dirs[i]));
    body.effective_h_[static_cast<Eigen::Index>(i)] = std::min(best, sv[i]);
  }
  return body;
}

double support_function(const PolytopeGeometry& body, const Vec& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : body.vertices()) best = std::max(best, x.dot(v));
  return best;
}

// ---------------------------------------------------------------- rays

namespace {

struct RayHit {
  std::size_t best;
  double best_value;
  double second_value;
};

RayHit cast_ray(const SupportVector& sv, const Vec& u) {
  RayHit hit{0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const double c = u.dot(sv.dirs()[i]);
    if (c <= 0.0) continue;
    const double t = sv[i] / c;
    if (t < hit.best_value) {
      hit.second_value = hit.best_value;
      hit.best_value = t;
      hit.best = i;
    } else if (t < hit.second_value) {
      hit.second_value = t;
    }
  }
  if (std::isinf(hit.best_value)) throw UnboundedBodyError("ray escapes to infinity; directions do not positively span");
  return hit;
}

}  // namespace

double radial_function(const SupportVector& sv, const Vec& u) { return cast_ray(sv, u).best_value; }

std::size_t ray_facet(const SupportVector& sv, const Vec& u) {
  const RayHit hit = cast_ray(sv, u);
  if (hit.second_value - hit.best_value <= 1e-12 * hit.best_value) {
    std::ostringstream msg;
    msg << "ray hits a lower-dimensional face (facet " << hit.best << " ties within 1e-12)";
    throw TieError(msg.str());
  }
  return hit.best;
}

Vec ray_normal(const SupportVector& sv, const Vec& u) { return sv.dirs()[ray_facet(sv, u)]; }

// ---------------------------------------------------------------- hemisphere

std::optional<Vec> hemisphere_witness(const DirectionSet& dirs) {
  constexpr double tol = 1e-12;
  const std::size_t count = dirs.size();
  if (dirs.n() == 2) {
    std::vector<double> angles(count);
    for (std::size_t i = 0; i < count; ++i) angles[i] = std::atan2(dirs[i].y(), dirs[i].x());
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i < count; ++i) {
      const double from = angles[i];
      const double to = i + 1 < count ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi;
      if (to - from >= std::numbers::pi - tol) {
        // Everything lies on the arc [to, from + 2 pi]; its midpoint is a witness.
        const double mid = 0.5 * (to + from + 2.0 * std::numbers::pi);
        return Vec(std::cos(mid), std::sin(mid), 0.0);
      }
    }
    return std::nullopt;
  }
  // A nonzero cone {v : u_i . v >= 0} has an extreme ray (or a lineality
  // direction) parallel to u_i x u_j for some pair.
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const Vec c = dirs[i].cross(dirs[j]);
      const double len = c.norm();
      if (len < 1e-9) continue;
      for (double sign : {1.0, -1.0}) {
        const Vec v = sign * c / len;
        bool ok = true;
        for (std::size_t k = 0; k < count && ok; ++k) ok = dirs[k].dot(v) >= -tol;
        if (ok) return v;
      }
    }
  }
  return std::nullopt;
}

bool positively_spanning(const DirectionSet& dirs) { return !hemisphere_witness(dirs).has_value(); }

bool hemisphere_check(const DiscreteMeasure& mu) { return positively_spanning(mu.dirs()); }

// ---------------------------------------------------------------- radii

namespace {

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

}  // namespace

Radii radii(const PolytopeGeometry& body) {
  Radii r{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& x : body.vertices()) r.outer = std::max(r.outer, x.norm());
  const Vec origin = Vec::Zero();
  for (const auto& f : body.facets()) {
    const Vec& u = body.source().dirs()[f.direction];
    const double h = body.source()[f.direction];
    double d;
    if (body.n() == 2) {
      d = point_segment_distance(origin, f.vertices[0], f.vertices[1]);
    } else {
      const Vec foot = h * u;
      bool inside = true;
      const std::size_t k = f.vertices.size();
      for (std::size_t j = 0; j < k && inside; ++j)
        inside = (f.vertices[(j + 1) % k] - f.vertices[j]).cross(foot - f.vertices[j]).dot(u) >= 0.0;
      if (inside) {
        d = h;
      } else {
        d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j)
          d = std::min(d, point_segment_distance(origin, f.vertices[j], f.vertices[(j + 1) % k]));
      }
    }
    r.inner = std::min(r.inner, d);
  }
  return r;
}

// ---------------------------------------------------------------- Hausdorff

std::vector<Vec> fibonacci_sphere(int count) {
  std::vector<Vec> pts;
  pts.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * i;
    pts.emplace_back(rad * std::cos(t), rad * std::sin(t), z);
  }
  return pts;
}

double hausdorff_distance(const SupportVector& a, const SupportVector& b) {
  if (a.dirs().n() != b.dirs().n() || a.size() != b.size()) throw DomainError("bodies must share a direction set");
  const PolytopeGeometry pa = wulff_shape(a);
  const PolytopeGeometry pb = wulff_shape(b);
  std::vector<Vec> probes;
  if (a.dirs().n() == 2) {
    constexpr int kSamples = 8192;
    for (int i = 0; i < kSamples; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kSamples;
      probes.emplace_back(std::cos(t), std::sin(t), 0.0);
    }
  } else {
    probes = fibonacci_sphere(20000);
  }
  for (const auto& u : a.dirs().all()) probes.push_back(u);
  for (const auto* body : {&pa, &pb})
    for (const auto& x : body->vertices())
      if (x.norm() > 0.0) probes.push_back(x.normalized());
  double dist = 0.0;
  for (const auto& v : probes) dist = std::max(dist, std::abs(support_function(pa, v) - support_function(pb, v)));
  return dist;
}

SupportVector combine_lp(const SupportVector& a_body, const SupportVector& b_body, double a, double b, double p) {
  if (a_body.size() != b_body.size()) throw DomainError("bodies must share a direction set");
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("combination coefficients must be non-negative");
  const auto& ha = a_body.h().array();
  const auto& hb = b_body.h().array();
  Eigen::VectorXd h;
  if (p == 0.0)
    h = (ha.pow(a) * hb.pow(b)).matrix();
  else
    h = (a * ha.pow(p) + b * hb.pow(p)).pow(1.0 / p).matrix();
  return a_body.with_h(std::move(h));
}

}  // namespace minklog
