#include "report_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "minklog/errors.hpp"

namespace minklog::cli {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json(const json& doc, const std::optional<std::filesystem::path>& path, std::ostream& fallback) {
  const std::string text = doc.dump(2) + "\n";
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path->string());
  out << text;
}

DirectionSet parse_directions(const json& doc, std::ostream& warn) {
  const int n = field<int>(doc, "n");
  if (n != 2 && n != 3) throw InputError("n must be 2 or 3");
  const auto rows = field<std::vector<std::vector<double>>>(doc, "directions");
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw InputError("direction " + std::to_string(i) + " is not an n-vector");
    Vec u(rows[i][0], rows[i][1], n == 3 ? rows[i][2] : 0.0);
    const double len = u.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw InputError("direction " + std::to_string(i) + " is zero or not finite");
    if (std::abs(len - 1.0) > 1e-6) warn << "warning: direction " << i << " has length " << len << ", normalized\n";
    dirs.push_back(u / len);
  }
  try {
    return DirectionSet(n, std::move(dirs));
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

DiscreteMeasure parse_measure(const json& doc, std::ostream& warn) {
  DirectionSet dirs = parse_directions(doc, warn);
  const auto weights = field<std::vector<double>>(doc, "weights");
  if (weights.size() != dirs.size()) throw InputError("weights and directions differ in length");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("weights must be positive and finite");
  return {std::move(dirs), weights};
}

SupportVector parse_body(const json& doc, std::ostream& warn) {
  DirectionSet dirs = parse_directions(doc, warn);
  const char* key = doc.contains("h") ? "h" : "h_star";
  const auto h = field<std::vector<double>>(doc, key);
  if (h.size() != dirs.size()) throw InputError(std::string(key) + " and directions differ in length");
  Eigen::VectorXd v(static_cast<Eigen::Index>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i])) throw InputError("support numbers must be positive and finite");
    v[static_cast<Eigen::Index>(i)] = h[i];
  }
  return {std::move(dirs), std::move(v)};
}

json points_json(const std::vector<Vec>& points, int n) {
  json out = json::array();
  for (const auto& p : points) {
    if (n == 2)
      out.push_back({p.x(), p.y()});
    else
      out.push_back({p.x(), p.y(), p.z()});
  }
  return out;
}

json directions_json(const DirectionSet& dirs) {
  return points_json(std::vector<Vec>(dirs.all().begin(), dirs.all().end()), dirs.n());
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json quadrature_json(const QuadratureSpec& q) {
  return {{"abs_tol", q.target_abs_tol},
          {"rel_tol", q.target_rel_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"rule_order", q.facet_rule_order}};
}

QuadratureSpec parse_quadrature(const json& doc, int n) {
  QuadratureSpec q = QuadratureSpec::defaults_for(n);
  if (!doc.contains("quadrature")) return q;
  const json& j = doc.at("quadrature");
  q.target_abs_tol = field<double>(j, "abs_tol");
  q.target_rel_tol = field<double>(j, "rel_tol");
  q.max_subdivisions = field<int>(j, "max_subdivisions");
  q.facet_rule_order = field<int>(j, "rule_order");
  return q;
}

json bound_json(const EntropyBound& b, int n) {
  return {{"lhs", b.lhs},
          {"rhs", b.rhs},
          {"holds", b.holds},
          {"v0", points_json({b.v0}, n)[0]},
          {"alpha0", b.alpha0},
          {"c", b.c},
          {"c_tilde", b.c_tilde}};
}

json trace_json(const std::vector<TraceEntry>& trace) {
  json out = json::array();
  for (const auto& e : trace)
    out.push_back({{"entropy", e.entropy},
                   {"gamma", e.gamma},
                   {"residual", e.residual},
                   {"step", e.step},
                   {"min_h", e.min_h},
                   {"outer_radius", e.outer_radius},
                   {"bound_holds", e.bound_holds}});
  return out;
}

}  // namespace minklog::cli
