#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minklog/density.hpp"
#include "minklog/errors.hpp"
#include "minklog/geometry.hpp"
#include "minklog/measures.hpp"
#include "minklog/solver.hpp"

namespace py = pybind11;
using namespace minklog;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DirectionSet to_dirs(const RowMatrix& rows) {
  const auto n = static_cast<int>(rows.cols());
  if (n != 2 && n != 3) throw DomainError("directions must be an (N, 2) or (N, 3) array");
  std::vector<Vec> dirs;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) dirs.emplace_back(rows(i, 0), rows(i, 1), n == 3 ? rows(i, 2) : 0.0);
  return DirectionSet(n, std::move(dirs));
}

RowMatrix to_rows(const std::vector<Vec>& points, int n) {
  RowMatrix out(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int k = 0; k < n; ++k) out(static_cast<Eigen::Index>(i), k) = points[i][k];
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

QuadratureSpec quad_for(int n, std::optional<double> rel_tol) {
  QuadratureSpec q = QuadratureSpec::defaults_for(n);
  if (rel_tol) q.target_rel_tol = *rel_tol;
  return q;
}

py::dict body_dict(const PolytopeGeometry& body) {
  py::dict d;
  d["vertices"] = to_rows(body.vertices(), body.n());
  d["effective_h"] = body.effective_h();
  d["active"] = body.active();
  const Radii r = radii(body);
  d["inner_radius"] = r.inner;
  d["outer_radius"] = r.outer;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete generalized Gaussian log-Minkowski problem";
  m.attr("__version__") = MINKLOG_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<VariationalDomainError>(m, "VariationalDomainError", domain.ptr());
  py::register_exception<UnboundedBodyError>(m, "UnboundedBodyError", base.ptr());
  py::register_exception<TieError>(m, "TieError", base.ptr());
  py::register_exception<ToleranceError>(m, "ToleranceError", base.ptr());
  py::register_exception<HemisphereError>(m, "HemisphereError", base.ptr());

  py::class_<GGParams>(m, "GGParams")
      .def(py::init<double, double, int>(), py::arg("b"), py::arg("m"), py::arg("n"))
      .def_property_readonly("b", &GGParams::b)
      .def_property_readonly("m", &GGParams::m)
      .def_property_readonly("n", &GGParams::n)
      .def_property_readonly("q", &GGParams::q)
      .def_property_readonly("variational_ok", &GGParams::variational_ok)
      .def("__repr__", [](const GGParams& p) {
        return "GGParams(b=" + std::to_string(p.b()) + ", m=" + std::to_string(p.m()) + ", n=" + std::to_string(p.n()) +
               ")";
      });

  m.def(
      "density",
      [](const GGParams& p, const Eigen::VectorXd& x) {
        return density(p, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
      },
      py::arg("params"), py::arg("x"));
  m.def("density_at_radius", &density_at_radius, py::arg("params"), py::arg("r"));
  m.def("radial_cumulative", &radial_cumulative, py::arg("params"), py::arg("s"));
  m.def("support_radius", &support_radius, py::arg("params"));
  m.def("ball_volume", &ball_volume, py::arg("r"), py::arg("params"));
  m.def("ball_radius_for_volume", &ball_radius_for_volume, py::arg("kappa"), py::arg("params"));

  m.def(
      "hemisphere_check",
      [](const RowMatrix& dirs) { return positively_spanning(to_dirs(dirs)); }, py::arg("directions"),
      "True iff the directions are not contained in any closed hemisphere.");

  m.def(
      "wulff_shape", [](const RowMatrix& dirs, const Eigen::VectorXd& h) { return body_dict(wulff_shape({to_dirs(dirs), h})); },
      py::arg("directions"), py::arg("h"));

  m.def(
      "measures",
      [](const RowMatrix& dirs, const Eigen::VectorXd& h, const GGParams& p, std::optional<double> rel_tol) {
        const PolytopeGeometry body = wulff_shape({to_dirs(dirs), h});
        const BodyMeasures bm = measure_body(body, p, quad_for(body.n(), rel_tol));
        py::dict d = body_dict(body);
        d["gamma"] = bm.volume;
        d["surface"] = to_vector(bm.surface.values);
        d["cone"] = to_vector(bm.cone.values);
        return d;
      },
      py::arg("directions"), py::arg("h"), py::arg("params"), py::arg("rel_tol") = py::none(),
      "Volume, surface measure and cone measure of the Wulff shape of h.");

  m.def(
      "lp_surface_measure",
      [](const RowMatrix& dirs, const Eigen::VectorXd& h, const GGParams& p, double pp) {
        const PolytopeGeometry body = wulff_shape({to_dirs(dirs), h});
        return to_vector(lp_surface_measure(body, p, pp, QuadratureSpec::defaults_for(body.n())).values);
      },
      py::arg("directions"), py::arg("h"), py::arg("params"), py::arg("p"));

  m.def(
      "volume_gradient",
      [](const RowMatrix& dirs, const Eigen::VectorXd& h, const GGParams& p) {
        const PolytopeGeometry body = wulff_shape({to_dirs(dirs), h});
        return Eigen::VectorXd(volume_gradient(body, p, QuadratureSpec::defaults_for(body.n())));
      },
      py::arg("directions"), py::arg("h"), py::arg("params"));

  m.def(
      "euler_lagrange_residual",
      [](const RowMatrix& dirs, const Eigen::VectorXd& h, const std::vector<double>& weights, const GGParams& p) {
        const DirectionSet set = to_dirs(dirs);
        return euler_lagrange_residual({set, h}, {set, weights}, p, QuadratureSpec::defaults_for(set.n()));
      },
      py::arg("directions"), py::arg("h"), py::arg("weights"), py::arg("params"));

  m.def(
      "solve",
      [](const RowMatrix& dirs, const std::vector<double>& weights, const GGParams& p, double kappa0,
         std::optional<double> el_tol, int max_iters, bool allow_small_kappa) {
        const DirectionSet set = to_dirs(dirs);
        SolveConfig cfg = SolveConfig::defaults_for(set.n());
        cfg.kappa0 = kappa0;
        if (el_tol) cfg.el_tol = *el_tol;
        cfg.max_iters = max_iters;
        cfg.allow_small_kappa = allow_small_kappa;
        std::optional<SolveReport> out;
        {
          py::gil_scoped_release release;
          out.emplace(solve({set, weights}, p, cfg));
        }
        const SolveReport& r = *out;
        py::dict d = body_dict(wulff_shape(r.h_star));
        d["h_star"] = r.h_star.h();
        d["gamma"] = r.gamma;
        d["surface"] = to_vector(r.surface.values);
        d["cone"] = to_vector(r.cone.values);
        d["entropy"] = r.entropy;
        d["el_residual"] = r.el_residual;
        d["iterations"] = r.iterations;
        d["status"] = to_string(r.status);
        d["converged"] = r.status == SolveStatus::converged;
        d["diagnostic"] = r.diagnostic;
        py::list trace;
        for (const auto& e : r.trace) {
          py::dict t;
          t["entropy"] = e.entropy;
          t["gamma"] = e.gamma;
          t["residual"] = e.residual;
          t["step"] = e.step;
          t["min_h"] = e.min_h;
          t["outer_radius"] = e.outer_radius;
          t["bound_holds"] = e.bound_holds;
          trace.append(t);
        }
        d["trace"] = trace;
        return d;
      },
      py::arg("directions"), py::arg("weights"), py::arg("params"), py::arg("kappa0") = 0.8,
      py::arg("el_tol") = py::none(), py::arg("max_iters") = 5000, py::arg("allow_small_kappa") = false,
      "Find a body whose normalized cone measure matches weights / sum(weights).");
}
