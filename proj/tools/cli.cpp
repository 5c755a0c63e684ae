#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "minklog/errors.hpp"
#include "minklog/measures.hpp"
#include "minklog/random.hpp"
#include "minklog/solver.hpp"
#include "plot.hpp"
#include "report_io.hpp"

#ifndef MINKLOG_VERSION
#define MINKLOG_VERSION "0.0.0"
#endif

namespace minklog::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct Options {
  std::string input;
  std::optional<fs::path> out;
  double b = 0.0;
  double m = 2.0;
  double kappa0 = 0.8;
  std::optional<double> el_tol;
  std::optional<double> p;
  int max_iters = 5000;
  bool allow_small_kappa = false;
  bool steepest = false;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t samples = 1000000;
  double fault_bias = 0.0;
  int n = 2;
  int count = 0;
};

GGParams make_params(double b, double m, int n) {
  try {
    return {b, m, n};
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

json measure_block(const DiscreteMeasure& mu) {
  return {{"n", mu.dirs().n()}, {"directions", directions_json(mu.dirs())}, {"weights", mu.weights()}};
}

bool close(double got, double want) { return std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)); }

// ------------------------------------------------------------------ solve

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = read_json(o.input);
  const DiscreteMeasure mu = parse_measure(doc, err);
  const int n = mu.dirs().n();
  const GGParams params = make_params(o.b, o.m, n);
  SolveConfig cfg = SolveConfig::defaults_for(n);
  cfg.kappa0 = o.kappa0;
  if (o.el_tol) cfg.el_tol = *o.el_tol;
  cfg.max_iters = o.max_iters;
  cfg.allow_small_kappa = o.allow_small_kappa;
  cfg.quasi_newton = !o.steepest;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }

  const SolveReport r = solve(mu, params, cfg);
  const PolytopeGeometry body = wulff_shape(r.h_star);

  json report = measure_block(mu);
  if (doc.contains("name")) report["name"] = doc.at("name");
  report["version"] = MINKLOG_VERSION;
  report["b"] = o.b;
  report["m"] = o.m;
  report["kappa0"] = cfg.kappa0;
  report["el_tol"] = cfg.el_tol;
  report["max_iters"] = cfg.max_iters;
  report["allow_small_kappa"] = cfg.allow_small_kappa;
  report["seed"] = o.seed;
  report["quadrature"] = quadrature_json(cfg.quad);
  report["status"] = to_string(r.status);
  report["iterations"] = r.iterations;
  report["diagnostic"] = r.diagnostic;
  report["h_star"] = vector_json(r.h_star.h());
  report["vertices"] = points_json(body.vertices(), n);
  report["surface"] = r.surface.values;
  report["cone"] = r.cone.values;
  report["gamma"] = r.gamma;
  report["entropy"] = r.entropy;
  report["el_residual"] = r.el_residual;
  report["entropy_bound"] = bound_json(r.bound, n);
  report["trace"] = trace_json(r.trace);
  write_json(report, o.out, out);

  if (r.status != SolveStatus::converged) {
    err << "not converged (" << to_string(r.status) << "): " << r.diagnostic << "\n";
    return kNotConverged;
  }
  return kOk;
}

// ------------------------------------------------------------------ compute

int cmd_compute(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = read_json(o.input);
  const SupportVector sv = parse_body(doc, err);
  const int n = sv.dirs().n();
  const GGParams params = make_params(o.b, o.m, n);
  if (o.p && *o.p == 0.0) throw InputError("p = 0 is excluded; the cone measure covers that case");
  const QuadratureSpec quad = QuadratureSpec::defaults_for(n);
  const PolytopeGeometry body = wulff_shape(sv);
  const BodyMeasures m = measure_body(body, params, quad);
  const Radii rad = radii(body);

  json report = {{"version", MINKLOG_VERSION}, {"n", n}, {"b", o.b}, {"m", o.m}};
  report["directions"] = directions_json(sv.dirs());
  report["h"] = vector_json(sv.h());
  report["effective_h"] = vector_json(body.effective_h());
  report["active"] = body.active();
  report["vertices"] = points_json(body.vertices(), n);
  report["quadrature"] = quadrature_json(quad);
  report["gamma"] = m.volume;
  report["surface"] = m.surface.values;
  report["cone"] = m.cone.values;
  if (o.p) report["lp_surface"] = {{"p", *o.p}, {"values", lp_surface_measure(body, params, *o.p, quad).values}};
  report["radii"] = {{"inner", rad.inner}, {"outer", rad.outer}};
  write_json(report, o.out, out);
  return kOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = read_json(o.input);
  const DiscreteMeasure mu = parse_measure(doc, err);
  const int n = mu.dirs().n();
  const auto h = field<std::vector<double>>(doc, "h_star");
  if (h.size() != mu.dirs().size()) throw InputError("h_star and directions differ in length");
  const SupportVector sv = parse_body(doc, err);
  const GGParams params = make_params(field<double>(doc, "b"), field<double>(doc, "m"), n);
  const QuadratureSpec quad = parse_quadrature(doc, n);
  const double el_tol = field<double>(doc, "el_tol");
  const double kappa0 = field<double>(doc, "kappa0");
  const auto stored_cone = field<std::vector<double>>(doc, "cone");
  const auto stored_surface = field<std::vector<double>>(doc, "surface");
  if (stored_cone.size() != h.size() || stored_surface.size() != h.size())
    throw InputError("measure blocks and h_star differ in length");
  if (!doc.contains("entropy_bound")) throw InputError("missing field 'entropy_bound'");
  const json& stored_bound = doc.at("entropy_bound");

  const PolytopeGeometry body = wulff_shape(sv);
  const BodyMeasures m = measure_body(body, params, quad);
  const double residual = euler_lagrange_residual(mu, m.cone);
  const double phi = body_entropy(mu, body);
  const EntropyBound bound = entropy_bound_check(body, mu);

  std::vector<std::string> mismatches;
  auto compare = [&](const std::string& name, double got, double want) {
    if (!close(got, want)) mismatches.push_back(name);
  };
  compare("gamma", m.volume, field<double>(doc, "gamma"));
  compare("entropy", phi, field<double>(doc, "entropy"));
  compare("el_residual", residual, field<double>(doc, "el_residual"));
  for (std::size_t i = 0; i < h.size(); ++i) {
    compare("cone[" + std::to_string(i) + "]", m.cone.values[i], stored_cone[i]);
    compare("surface[" + std::to_string(i) + "]", m.surface.values[i], stored_surface[i]);
  }
  compare("entropy_bound.lhs", bound.lhs, field<double>(stored_bound, "lhs"));
  compare("entropy_bound.rhs", bound.rhs, field<double>(stored_bound, "rhs"));
  if (!bound.holds || !field<bool>(stored_bound, "holds")) mismatches.push_back("entropy_bound.holds");
  if (std::abs(m.volume - kappa0) > 1e-8) mismatches.push_back("gamma vs kappa0");
  if (residual > el_tol) mismatches.push_back("el_residual above el_tol");

  json summary = {{"gamma", m.volume},
                  {"entropy", phi},
                  {"el_residual", residual},
                  {"el_tol", el_tol},
                  {"entropy_bound", bound_json(bound, n)},
                  {"mismatches", mismatches},
                  {"ok", mismatches.empty()}};
  write_json(summary, o.out, out);
  if (!mismatches.empty()) {
    err << "verification failed:";
    for (const auto& f : mismatches) err << " " << f;
    err << "\n";
    return kCheckFailed;
  }
  return kOk;
}

// ------------------------------------------------------------------ oracle

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = read_json(o.input);
  const SupportVector sv = parse_body(doc, err);
  const int n = sv.dirs().n();
  const GGParams params = make_params(o.b, o.m, n);
  McSpec mc;
  mc.samples = o.samples;
  mc.seed = o.seed;
  try {
    mc.validate();
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  const QuadratureSpec quad = QuadratureSpec::defaults_for(n);
  const PolytopeGeometry body = wulff_shape(sv);
  BodyMeasures m = measure_body(body, params, quad);
  if (o.fault_bias != 0.0) {
    // Test hook: pretend the quadrature is off by a relative amount.
    m.volume *= 1.0 + o.fault_bias;
    for (double& v : m.surface.values) v *= 1.0 + o.fault_bias;
  }

  double worst = 0.0;
  auto zscore = [&](double quadrature, const McEstimate& est) {
    double z = 0.0;
    if (est.stderr_ > 0.0)
      z = (quadrature - est.estimate) / est.stderr_;
    else if (quadrature != est.estimate)
      z = std::copysign(1e300, quadrature - est.estimate);
    worst = std::max(worst, std::abs(z));
    return z;
  };
  const McEstimate vol = mc_volume_oracle(body, params, mc);
  json volume = {{"quadrature", m.volume}, {"mc", vol.estimate}, {"stderr", vol.stderr_}, {"z", zscore(m.volume, vol)}};
  json facets = json::array();
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (!body.is_active(i)) continue;
    const McEstimate est = mc_surface_oracle(body, params, i, mc);
    facets.push_back({{"index", i},
                      {"quadrature", m.surface.values[i]},
                      {"mc", est.estimate},
                      {"stderr", est.stderr_},
                      {"z", zscore(m.surface.values[i], est)}});
  }
  const bool passed = worst <= 4.0;
  json report = {{"version", MINKLOG_VERSION}, {"n", n},         {"b", o.b},           {"m", o.m},
                 {"seed", o.seed},             {"samples", o.samples}, {"volume", volume}, {"facets", facets},
                 {"max_abs_z", worst},         {"passed", passed}};
  write_json(report, o.out, out);
  if (!passed) {
    err << "oracle disagreement: max |z| = " << worst << " > 4\n";
    return kCheckFailed;
  }
  return kOk;
}

// ------------------------------------------------------------------ plot

int cmd_plot(const Options& o, std::ostream& out, std::ostream&) {
  const json doc = read_json(o.input);
  if (field<int>(doc, "n") != 2) throw InputError("plotting is limited to n = 2 reports");
  const std::string svg = render_svg(doc);
  if (!o.out) {
    out << svg;
    return kOk;
  }
  std::ofstream file(*o.out, std::ios::binary);
  if (!file) throw InputError("cannot write " + o.out->string());
  file << svg;
  return kOk;
}

// ------------------------------------------------------------------ gen-measure

int cmd_gen_measure(const Options& o, std::ostream& out, std::ostream&) {
  if (o.n != 2 && o.n != 3) throw InputError("n must be 2 or 3");
  if (o.count < o.n + 1) throw InputError("need at least n + 1 directions");
  for (std::uint64_t attempt = 0;; ++attempt) {
    const CounterRng rng(o.seed, attempt);
    std::uint64_t k = 0;
    auto normal = [&] {
      // Box-Muller on counter draws keeps the stream platform independent.
      const double u1 = rng.open_uniform(k++);
      const double u2 = rng.uniform(k++);
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    std::vector<Vec> dirs;
    std::vector<double> weights;
    for (int i = 0; i < o.count; ++i) {
      Vec v(normal(), normal(), o.n == 3 ? normal() : 0.0);
      dirs.push_back(v.normalized());
    }
    for (int i = 0; i < o.count; ++i) weights.push_back(0.5 + 1.5 * rng.uniform(k++));
    try {
      DirectionSet set(o.n, dirs);
      if (!positively_spanning(set)) continue;
      json doc = measure_block(DiscreteMeasure(set, weights));
      doc["seed"] = o.seed;
      doc["version"] = MINKLOG_VERSION;
      write_json(doc, o.out, out);
      return kOk;
    } catch (const DomainError&) {
      // Two draws too close together; resample.
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Discrete generalized Gaussian log-Minkowski solver", "minklog"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MINKLOG_VERSION);

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--b", o.b, "density parameter b")->capture_default_str();
    sub->add_option("--m", o.m, "density parameter m > 0")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default: stdout)"); };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve for a body whose normalized cone measure is mu");
  solve_cmd->add_option("measure", o.input, "measure file")->required();
  add_params(solve_cmd);
  solve_cmd->add_option("--kappa0", o.kappa0, "volume level, in (3/4, 1)")->capture_default_str();
  solve_cmd->add_option("--el-tol", o.el_tol, "Euler-Lagrange residual target (default 1e-8 in 2-D, 1e-5 in 3-D)");
  solve_cmd->add_option("--max-iters", o.max_iters, "iteration budget")->capture_default_str();
  solve_cmd->add_flag("--allow-small-kappa", o.allow_small_kappa,
                      "expert override: accept kappa0 outside (3/4, 1) and skip the support floor check");
  solve_cmd->add_flag("--steepest", o.steepest, "plain projected steepest descent instead of BFGS");
  solve_cmd->add_option("--seed", o.seed, "recorded in the report")->capture_default_str();
  add_out(solve_cmd);

  CLI::App* compute_cmd = app.add_subcommand("compute", "measures of the Wulff shape of a support vector");
  compute_cmd->add_option("body", o.input, "body file (n, directions, h)")->required();
  add_params(compute_cmd);
  compute_cmd->add_option("--p", o.p, "also report the L_p surface measure");
  add_out(compute_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "recompute a solve report and compare");
  verify_cmd->add_option("report", o.input, "solve report")->required();
  add_out(verify_cmd);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Monte Carlo check of the quadrature on one body");
  oracle_cmd->add_option("body", o.input, "body file (n, directions, h)")->required();
  add_params(oracle_cmd);
  oracle_cmd->add_option("--samples", o.samples, "samples per estimate")->capture_default_str();
  oracle_cmd->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  oracle_cmd->add_option("--fault-bias", o.fault_bias)->group("");
  add_out(oracle_cmd);

  CLI::App* plot_cmd = app.add_subcommand("plot", "SVG of a 2-D solve report");
  plot_cmd->add_option("report", o.input, "solve report")->required();
  add_out(plot_cmd);

  CLI::App* gen_cmd = app.add_subcommand("gen-measure", "random non-concentrated measure");
  gen_cmd->add_option("--n", o.n, "dimension (2 or 3)")->required();
  gen_cmd->add_option("-N,--count", o.count, "number of directions")->required();
  gen_cmd->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  add_out(gen_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << MINKLOG_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(o, out, err);
    if (compute_cmd->parsed()) return cmd_compute(o, out, err);
    if (verify_cmd->parsed()) return cmd_verify(o, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(o, out, err);
    if (plot_cmd->parsed()) return cmd_plot(o, out, err);
    if (gen_cmd->parsed()) return cmd_gen_measure(o, out, err);
  } catch (const ToleranceError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    // Domain, hemisphere, unboundedness and tie errors all trace back to the input.
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace minklog::cli
