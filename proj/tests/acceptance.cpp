// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria, so ctest reports any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "minklog/errors.hpp"
#include "minklog/measures.hpp"
#include "minklog/random.hpp"
#include "minklog/solver.hpp"
#include "oracles.hpp"

using namespace minklog;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

QuadratureSpec tight(int n) {
  QuadratureSpec q = QuadratureSpec::defaults_for(n);
  q.target_rel_tol = n == 2 ? 1e-13 : 1e-11;
  q.target_abs_tol = 1e-16;
  q.max_subdivisions = 20000;
  return q;
}

// Random body with every facet active and each facet's share of the cone
// measure at least min_share. A facet below the residual bound is not pinned
// by that bound at all (it can vanish without the residual noticing), so
// recovery is only defined when min_share >= the residual tolerance.
SupportVector random_full_body(int n, int count, std::mt19937_64& rng, const GGParams& params, double kappa0,
                               double min_share) {
  const auto quad = QuadratureSpec::defaults_for(n);
  for (;;) {
    const SupportVector raw = oracle::random_body(n, count, rng, 0.6, 1.4);
    const PolytopeGeometry body = wulff_shape(raw);
    std::vector<Vec> kept;
    std::vector<double> h;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (body.is_active(i)) {
        kept.push_back(raw.dirs()[i]);
        h.push_back(raw[i]);
      }
    const SupportVector trimmed(DirectionSet(n, kept), Eigen::Map<Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size())));
    const double s = rescale_to_constraint(trimmed, params, kappa0, quad);
    const PolytopeGeometry scaled = wulff_shape(trimmed.scaled(s));
    bool ok = true;
    for (std::size_t i = 0; i < trimmed.size(); ++i) ok = ok && scaled.is_active(i);
    if (!ok) continue;
    const MeasureVector g = gg_cone_measure(scaled, params, quad);
    for (double v : g.values) ok = ok && v >= min_share * g.total;
    if (ok) return trimmed.scaled(s);
  }
}

// ---------------------------------------------------------------- criteria

Outcome gaussian_specialization() {
  Outcome out;
  const GGParams gauss(0.0, 2.0, 2);
  const auto quad = QuadratureSpec::defaults_for(2);
  const double side = 2.0 * oracle::normal_cdf(1.0) - 1.0;
  const double square_volume = side * side;
  const double square_edge = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi) * side;

  auto t0 = Clock::now();
  const SupportVector gon(DirectionSet::regular_polygon(256), Eigen::VectorXd::Ones(256));
  const double disc = gg_volume(wulff_shape(gon), gauss, quad);
  out.require(std::abs(disc - 0.39346934) <= 1e-4 && seconds_since(t0) < 1.0, "256-gon " + fmt("%.10f", disc));

  t0 = Clock::now();
  const PolytopeGeometry sq = wulff_shape(SupportVector(DirectionSet::regular_polygon(4), Eigen::VectorXd::Ones(4)));
  const double vol = gg_volume(sq, gauss, quad);
  out.require(std::abs(vol - square_volume) <= 1e-8 && seconds_since(t0) < 1.0, "square volume " + fmt("%.12f", vol));

  t0 = Clock::now();
  const MeasureVector s = gg_surface_measure(sq, gauss, quad);
  double worst = 0.0;
  for (double v : s.values) worst = std::max(worst, std::abs(v - square_edge));
  out.require(worst <= 1e-8 && seconds_since(t0) < 1.0, "square edge error " + fmt("%.3g", worst));
  if (out.pass)
    out.detail = "disc " + fmt("%.8f", disc) + ", square " + fmt("%.12f", vol) + " (closed form " +
                 fmt("%.12f", square_volume) + "), edge err " + fmt("%.1e", worst);
  return out;
}

Outcome normalization() {
  Outcome out;
  const auto grid = oracle::parameter_grid();
  double worst_mass = 0.0;
  int beyond3 = 0;
  double worst_z = 0.0;
  std::uint64_t seed = 1;
  for (const auto& params : grid) {
    const double total = params.q() * unit_sphere_area(params.n()) *
                         radial_cumulative(params, support_radius(params));
    worst_mass = std::max(worst_mass, std::abs(total - 1.0));
    // Ball holding all but 1e-9 of the mass (the support ball when b > 0).
    const double radius = oracle::large_radius(params);
    const auto est = oracle::mc_ball_mass(params, radius, 1000000, seed++);
    const double z = (est.value - 1.0) / est.stderr_;
    beyond3 += std::abs(z) > 3.0;
    worst_z = std::max(worst_z, std::abs(z));
  }
  const int allowed = oracle::allowed_exceedances(static_cast<int>(grid.size()));
  out.require(worst_mass <= 1e-10, "closed-form mass error " + fmt("%.3g", worst_mass));
  out.require(beyond3 <= allowed && worst_z < 5.0,
              std::to_string(beyond3) + " MC checks beyond 3 sigma, worst |z| " + fmt("%.2f", worst_z));
  if (out.pass)
    out.detail = std::to_string(grid.size()) + " parameter sets, mass err " + fmt("%.1e", worst_mass) +
                 ", MC worst |z| " + fmt("%.2f", worst_z) + " (" + std::to_string(beyond3) + " beyond 3 sigma, " +
                 std::to_string(allowed) + " allowed)";
  return out;
}

Outcome gradient_identity() {
  Outcome out;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  const auto grid = oracle::parameter_grid();
  double worst[2] = {0.0, 0.0};
  double worst_log[2] = {0.0, 0.0};
  for (int n : {2, 3}) {
    const auto quad = tight(n);
    const double tol = n == 2 ? 1e-4 : 1e-3;
    std::vector<GGParams> mine;
    for (const auto& p : grid)
      if (p.n() == n) mine.push_back(p);
    for (int k = 0; k < 10; ++k) {
      const GGParams& params = mine[static_cast<std::size_t>(k) % mine.size()];
      // Source h (not effective_h) keeps the difference quotient free of the
      // one-sided term from inactive planes touching the body.
      const SupportVector sv = oracle::random_body(n, n == 2 ? 8 : 14, rng);
      const PolytopeGeometry body = wulff_shape(sv);
      const Eigen::VectorXd grad = volume_gradient(body, params, quad);
      auto volume = [&](const Eigen::VectorXd& h) { return gg_volume(wulff_shape(sv.with_h(h)), params, quad); };
      for (std::size_t i = 0; i < sv.size(); ++i) {
        if (!body.is_active(i)) continue;
        const auto idx = static_cast<Eigen::Index>(i);
        const double fd = oracle::central_difference(
            [&](double t) {
              Eigen::VectorXd h = sv.h();
              h[idx] += t;
              return volume(h);
            },
            0.0, 1e-5);
        const double rel = std::abs(fd - grad[idx]) / std::abs(grad[idx]);
        worst[n - 2] = std::max(worst[n - 2], rel);
      }
      Eigen::VectorXd f(static_cast<Eigen::Index>(sv.size()));
      for (auto& x : f) x = normal(rng);
      const MeasureVector g = gg_cone_measure(body, params, quad);
      double predicted = 0.0;
      for (Eigen::Index i = 0; i < f.size(); ++i) predicted += f[i] * g.values[static_cast<std::size_t>(i)];
      const double fd = oracle::central_difference(
          [&](double t) { return volume((sv.h().array() * (t * f.array()).exp()).matrix()); }, 0.0, 1e-5);
      worst_log[n - 2] = std::max(worst_log[n - 2], std::abs(fd - predicted) / std::abs(predicted));
    }
    out.require(worst[n - 2] <= tol, "n=" + std::to_string(n) + " gradient rel err " + fmt("%.3g", worst[n - 2]));
    out.require(worst_log[n - 2] <= tol,
                "n=" + std::to_string(n) + " log-variational rel err " + fmt("%.3g", worst_log[n - 2]));
  }
  if (out.pass)
    out.detail = "max rel err: gradient " + fmt("%.1e", worst[0]) + " (2-D) " + fmt("%.1e", worst[1]) +
                 " (3-D); log-variational " + fmt("%.1e", worst_log[0]) + " (2-D) " + fmt("%.1e", worst_log[1]) +
                 " (3-D)";
  return out;
}

Outcome symmetric_solve() {
  Outcome out;
  const GGParams gauss(0.0, 2.0, 2);
  const DirectionSet dirs = DirectionSet::regular_polygon(12);
  const SolveReport r = solve(DiscreteMeasure(dirs, std::vector<double>(12, 1.0)), gauss, SolveConfig::defaults_for(2));
  const double level = oracle::regular_gon_level(12, gauss, 0.8);
  const double dev = (r.h_star.h().array() - level).abs().maxCoeff();
  out.require(r.status == SolveStatus::converged, "status " + to_string(r.status));
  out.require(dev <= 1e-8, "support deviation " + fmt("%.3g", dev));
  out.require(r.el_residual < 1e-8, "residual " + fmt("%.3g", r.el_residual));
  if (out.pass)
    out.detail = "h* = " + fmt("%.12f", level) + ", deviation " + fmt("%.1e", dev) + ", residual " +
                 fmt("%.1e", r.el_residual);
  return out;
}

Outcome self_consistency() {
  Outcome out;
  std::mt19937_64 rng(555);
  const auto grid = oracle::parameter_grid();
  double worst_res[2] = {0.0, 0.0};
  double worst_dist[2] = {0.0, 0.0};
  const double residual_bound[2] = {1e-8, 1e-4};
  const double distance_bound[2] = {1e-5, 1e-3};
  double smallest_share[2] = {1.0, 1.0};
  for (int n : {2, 3}) {
    std::vector<GGParams> mine;
    for (const auto& p : grid)
      if (p.n() == n) mine.push_back(p);
    std::uniform_int_distribution<int> count(n == 2 ? 5 : 8, n == 2 ? 30 : 40);
    const SolveConfig cfg = SolveConfig::defaults_for(n);
    for (int k = 0; k < 20; ++k) {
      const GGParams& params = mine[static_cast<std::size_t>(k) % mine.size()];
      const SupportVector target = random_full_body(n, count(rng), rng, params, cfg.kappa0, residual_bound[n - 2]);
      const MeasureVector g = gg_cone_measure(wulff_shape(target), params, cfg.quad);
      for (double v : g.values) smallest_share[n - 2] = std::min(smallest_share[n - 2], v / g.total);
      const SolveReport r = solve(DiscreteMeasure(target.dirs(), g.values), params, cfg);
      const double dist = hausdorff_distance(r.h_star, target);
      worst_res[n - 2] = std::max(worst_res[n - 2], r.el_residual);
      worst_dist[n - 2] = std::max(worst_dist[n - 2], dist);
      out.require(r.status == SolveStatus::converged, "n=" + std::to_string(n) + " body " + std::to_string(k) +
                                                          " status " + to_string(r.status));
    }
  }
  out.require(worst_res[0] <= residual_bound[0] && worst_dist[0] <= distance_bound[0],
              "2-D residual " + fmt("%.3g", worst_res[0]) + " distance " + fmt("%.3g", worst_dist[0]));
  out.require(worst_res[1] <= residual_bound[1] && worst_dist[1] <= distance_bound[1],
              "3-D residual " + fmt("%.3g", worst_res[1]) + " distance " + fmt("%.3g", worst_dist[1]));
  if (out.pass)
    out.detail = "worst residual/distance: 2-D " + fmt("%.1e", worst_res[0]) + "/" + fmt("%.1e", worst_dist[0]) +
                 ", 3-D " + fmt("%.1e", worst_res[1]) + "/" + fmt("%.1e", worst_dist[1]) +
                 "; smallest facet share " + fmt("%.1e", smallest_share[0]) + " / " + fmt("%.1e", smallest_share[1]);
  return out;
}

Outcome random_measures() {
  Outcome out;
  const auto grid = oracle::parameter_grid();
  int runs = 0;
  double worst_gamma = 0.0;
  double min_h = 1e300;
  for (int n : {2, 3}) {
    std::vector<GGParams> mine;
    for (const auto& p : grid)
      if (p.n() == n) mine.push_back(p);
    const SolveConfig cfg = SolveConfig::defaults_for(n);
    for (int k = 0; k < 20; ++k) {
      const GGParams& params = mine[static_cast<std::size_t>(k) % mine.size()];
      // Same generator as gen-measure: counter draws, rejection on spanning.
      const CounterRng pick(77, static_cast<std::uint64_t>(100 * n + k));
      const int count = (n == 2 ? 6 : 8) + static_cast<int>(pick.uniform(0) * (n == 2 ? 20 : 25));
      std::mt19937_64 rng(pick.bits(1));
      const DirectionSet dirs = oracle::random_body(n, count, rng).dirs();
      std::vector<double> w;
      for (int i = 0; i < count; ++i) w.push_back(0.2 + 2.8 * pick.uniform(10 + static_cast<std::uint64_t>(i)));
      const SolveReport r = solve(DiscreteMeasure(dirs, w), params, cfg);
      ++runs;
      const std::string tag = "n=" + std::to_string(n) + " run " + std::to_string(k) + " (b=" +
                              fmt("%g", params.b()) + ", m=" + fmt("%g", params.m()) + ")";
      out.require(r.status == SolveStatus::converged && r.el_residual <= cfg.el_tol,
                  tag + ": " + to_string(r.status) + ", residual " + fmt("%.3g", r.el_residual));
      for (std::size_t j = 0; j < r.trace.size(); ++j) {
        const TraceEntry& e = r.trace[j];
        worst_gamma = std::max(worst_gamma, std::abs(e.gamma - cfg.kappa0));
        min_h = std::min(min_h, e.min_h);
        out.require(std::abs(e.gamma - cfg.kappa0) <= 1e-10, tag + ": constraint drift");
        out.require(e.bound_holds, tag + ": entropy bound fails at iterate " + std::to_string(j));
        out.require(e.min_h >= 1e-6, tag + ": support floor");
        if (j > 0) out.require(e.entropy < r.trace[j - 1].entropy, tag + ": entropy did not decrease");
      }
    }
  }
  if (out.pass)
    out.detail = std::to_string(runs) + " solves converged; max |gamma - kappa0| " + fmt("%.1e", worst_gamma) +
                 ", min h " + fmt("%.3g", min_h);
  return out;
}

Outcome half_space() {
  Outcome out;
  double lowest = 1.0;
  double highest = 0.0;
  for (const auto& params : oracle::parameter_grid()) {
    const int n = params.n();
    const auto quad = QuadratureSpec::defaults_for(n);
    const double radius = oracle::large_radius(params);
    double previous = 0.0;
    for (double c : {1e-3, 0.1, 0.5, 1.0}) {
      const double v = gg_volume(wulff_shape(oracle::slab_body(n, c, radius, n == 2 ? 256 : 400)), params, quad);
      const std::string tag = "n=" + std::to_string(n) + " b=" + fmt("%g", params.b()) + " m=" + fmt("%g", params.m());
      if (c == 1e-3) {
        lowest = std::min(lowest, v);
        highest = std::max(highest, v);
        out.require(v > 0.5 && v < 0.52, tag + ": slab volume " + fmt("%.6f", v));
      }
      out.require(v > previous, tag + ": not monotone in c");
      previous = v;
    }
  }
  if (out.pass) out.detail = "c = 1e-3 volumes in [" + fmt("%.6f", lowest) + ", " + fmt("%.6f", highest) + "]";
  return out;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "minklog");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome preconditions(const fs::path& work) {
  Outcome out;
  const std::string half = (work / "half.json").string();
  std::ofstream(half) << R"({"n": 3, "directions": [[1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],)"
                      << R"( "weights": [1, 1, 1, 1, 1]})";
  const CliResult h = cli({"solve", half});
  out.require(h.code == 1 && h.err.find("hemisphere") != std::string::npos, "hemisphere measure: exit " + std::to_string(h.code));
  bool threw = false;
  try {
    solve(DiscreteMeasure(DirectionSet(3, {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, -1, 0), Vec(0, 0, 1), Vec(0, 0, -1)}),
                          {1, 1, 1, 1, 1}),
          GGParams(0.0, 2.0, 3), SolveConfig::defaults_for(3));
  } catch (const HemisphereError&) {
    threw = true;
  }
  out.require(threw, "library does not raise HemisphereError");

  const std::string m = (work / "m.json").string();
  out.require(cli({"gen-measure", "--n", "2", "-N", "8", "--seed", "3", "--out", m}).code == 0, "gen-measure");
  int rejected = 0;
  int cases = 0;
  for (const auto& [b, mm] : std::vector<std::pair<double, double>>{{0.5, 2.0}, {0.34, 1.0}, {0.7, 4.0}, {0.9, 2.0}}) {
    ++cases;
    rejected += cli({"solve", m, "--b", fmt("%g", b), "--m", fmt("%g", mm)}).code == 1;
  }
  out.require(rejected == cases, "b >= m/(n+m) accepted");
  threw = false;
  try {
    GGParams(0.5, 2.0, 2).require_variational();
  } catch (const VariationalDomainError&) {
    threw = true;
  }
  out.require(threw, "library does not raise VariationalDomainError");
  for (const char* k : {"0.75", "0.5", "1", "1.2"})
    out.require(cli({"solve", m, "--kappa0", k}).code == 1, std::string("kappa0 ") + k + " accepted");
  out.require(cli({"solve", m, "--kappa0", "0.6", "--allow-small-kappa"}).code == 0, "override rejected");
  if (out.pass) out.detail = "hemisphere, variational window and kappa0 window all rejected with exit 1; override works";
  return out;
}

Outcome determinism(const fs::path& work) {
  Outcome out;
  auto p = [&](const char* name) { return (work / name).string(); };
  std::ofstream(p("sq.json")) << R"({"n": 2, "directions": [[1, 0], [0, 1], [-1, 0], [0, -1]], "h": [1, 1, 2, 1]})";
  std::vector<std::string> outputs[2];
  int idx = 0;
  for (const char* threads : {"1", "4"}) {
    setenv("MINKLOG_THREADS", threads, 1);
    for (int rep = 0; rep < 2; ++rep) {
      auto& o = outputs[idx];
      o.push_back(cli({"gen-measure", "--n", "3", "-N", "12", "--seed", "11"}).out);
      cli({"gen-measure", "--n", "3", "-N", "12", "--seed", "11", "--out", p("m3.json")});
      cli({"gen-measure", "--n", "2", "-N", "9", "--seed", "11", "--out", p("m2.json")});
      cli({"solve", p("m3.json"), "--b", "-0.25", "--out", p("r3.json")});
      o.push_back(slurp(p("r3.json")));
      cli({"solve", p("m2.json"), "--b", "0.1", "--m", "4", "--out", p("r2.json")});
      o.push_back(slurp(p("r2.json")));
      o.push_back(cli({"verify", p("r3.json")}).out);
      o.push_back(cli({"compute", p("sq.json"), "--p", "2", "--b", "0.15"}).out);
      o.push_back(cli({"oracle", p("sq.json"), "--samples", "100000", "--seed", "9"}).out);
      o.push_back(cli({"plot", p("r2.json")}).out);
    }
    ++idx;
  }
  unsetenv("MINKLOG_THREADS");
  const std::vector<std::string> names{"gen-measure", "solve (3-D)", "solve (2-D)", "verify", "compute", "oracle", "plot"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string& ref = outputs[0][k];
    out.require(!ref.empty(), names[k] + " produced no output");
    out.require(outputs[0][k + names.size()] == ref, names[k] + " differs between runs");
    out.require(outputs[1][k] == ref && outputs[1][k + names.size()] == ref, names[k] + " depends on MINKLOG_THREADS");
  }
  if (out.pass) out.detail = "7 subcommands byte-identical across 2 runs x MINKLOG_THREADS in {1, 4}";
  return out;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "minklog_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Gaussian specialization", 3.0, gaussian_specialization},
      {2, "normalization", 60.0, normalization},
      {3, "gradient identity", 120.0, gradient_identity},
      {4, "symmetric solve", 10.0, symmetric_solve},
      {5, "self-consistency solve", 600.0, self_consistency},
      {6, "random-measure solves", 900.0, random_measures},
      {7, "half-space identity", 30.0, half_space},
      {8, "precondition enforcement", 60.0, [&] { return preconditions(work); }},
      {9, "determinism", 120.0, [&] { return determinism(work); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > c.budget) {
      o.pass = false;
      o.detail += " [over time budget " + fmt("%.0f", c.budget) + " s]";
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                elapsed);
    std::fflush(stdout);
  }
  fs::remove_all(work);
  return failed;
}
