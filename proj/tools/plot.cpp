#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "report_io.hpp"

namespace minklog::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace

std::string render_svg(const json& report) {
  const auto vertices = field<std::vector<std::vector<double>>>(report, "vertices");
  const auto dirs = field<std::vector<std::vector<double>>>(report, "directions");
  const auto weights = field<std::vector<double>>(report, "weights");
  const auto cone = field<std::vector<double>>(report, "cone");
  if (vertices.empty() || dirs.size() != weights.size() || dirs.size() != cone.size())
    throw InputError("report is missing polygon data");

  double reach = 0.0;
  for (const auto& v : vertices) reach = std::max(reach, std::hypot(v[0], v[1]));
  double w_total = 0.0;
  double g_total = 0.0;
  double top = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    w_total += weights[i];
    g_total += cone[i];
  }
  for (std::size_t i = 0; i < dirs.size(); ++i)
    top = std::max({top, weights[i] / w_total, cone[i] / g_total});

  const double size = 480.0;
  const double mid = size / 2.0;
  const double scale = 0.45 * size / (1.5 * reach);
  auto px = [&](double x) { return num(mid + scale * x); };
  auto py = [&](double y) { return num(mid - scale * y); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * size << "\" height=\"" << size
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<polygon fill=\"#dde8f4\" stroke=\"#234\" stroke-width=\"1.5\" points=\"";
  for (const auto& v : vertices) svg << px(v[0]) << "," << py(v[1]) << " ";
  svg << "\"/>\n";
  // Rays start on the polygon boundary so both families stay visible.
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double ux = dirs[i][0];
    const double uy = dirs[i][1];
    double foot = 0.0;
    for (const auto& v : vertices) foot = std::max(foot, v[0] * ux + v[1] * uy);
    const double want = 0.5 * reach * (weights[i] / w_total) / top;
    const double got = 0.5 * reach * (cone[i] / g_total) / top;
    svg << "<line x1=\"" << px(foot * ux) << "\" y1=\"" << py(foot * uy) << "\" x2=\"" << px((foot + want) * ux)
        << "\" y2=\"" << py((foot + want) * uy) << "\" stroke=\"#1f77b4\" stroke-width=\"5\" opacity=\"0.5\"/>\n";
    svg << "<line x1=\"" << px(foot * ux) << "\" y1=\"" << py(foot * uy) << "\" x2=\"" << px((foot + got) * ux)
        << "\" y2=\"" << py((foot + got) * uy) << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
  }
  svg << "<text x=\"10\" y=\"20\" fill=\"#1f77b4\">mu/|mu|</text>\n";
  svg << "<text x=\"10\" y=\"36\" fill=\"#d62728\">G/G_total</text>\n";

  // Residual history on a log scale.
  std::vector<double> history;
  if (report.contains("trace"))
    for (const auto& e : report.at("trace")) history.push_back(std::max(1e-17, field<double>(e, "residual")));
  const double left = size + 50.0;
  const double width = size - 80.0;
  const double bottom = size - 50.0;
  const double height = size - 100.0;
  svg << "<rect x=\"" << left << "\" y=\"50\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"40\">log10 residual by iteration</text>\n";
  if (!history.empty()) {
    double lo = 1e300;
    double hi = -1e300;
    for (double r : history) {
      lo = std::min(lo, std::log10(r));
      hi = std::max(hi, std::log10(r));
    }
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1.0;
    const double steps = std::max<double>(1.0, static_cast<double>(history.size() - 1));
    svg << "<polyline fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double x = left + width * static_cast<double>(k) / steps;
      const double y = bottom - height * (std::log10(history[k]) - lo) / (hi - lo);
      svg << num(x) << "," << num(y) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << left - 40 << "\" y=\"" << 55 << "\">" << hi << "</text>\n";
    svg << "<text x=\"" << left - 40 << "\" y=\"" << bottom << "\">" << lo << "</text>\n";
    svg << "<text x=\"" << left + width - 20 << "\" y=\"" << bottom + 20 << "\">" << history.size() - 1
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace minklog::cli
