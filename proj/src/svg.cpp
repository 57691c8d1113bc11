#include "hdk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hdk {

namespace {

constexpr double kPanel = 400.0;
constexpr double kPad = 30.0;

std::string fmt(const char* f, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke, bool closed) {
  std::string out = closed ? "<polygon" : "<polyline";
  out += " fill=\"none\" stroke=\"";
  out += stroke;
  out += "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt("%.3f,%.3f", pts[i].first, pts[i].second);
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string plot_svg(std::span<const PlanPoint> floor_plan, const HorizonDepthMap& floor_depth,
                     const HorizonDepthMap& ceiling_depth) {
  const double width = 2.0 * kPanel + 3.0 * kPad;
  const double height = kPanel + 2.0 * kPad;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\"" + fmt(" width=\"%.0f\" height=\"%.0f\">\n", width, height);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Floor plan, x to the right and z up, uniform scale.
  double extent = 1e-9;
  for (const PlanPoint& p : floor_plan) extent = std::max({extent, std::abs(p.x), std::abs(p.z)});
  const double s = 0.5 * kPanel / (1.05 * extent);
  const double cx = kPad + 0.5 * kPanel;
  const double cy = kPad + 0.5 * kPanel;
  std::vector<std::pair<double, double>> plan;
  for (const PlanPoint& p : floor_plan) plan.emplace_back(cx + s * p.x, cy - s * p.z);
  out += fmt("<rect x=\"%.0f\" y=\"%.0f\"", kPad, kPad) + fmt(" width=\"%.0f\" height=\"%.0f\"", kPanel, kPanel) +
         " fill=\"none\" stroke=\"#bbb\"/>\n";
  out += polyline(plan, "#1f4e9c", true);
  out += fmt("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"#c0392b\"/>\n", cx, cy);

  // Depth against longitude in [-pi, pi).
  const double x0 = 2.0 * kPad + kPanel;
  double dmax = 1e-9;
  for (double v : floor_depth.values()) dmax = std::max(dmax, v);
  for (double v : ceiling_depth.values()) dmax = std::max(dmax, v);
  dmax *= 1.05;
  auto curve = [&](const HorizonDepthMap& d) {
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j < d.m(); ++j) {
      const double t = (d.fan().longitude(j) + kPi) / kTwoPi;
      pts.emplace_back(x0 + t * kPanel, kPad + kPanel * (1.0 - d[static_cast<std::size_t>(j)] / dmax));
    }
    return pts;
  };
  out += fmt("<rect x=\"%.0f\" y=\"%.0f\"", x0, kPad) + fmt(" width=\"%.0f\" height=\"%.0f\"", kPanel, kPanel) +
         " fill=\"none\" stroke=\"#bbb\"/>\n";
  out += polyline(curve(ceiling_depth), "#e67e22", false);
  out += polyline(curve(floor_depth), "#1f4e9c", false);
  out += fmt("<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">floor plan</text>\n", kPad, kPad - 8.0);
  out += fmt("<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\">", x0, kPad - 8.0) +
         fmt("horizon depth, 0 to %.2f m, longitude -pi to pi</text>\n", dmax, 0.0);
  out += "</svg>\n";
  return out;
}

}  // namespace hdk
