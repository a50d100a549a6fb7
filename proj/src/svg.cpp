#include "orcadrl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace orcadrl {

namespace {

const char* kAgentColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// Five-point star path centered at (cx, cy) in pixel coordinates.
std::string star_path(double cx, double cy, double r) {
  std::string d;
  for (int k = 0; k < 10; ++k) {
    const double rad = (k % 2 == 0) ? r : 0.4 * r;
    const double a = -M_PI / 2 + k * M_PI / 5;
    d += (k == 0 ? "M" : "L");
    d += fmt(cx + rad * std::cos(a)) + " " + fmt(cy + rad * std::sin(a));
  }
  d += "Z";
  return d;
}

std::string polyline(const std::string& points, const char* color,
                     double width) {
  return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"" + fmt(width) + "\" points=\"" + points +
         "\"/>\n";
}

}  // namespace

std::string trajectory_svg(const Scenario& sc, const EpisodeResult& ep) {
  const double scale = 80.0;  // pixels per meter
  const double pad = 30.0;
  const double w = (sc.world_max.x - sc.world_min.x) * scale + 2 * pad;
  const double h = (sc.world_max.y - sc.world_min.y) * scale + 2 * pad;
  const auto px = [&](Vec2 p) {
    return Vec2{pad + (p.x - sc.world_min.x) * scale,
                pad + (sc.world_max.y - p.y) * scale};  // y grows downward
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    fmt(w) + "\" height=\"" + fmt(h) + "\" viewBox=\"0 0 " +
                    fmt(w) + " " + fmt(h) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Polygon& poly : sc.obstacles) {
    std::string pts;
    for (const Vec2& v : poly.vertices) {
      const Vec2 q = px(v);
      pts += fmt(q.x) + "," + fmt(q.y) + " ";
    }
    svg += "<polygon fill=\"#c8c8c8\" stroke=\"#555555\" points=\"" + pts +
           "\"/>\n";
  }

  for (std::size_t i = 0; i < sc.spawns.size(); ++i) {
    const char* color = kAgentColors[i % 8];
    const SpawnSpec& sp = sc.spawns[i];
    const Vec2 lo = px({sp.start.x - sp.start_extent.x,
                        sp.start.y + sp.start_extent.y});
    svg += "<rect fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-dasharray=\"4 3\" x=\"" + fmt(lo.x) + "\" y=\"" +
           fmt(lo.y) + "\" width=\"" + fmt(2 * sp.start_extent.x * scale) +
           "\" height=\"" + fmt(2 * sp.start_extent.y * scale) + "\"/>\n";
    const Vec2 g = px(sp.goal);
    svg += "<path fill=\"" + std::string(color) + "\" d=\"" +
           star_path(g.x, g.y, 10.0) + "\"/>\n";
  }

  for (std::size_t i = 0; i < ep.trajectories.size(); ++i) {
    std::string pts;
    for (const Vec2& p : ep.trajectories[i]) {
      const Vec2 q = px(p);
      pts += fmt(q.x) + "," + fmt(q.y) + " ";
    }
    if (!pts.empty()) svg += polyline(pts, kAgentColors[i % 8], 2.0);
  }

  svg += "</svg>\n";
  return svg;
}

std::string curves_svg(const std::vector<CurvePoint>& curve) {
  const double w = 640.0, h = 260.0, pad = 40.0;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    fmt(w) + "\" height=\"" + fmt(2 * h) + "\" viewBox=\"0 0 " +
                    fmt(w) + " " + fmt(2 * h) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto panel = [&](double y0, const char* title, const char* color,
                         auto&& get) {
    svg += "<rect fill=\"none\" stroke=\"#333333\" x=\"" + fmt(pad) +
           "\" y=\"" + fmt(y0 + pad) + "\" width=\"" + fmt(w - 2 * pad) +
           "\" height=\"" + fmt(h - 2 * pad) + "\"/>\n";
    svg += "<text x=\"" + fmt(pad) + "\" y=\"" + fmt(y0 + pad - 8) +
           "\" font-size=\"13\">" + std::string(title) + "</text>\n";
    if (curve.empty()) return;
    double lo = get(curve[0]), hi = lo;
    for (const CurvePoint& p : curve) {
      lo = std::min(lo, get(p));
      hi = std::max(hi, get(p));
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    std::string pts;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const double x =
          pad + (w - 2 * pad) *
                    (curve.size() == 1
                         ? 0.5
                         : double(k) / double(curve.size() - 1));
      const double y =
          y0 + h - pad - (h - 2 * pad) * (get(curve[k]) - lo) / (hi - lo);
      pts += fmt(x) + "," + fmt(y) + " ";
    }
    svg += polyline(pts, color, 1.5);
  };

  panel(0.0, "external reward per agent-episode", "#d62728",
        [](const CurvePoint& p) { return p.mean_ex_reward; });
  panel(h, "curiosity reward per transition", "#1f77b4",
        [](const CurvePoint& p) { return p.mean_curiosity; });

  svg += "</svg>\n";
  return svg;
}

}  // namespace orcadrl
