#include "orcadrl/geometry.hpp"

#include <algorithm>
#include <limits>

namespace orcadrl {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

double Polygon::signed_area() const {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += det(vertices[i], vertices[(i + 1) % n]);
  }
  return 0.5 * twice;
}

void Polygon::make_ccw() {
  if (signed_area() < 0.0) std::reverse(vertices.begin(), vertices.end());
}

std::vector<Segment> Polygon::edges() const {
  std::vector<Segment> out;
  const std::size_t n = vertices.size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({vertices[i], vertices[(i + 1) % n]});
  }
  return out;
}

bool Polygon::contains(Vec2 p) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = vertices[j];
    const Vec2 b = vertices[i];
    if ((b.y > p.y) != (a.y > p.y)) {
      const double t = (p.y - b.y) / (a.y - b.y);
      if (p.x < b.x + t * (a.x - b.x)) inside = !inside;
    }
  }
  return inside;
}

Polygon Polygon::transformed(const Pose& pose) const {
  Polygon out;
  out.vertices.reserve(vertices.size());
  for (Vec2 v : vertices) out.vertices.push_back(pose.to_world(v));
  return out;
}

Polygon make_rect(Vec2 lo, Vec2 hi) {
  return Polygon{{{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}}};
}

double ray_segment_intersection(Vec2 origin, Vec2 direction,
                                const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double denom = det(direction, e);
  if (std::abs(denom) < kGeomEps) return -1.0;  // parallel
  const Vec2 ao = s.a - origin;
  const double t = det(ao, e) / denom;
  const double u = det(ao, direction) / denom;
  if (t >= 0.0 && u >= -kGeomEps && u <= 1.0 + kGeomEps) return t;
  return -1.0;
}

double ray_cast(Vec2 origin, Vec2 direction,
                const std::vector<Polygon>& obstacles, double max_range) {
  double best = max_range;
  for (const Polygon& poly : obstacles) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Segment edge{poly.vertices[i], poly.vertices[(i + 1) % n]};
      const double t = ray_segment_intersection(origin, direction, edge);
      if (t >= 0.0 && t < best) best = t;
    }
  }
  return best;
}

Vec2 closest_point_on_segment(Vec2 p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double len_sq = e.norm_sq();
  if (len_sq < kGeomEps * kGeomEps) return s.a;
  const double t = std::clamp(dot(p - s.a, e) / len_sq, 0.0, 1.0);
  return s.a + t * e;
}

double point_segment_distance(Vec2 p, const Segment& s) {
  return (p - closest_point_on_segment(p, s)).norm();
}

double point_polygon_distance(Vec2 p, const Polygon& poly) {
  if (poly.contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Segment& e : poly.edges()) {
    best = std::min(best, point_segment_distance(p, e));
  }
  return best;
}

namespace {

bool is_convex_ccw(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    if (det(b - a, c - b) < -kGeomEps) return false;
  }
  return true;
}

bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  const double d1 = det(b - a, p - a);
  const double d2 = det(c - b, p - b);
  const double d3 = det(a - c, p - c);
  return d1 >= -kGeomEps && d2 >= -kGeomEps && d3 >= -kGeomEps;
}

// Projection interval of a convex polygon onto an axis.
void project(const std::vector<Vec2>& verts, Vec2 axis, double& lo,
             double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (Vec2 v : verts) {
    const double d = dot(v, axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

// Separating-axis test for strict interior overlap of two convex polygons.
bool convex_interiors_overlap(const Polygon& p, const Polygon& q) {
  double min_depth = std::numeric_limits<double>::infinity();
  for (const Polygon* poly : {&p, &q}) {
    const std::size_t n = poly->vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 edge = poly->vertices[(i + 1) % n] - poly->vertices[i];
      const Vec2 axis = edge.perp().normalized();
      double lo_p, hi_p, lo_q, hi_q;
      project(p.vertices, axis, lo_p, hi_p);
      project(q.vertices, axis, lo_q, hi_q);
      const double depth = std::min(hi_p, hi_q) - std::max(lo_p, lo_q);
      min_depth = std::min(min_depth, depth);
      if (min_depth <= kGeomEps) return false;
    }
  }
  return min_depth > kGeomEps;
}

}  // namespace

std::vector<Polygon> convex_decompose(const Polygon& poly) {
  std::vector<Polygon> out;
  Polygon work = poly;
  work.make_ccw();
  if (work.vertices.size() < 3 || std::abs(work.signed_area()) < kGeomEps) {
    return out;
  }
  if (is_convex_ccw(work.vertices)) {
    out.push_back(work);
    return out;
  }
  // Ear clipping into triangles. Scenario polygons have at most dozens of
  // vertices, so the quadratic scan is fine.
  std::vector<Vec2> v = work.vertices;
  while (v.size() > 3) {
    bool clipped = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 prev = v[(i + n - 1) % n];
      const Vec2 cur = v[i];
      const Vec2 next = v[(i + 1) % n];
      if (det(cur - prev, next - cur) <= kGeomEps) continue;  // reflex/flat
      bool ear = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        if (point_in_triangle(v[j], prev, cur, next)) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      Polygon tri{{prev, cur, next}};
      if (std::abs(tri.signed_area()) > kGeomEps) out.push_back(tri);
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) break;  // degenerate remainder
  }
  if (v.size() == 3) {
    Polygon tri{{v[0], v[1], v[2]}};
    if (std::abs(tri.signed_area()) > kGeomEps) out.push_back(tri);
  }
  return out;
}

bool polygons_overlap(const Polygon& p, const Pose& pose_p, const Polygon& q,
                      const Pose& pose_q) {
  const std::vector<Polygon> parts_p = convex_decompose(p.transformed(pose_p));
  const std::vector<Polygon> parts_q = convex_decompose(q.transformed(pose_q));
  for (const Polygon& a : parts_p) {
    for (const Polygon& b : parts_q) {
      if (convex_interiors_overlap(a, b)) return true;
    }
  }
  return false;
}

}  // namespace orcadrl
