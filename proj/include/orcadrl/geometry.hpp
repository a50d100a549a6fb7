#pragma once

#include <cmath>
#include <vector>

namespace orcadrl {

/// Absolute tolerance used by all geometric predicates.
inline constexpr double kGeomEps = 1e-9;

/// 2-D vector. Units are meters for positions and m/s for velocities.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double norm_sq() const { return x * x + y * y; }
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
  /// Counterclockwise perpendicular.
  constexpr Vec2 perp() const { return {-y, x}; }
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  double angle() const { return std::atan2(y, x); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the cross product (positive when b is counterclockwise of a).
constexpr double det(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline Vec2 unit_from_angle(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// One allowed-velocity half-plane {v : (v - point) . normal >= 0}.
struct HalfPlane {
  Vec2 point;   ///< point on the boundary line (m/s)
  Vec2 normal;  ///< unit outward normal
};

/// Signed distance from v to the half-plane boundary, positive on the
/// allowed side.
inline double point_to_halfplane_distance(Vec2 v, const HalfPlane& h) {
  return dot(v - h.point, h.normal);
}

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Rigid-body pose: translation plus heading.
struct Pose {
  Vec2 position;
  double heading = 0.0;

  Vec2 to_world(Vec2 local) const {
    return position + local.rotated(heading);
  }
};

/// Simple polygon with counterclockwise vertex order.
struct Polygon {
  std::vector<Vec2> vertices;

  Polygon() = default;
  explicit Polygon(std::vector<Vec2> verts) : vertices(std::move(verts)) {}

  double signed_area() const;
  bool is_ccw() const { return signed_area() > 0.0; }
  /// Reverses vertex order if needed so the polygon is CCW.
  void make_ccw();

  std::vector<Segment> edges() const;
  /// Crossing-number containment test; works for non-convex polygons.
  bool contains(Vec2 p) const;
  Polygon transformed(const Pose& pose) const;
};

/// Axis-aligned rectangle helper (returns a CCW polygon).
Polygon make_rect(Vec2 min_corner, Vec2 max_corner);

/// Distance along the ray from `origin` in unit direction `direction` to the
/// nearest obstacle edge, clamped to max_range when nothing is hit.
double ray_cast(Vec2 origin, Vec2 direction,
                const std::vector<Polygon>& obstacles, double max_range);

/// Ray vs single segment; returns hit parameter t >= 0 or a negative value
/// on miss.
double ray_segment_intersection(Vec2 origin, Vec2 direction, const Segment& s);

double point_segment_distance(Vec2 p, const Segment& s);
/// Closest point on the segment to p.
Vec2 closest_point_on_segment(Vec2 p, const Segment& s);
/// Distance from a point to a polygon boundary/interior (0 when inside).
double point_polygon_distance(Vec2 p, const Polygon& poly);

/// Splits a simple polygon into convex pieces by ear clipping.
/// Degenerate (near zero area) polygons yield an empty list.
std::vector<Polygon> convex_decompose(const Polygon& poly);

/// True iff the interiors of the two posed polygons intersect. Shared
/// boundary alone (within kGeomEps) counts as non-overlapping.
bool polygons_overlap(const Polygon& p, const Pose& pose_p, const Polygon& q,
                      const Pose& pose_q);

}  // namespace orcadrl
