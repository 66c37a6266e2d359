#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cbt/error.hpp"

namespace cbt {

/// Two points closer than this are treated as the same vertex.
inline constexpr double kDefaultMergeTolerance = 1e-6;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline bool same_vertex(Point2 a, Point2 b, double tolerance = kDefaultMergeTolerance) {
  return distance(a, b) <= tolerance;
}

// Lexicographic (x, then y) ordering; used wherever a deterministic
// tie-break between geometrically equivalent choices is needed.
inline bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

enum class SegmentKind { Detected, Generated };

struct LineSegment {
  Point2 a;
  Point2 b;
  SegmentKind kind = SegmentKind::Detected;

  friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

inline double segment_length(const LineSegment& s) { return distance(s.a, s.b); }

inline bool is_degenerate(const LineSegment& s, double tolerance = kDefaultMergeTolerance) {
  return same_vertex(s.a, s.b, tolerance);
}

/// Closed polygon; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i]; }
  // i-th edge runs from vertex i to vertex i+1 (mod size).
  std::pair<Point2, Point2> edge(std::size_t i) const {
    return {vertices[i], vertices[(i + 1) % vertices.size()]};
  }

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Throws InvalidPolygon unless the polygon has at least three finite
/// vertices with no two consecutive ones merged under `tolerance`.
inline void validate_polygon(const Polygon& p, double tolerance = kDefaultMergeTolerance) {
  if (p.size() < 3) {
    throw Error(ErrorCode::InvalidPolygon,
                "polygon needs at least 3 vertices, got " + std::to_string(p.size()));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!is_finite(p[i])) throw Error(ErrorCode::InvalidPolygon, "non-finite vertex");
    auto [a, b] = p.edge(i);
    if (same_vertex(a, b, tolerance)) {
      throw Error(ErrorCode::InvalidPolygon,
                  "consecutive vertices " + std::to_string(i) + " coincide");
    }
  }
}

inline double polygon_signed_area(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = vertices[i];
    const Point2& q = vertices[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

/// |shoelace|. Self-intersecting outlines are not decomposed.
inline double polygon_area(std::span<const Point2> vertices) {
  return std::abs(polygon_signed_area(vertices));
}
inline double polygon_area(const Polygon& p) { return polygon_area(std::span<const Point2>(p.vertices)); }

inline double polygon_perimeter(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += distance(vertices[i], vertices[(i + 1) % n]);
  return total;
}
inline double polygon_perimeter(const Polygon& p) {
  return polygon_perimeter(std::span<const Point2>(p.vertices));
}

inline double point_segment_distance(Point2 q, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(q, a);
  const double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
  return distance(q, a + t * ab);
}

/// Distance to the outline (not the filled region).
inline double point_to_polygon_distance(Point2 q, const Polygon& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [a, b] = p.edge(i);
    best = std::min(best, point_segment_distance(q, a, b));
  }
  return best;
}

inline Point2 polygon_centroid(const Polygon& p) {
  Point2 c;
  for (const auto& v : p.vertices) c = c + v;
  const double n = static_cast<double>(p.size());
  return {c.x / n, c.y / n};
}

// Orientation of (a, b, c): > 0 counter-clockwise in a y-up frame.
inline double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

}  // namespace cbt
