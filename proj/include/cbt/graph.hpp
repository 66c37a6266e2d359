#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cbt/delaunay.hpp"
#include "cbt/error.hpp"
#include "cbt/geometry.hpp"

namespace cbt {

using VertexId = std::size_t;
using EdgeId = std::size_t;

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct GraphEdge {
  VertexId u = 0;  // u < v
  VertexId v = 0;
  SegmentKind kind = SegmentKind::Detected;
  double weight = 0.0;

  VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// Undirected graph over segment endpoints. Detected edges carry weight 0,
/// generated (gap-filling) edges carry their Euclidean length.
class BoundaryGraph {
 public:
  BoundaryGraph() = default;

  /// Assembles a graph from explicit parts and checks the structural
  /// invariants (no self-loops, no duplicate pairs, weights consistent with
  /// kinds). Detected edges are indexed in the order given.
  static BoundaryGraph from_parts(std::vector<Point2> vertices, std::vector<GraphEdge> edges) {
    BoundaryGraph g;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    g.adjacency_.assign(g.vertices_.size(), {});
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
      GraphEdge& e = g.edges_[id];
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.v >= g.vertices_.size()) throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop in boundary graph");
      if (e.kind == SegmentKind::Detected) {
        if (e.weight != 0.0) throw std::invalid_argument("detected edge must have weight 0");
        g.detected_.push_back(id);
      } else if (e.weight < 0.0) {
        throw std::invalid_argument("negative generated edge weight");
      }
      pairs.emplace_back(e.u, e.v);
      g.adjacency_[e.u].push_back(id);
      g.adjacency_[e.v].push_back(id);
    }
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
      throw std::invalid_argument("duplicate vertex pair in boundary graph");
    return g;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Point2>& vertices() const { return vertices_; }
  const Point2& vertex(VertexId v) const { return vertices_[v]; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const EdgeId> incident(VertexId v) const { return adjacency_[v]; }
  /// Ids of detected edges in input order.
  const std::vector<EdgeId>& detected_index() const { return detected_; }
  /// Size of the Delaunay edge set the generated edges were drawn from.
  std::size_t delaunay_edge_count() const { return delaunay_edges_; }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const {
    for (EdgeId id : adjacency_[a])
      if (edges_[id].other(a) == b) return id;
    return std::nullopt;
  }

  LineSegment segment(EdgeId id) const {
    const GraphEdge& e = edges_[id];
    return {vertices_[e.u], vertices_[e.v], e.kind};
  }

 private:
  friend BoundaryGraph build_graph(std::span<const LineSegment>, double);

  std::vector<Point2> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::vector<EdgeId> detected_;
  std::size_t delaunay_edges_ = 0;
};

namespace detail {

inline VertexId intern_vertex(std::vector<Point2>& vertices, Point2 p, double tolerance) {
  for (VertexId id = 0; id < vertices.size(); ++id)
    if (same_vertex(vertices[id], p, tolerance)) return id;
  vertices.push_back(p);
  return vertices.size() - 1;
}

}  // namespace detail

/// Gap filling: triangulate the endpoints of `detected`, drop triangulation
/// edges that join the two endpoints of a detected segment, and keep the
/// rest as generated edges.
inline BoundaryGraph build_graph(std::span<const LineSegment> detected,
                                 double merge_tolerance = kDefaultMergeTolerance) {
  std::vector<Point2> vertices;
  std::vector<std::pair<VertexId, VertexId>> detected_pairs;
  for (const LineSegment& s : detected) {
    if (!is_finite(s.a) || !is_finite(s.b)) throw Error(ErrorCode::InvalidSegment, "non-finite endpoint");
    VertexId a = detail::intern_vertex(vertices, s.a, merge_tolerance);
    VertexId b = detail::intern_vertex(vertices, s.b, merge_tolerance);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (std::find(detected_pairs.begin(), detected_pairs.end(), std::pair{a, b}) != detected_pairs.end())
      continue;
    detected_pairs.emplace_back(a, b);
  }
  if (detected_pairs.size() < 2) {
    throw Error(ErrorCode::TooFewSegments,
                "need at least 2 detected segments, got " + std::to_string(detected_pairs.size()));
  }

  const std::vector<IndexPair> dt = delaunay(vertices, merge_tolerance);
  const std::size_t n = vertices.size();
  if (dt.size() > 3 * n - 6) throw std::logic_error("triangulation exceeds 3n-6 edges");

  std::vector<GraphEdge> edges;
  edges.reserve(detected_pairs.size() + dt.size());
  for (auto [a, b] : detected_pairs) edges.push_back({a, b, SegmentKind::Detected, 0.0});
  std::vector<std::pair<VertexId, VertexId>> sorted_detected = detected_pairs;
  std::sort(sorted_detected.begin(), sorted_detected.end());
  for (auto [a, b] : dt) {
    if (std::binary_search(sorted_detected.begin(), sorted_detected.end(), std::pair{a, b})) continue;
    edges.push_back({a, b, SegmentKind::Generated, distance(vertices[a], vertices[b])});
  }

  BoundaryGraph g = BoundaryGraph::from_parts(std::move(vertices), std::move(edges));
  g.delaunay_edges_ = dt.size();
  return g;
}

}  // namespace cbt
