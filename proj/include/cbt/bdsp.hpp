#pragma once

// Closed-boundary candidate search by bidirectional shortest paths.
//
// For a seed detected edge e_i = (s1, s2) the seed is made untraversable and
// Dijkstra runs from both of its endpoints. For every other detected edge e_j
// the two shortest paths to an endpoint of e_j (the anchor), joined through
// e_i, close a cycle. Candidates are scored with
//
//   cost       = (total length of generated edges on the cycle) / (enclosed area)
//   similarity = min(area(prior) / area(cycle), area(cycle) / area(prior))
//
// and the optimal boundary is the lowest-cost candidate whose similarity to
// the prior exceeds the gate s_e.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <vector>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"
#include "cbt/graph.hpp"

namespace cbt {

inline constexpr double kDefaultSimilarityGate = 0.9;

struct ShortestPathTree {
  VertexId source = 0;
  std::vector<double> dist;    // +inf when unreachable
  std::vector<EdgeId> parent;  // edge used to reach each vertex; kNoEdge at source/unreached

  bool reachable(VertexId v) const { return std::isfinite(dist[v]); }

  /// Vertices and edges of the tree path source -> v (v must be reachable).
  void path_to(const BoundaryGraph& g, VertexId v, std::vector<VertexId>& vertices,
               std::vector<EdgeId>& edges) const {
    vertices.clear();
    edges.clear();
    vertices.push_back(v);
    while (v != source) {
      const EdgeId e = parent[v];
      edges.push_back(e);
      v = g.edge(e).other(v);
      vertices.push_back(v);
    }
    std::reverse(vertices.begin(), vertices.end());
    std::reverse(edges.begin(), edges.end());
  }
};

/// Single-source shortest paths that never traverse `excluded`.
/// Ties resolve to the first relaxation in (distance, vertex id) order.
inline ShortestPathTree dijkstra(const BoundaryGraph& g, VertexId source, EdgeId excluded = kNoEdge) {
  const double inf = std::numeric_limits<double>::infinity();
  ShortestPathTree tree;
  tree.source = source;
  tree.dist.assign(g.vertex_count(), inf);
  tree.parent.assign(g.vertex_count(), kNoEdge);
  std::vector<bool> settled(g.vertex_count(), false);

  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  tree.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    for (EdgeId id : g.incident(u)) {
      if (id == excluded) continue;
      const GraphEdge& e = g.edge(id);
      const VertexId w = e.other(u);
      const double nd = d + e.weight;
      if (nd < tree.dist[w]) {
        tree.dist[w] = nd;
        tree.parent[w] = id;
        queue.emplace(nd, w);
      }
    }
  }
  return tree;
}

struct CycleCandidate {
  std::vector<EdgeId> edge_ids;      // closed walk, seed edge last
  std::vector<VertexId> vertex_ids;  // polygon order; vertex_ids[k] -> vertex_ids[k+1] is edge_ids[k]
  Polygon polygon;
  double gap_length = 0.0;
  double area = 0.0;
  double cost = 0.0;
  EdgeId seed_edge = kNoEdge;
  VertexId anchor_vertex = 0;
  std::optional<double> similarity;
};

/// Cost of a boundary: generated-edge length over enclosed area.
inline double grouping_cost(double gap_length, double area) {
  if (!(area > 0.0)) throw Error(ErrorCode::ZeroArea, "grouping cost undefined for zero-area cycle");
  return gap_length / area;
}

inline double grouping_cost(double gap_length, const Polygon& boundary) {
  return grouping_cost(gap_length, polygon_area(boundary));
}

/// Sum of generated-edge weights along `cycle`.
inline double gap_length(const BoundaryGraph& g, std::span<const EdgeId> cycle) {
  double total = 0.0;
  for (EdgeId id : cycle)
    if (g.edge(id).kind == SegmentKind::Generated) total += g.edge(id).weight;
  return total;
}

inline double area_similarity(double area_a, double area_b) {
  if (!(area_a > 0.0) || !(area_b > 0.0))
    throw Error(ErrorCode::ZeroArea, "area similarity needs two positive areas");
  return std::min(area_a / area_b, area_b / area_a);
}

inline double area_similarity(const Polygon& a, const Polygon& b) {
  return area_similarity(polygon_area(a), polygon_area(b));
}

struct SearchOptions {
  // Worker count for per-seed candidate generation; results are identical
  // for any value.
  std::size_t threads = 1;
};

namespace detail {

struct SeedSearch {
  const BoundaryGraph& g;
  std::vector<VertexId> path1, path2;
  std::vector<EdgeId> edges1, edges2;
  std::vector<std::size_t> position;  // index of a vertex on path2, or npos

  explicit SeedSearch(const BoundaryGraph& graph)
      : g(graph), position(graph.vertex_count(), static_cast<std::size_t>(-1)) {}

  std::vector<CycleCandidate> run(EdgeId seed) {
    std::vector<CycleCandidate> out;
    const GraphEdge& se = g.edge(seed);
    const VertexId s1 = se.u, s2 = se.v;
    const ShortestPathTree t1 = dijkstra(g, s1, seed);
    const ShortestPathTree t2 = dijkstra(g, s2, seed);
    for (EdgeId other : g.detected_index()) {
      if (other == seed) continue;
      const VertexId anchor = g.edge(other).u;  // lower-id endpoint
      if (!t1.reachable(anchor) || !t2.reachable(anchor)) continue;
      t1.path_to(g, anchor, path1, edges1);
      t2.path_to(g, anchor, path2, edges2);
      if (auto c = close_cycle(seed, anchor)) out.push_back(std::move(*c));
    }
    return out;
  }

  // Joins s1 -> w (along path1) and w <- s2 (along path2) through the seed,
  // where w is the first vertex of path1 that path2 also visits.
  std::optional<CycleCandidate> close_cycle(EdgeId seed, VertexId anchor) {
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    for (std::size_t k = 0; k < path2.size(); ++k) position[path2[k]] = k;
    std::size_t i1 = 0;
    while (position[path1[i1]] == npos) ++i1;  // terminates: anchor is on both paths
    const std::size_t i2 = position[path1[i1]];
    for (VertexId v : path2) position[v] = npos;

    CycleCandidate c;
    c.seed_edge = seed;
    c.anchor_vertex = anchor;
    c.vertex_ids.assign(path1.begin(), path1.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    c.edge_ids.assign(edges1.begin(), edges1.begin() + static_cast<std::ptrdiff_t>(i1));
    for (std::size_t k = i2; k-- > 0;) {
      c.vertex_ids.push_back(path2[k]);
      c.edge_ids.push_back(edges2[k]);
    }
    c.edge_ids.push_back(seed);
    if (c.vertex_ids.size() < 3) return std::nullopt;

    c.polygon.vertices.reserve(c.vertex_ids.size());
    for (VertexId v : c.vertex_ids) c.polygon.vertices.push_back(g.vertex(v));
    c.area = polygon_area(c.polygon);
    if (!(c.area > 0.0)) return std::nullopt;
    c.gap_length = gap_length(g, c.edge_ids);
    c.cost = grouping_cost(c.gap_length, c.area);
    return c;
  }
};

}  // namespace detail

/// Seeds taken from the detected edges: every other one (even positions of
/// detected_index), floor(n/2) in total, so that at most n(n-1)/2 candidates
/// are produced.
inline std::vector<EdgeId> sampled_seeds(const BoundaryGraph& g) {
  const auto& det = g.detected_index();
  std::vector<EdgeId> seeds;
  for (std::size_t p = 0; p + 1 < det.size(); p += 2) seeds.push_back(det[p]);
  return seeds;
}

/// Bidirectional shortest path candidate generation. Duplicate cycles (same
/// edge set) reached from different seeds or anchors are kept once, at their
/// first occurrence.
inline std::vector<CycleCandidate> enumerate_candidates(const BoundaryGraph& g,
                                                        const SearchOptions& options = {}) {
  if (g.detected_index().size() < 2) {
    throw Error(ErrorCode::TooFewDetectedEdges,
                "need at least 2 detected edges, got " + std::to_string(g.detected_index().size()));
  }
  const std::vector<EdgeId> seeds = sampled_seeds(g);
  std::vector<std::vector<CycleCandidate>> per_seed(seeds.size());

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, seeds.size()));
  if (workers == 1) {
    detail::SeedSearch search(g);
    for (std::size_t s = 0; s < seeds.size(); ++s) per_seed[s] = search.run(seeds[s]);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        detail::SeedSearch search(g);
        for (std::size_t s = w; s < seeds.size(); s += workers) per_seed[s] = search.run(seeds[s]);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  std::vector<CycleCandidate> out;
  std::set<std::vector<EdgeId>> seen;
  for (auto& batch : per_seed) {
    for (auto& c : batch) {
      std::vector<EdgeId> key = c.edge_ids;
      std::sort(key.begin(), key.end());
      if (seen.insert(std::move(key)).second) out.push_back(std::move(c));
    }
  }
  return out;
}

enum class SelectionStatus { Selected, NoSimilarCandidate, NoCandidates };

struct Selection {
  SelectionStatus status = SelectionStatus::NoCandidates;
  // The chosen boundary when Selected; the lowest-cost candidate (ignoring
  // the gate) when NoSimilarCandidate, for diagnostics.
  std::optional<CycleCandidate> best;
  std::size_t candidate_count = 0;

  bool ok() const { return status == SelectionStatus::Selected; }
};

namespace detail {

inline bool better(const CycleCandidate& a, const CycleCandidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.seed_edge != b.seed_edge) return a.seed_edge < b.seed_edge;
  return a.anchor_vertex < b.anchor_vertex;
}

}  // namespace detail

/// Gate first, then cost: the lowest-cost candidate with similarity > s_e.
/// Fills in each candidate's similarity to `prior`.
inline Selection select_from(std::span<CycleCandidate> candidates, const Polygon& prior, double s_e) {
  const double prior_area = polygon_area(prior);
  Selection result;
  result.candidate_count = candidates.size();
  if (candidates.empty()) return result;

  const CycleCandidate* best_gated = nullptr;
  const CycleCandidate* best_any = nullptr;
  for (CycleCandidate& c : candidates) {
    c.similarity = area_similarity(prior_area, c.area);
    if (!best_any || detail::better(c, *best_any)) best_any = &c;
    if (*c.similarity > s_e && (!best_gated || detail::better(c, *best_gated))) best_gated = &c;
  }
  if (best_gated) {
    result.status = SelectionStatus::Selected;
    result.best = *best_gated;
  } else {
    result.status = SelectionStatus::NoSimilarCandidate;
    result.best = *best_any;
  }
  return result;
}

/// Full search on `g` against the prior boundary.
inline Selection select_optimal(const BoundaryGraph& g, const Polygon& prior,
                                double s_e = kDefaultSimilarityGate, const SearchOptions& options = {},
                                std::vector<CycleCandidate>* all_candidates = nullptr) {
  if (!(s_e >= 0.0 && s_e < 1.0)) throw Error(ErrorCode::InvalidConfig, "s_e must lie in [0, 1)");
  std::vector<CycleCandidate> candidates = enumerate_candidates(g, options);
  Selection result = select_from(candidates, prior, s_e);
  if (all_candidates) *all_candidates = std::move(candidates);
  return result;
}

}  // namespace cbt
