#pragma once

// Delaunay triangulation of a planar point set.
//
// Construction is a lexicographic sweep (each new point is outside the
// current hull, so it is fanned to the visible hull edges) followed by
// Lawson edge flips until every interior edge is locally Delaunay. For
// cocircular quadrilaterals both diagonals are valid; the one whose
// endpoints are lexicographically smallest is kept so that builds are
// reproducible regardless of input order.

#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"

namespace cbt {

using IndexPair = std::pair<std::size_t, std::size_t>;

struct Triangulation {
  // Counter-clockwise (y-up) vertex triples, indices into the input list.
  std::vector<std::array<std::size_t, 3>> triangles;
  // Unique undirected edges, first < second, sorted.
  std::vector<IndexPair> edges;
};

namespace detail {

inline long double orient_ld(Point2 a, Point2 b, Point2 c) {
  const long double abx = static_cast<long double>(b.x) - a.x;
  const long double aby = static_cast<long double>(b.y) - a.y;
  const long double acx = static_cast<long double>(c.x) - a.x;
  const long double acy = static_cast<long double>(c.y) - a.y;
  return abx * acy - aby * acx;
}

// > 0 when d lies strictly inside the circle through counter-clockwise a, b, c.
// Sets `tie` when the determinant is within rounding of zero.
inline long double incircle_ld(Point2 a, Point2 b, Point2 c, Point2 d, bool& tie) {
  const long double adx = static_cast<long double>(a.x) - d.x, ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x, bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x, cdy = static_cast<long double>(c.y) - d.y;
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  const long double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                          clift * (adx * bdy - bdx * ady);
  const long double permanent = alift * (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) +
                                blift * (std::fabs(cdx * ady) + std::fabs(adx * cdy)) +
                                clift * (std::fabs(adx * bdy) + std::fabs(bdx * ady));
  tie = std::fabs(det) <= 1e-12L * permanent;
  return det;
}

inline bool diagonal_less(Point2 p0, Point2 p1, Point2 q0, Point2 q1) {
  if (lex_less(p1, p0)) std::swap(p0, p1);
  if (lex_less(q1, q0)) std::swap(q0, q1);
  if (p0 != q0) return lex_less(p0, q0);
  return lex_less(p1, q1);
}

class SweepTriangulator {
 public:
  explicit SweepTriangulator(std::span<const Point2> pts) : pts_(pts) {}

  std::vector<std::array<std::size_t, 3>> run(std::vector<std::size_t> order) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return lex_less(pts_[i], pts_[j]); });
    const std::size_t n = order.size();
    next_.assign(pts_.size(), kNone);
    prev_.assign(pts_.size(), kNone);
    hull_tri_.assign(pts_.size(), kNone);

    std::size_t apex = 2;
    while (apex < n && orient_ld(pts_[order[0]], pts_[order[1]], pts_[order[apex]]) == 0.0L) ++apex;
    if (apex == n) throw Error(ErrorCode::AllCollinear, "all points are collinear");
    seed_fan(std::span<const std::size_t>(order).first(apex), order[apex]);
    for (std::size_t k = apex + 1; k < n; ++k) insert_outside(order[k]);
    legalize();

    std::vector<std::array<std::size_t, 3>> out;
    out.reserve(tris_.size());
    for (const auto& t : tris_) out.push_back({t.v[0], t.v[1], t.v[2]});
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Tri {
    std::array<std::size_t, 3> v;
    // nbr[k] is the triangle across the edge opposite v[k].
    std::array<std::size_t, 3> nbr{kNone, kNone, kNone};
  };

  std::size_t add_tri(std::size_t a, std::size_t b, std::size_t c) {
    tris_.push_back(Tri{{a, b, c}});
    return tris_.size() - 1;
  }

  static int slot_of(const Tri& t, std::size_t vertex) {
    for (int k = 0; k < 3; ++k)
      if (t.v[k] == vertex) return k;
    return -1;
  }

  // Fan the collinear prefix to the first off-line point.
  void seed_fan(std::span<const std::size_t> line, std::size_t apex) {
    const bool left = orient_ld(pts_[line.front()], pts_[line.back()], pts_[apex]) > 0.0L;
    std::vector<std::size_t> fan;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      const std::size_t a = line[i], b = line[i + 1];
      fan.push_back(left ? add_tri(a, b, apex) : add_tri(b, a, apex));
    }
    for (std::size_t i = 0; i + 1 < fan.size(); ++i) {
      // Consecutive fan triangles share the spoke (line[i + 1], apex).
      Tri& t0 = tris_[fan[i]];
      Tri& t1 = tris_[fan[i + 1]];
      t0.nbr[slot_of(t0, line[i])] = fan[i + 1];
      t1.nbr[slot_of(t1, line[i + 2])] = fan[i];
    }
    // Hull, counter-clockwise.
    std::vector<std::size_t> ring;
    if (left) {
      ring.assign(line.begin(), line.end());
      ring.push_back(apex);
    } else {
      ring.push_back(line.front());
      ring.push_back(apex);
      for (std::size_t i = line.size() - 1; i >= 1; --i) ring.push_back(line[i]);
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t a = ring[i], b = ring[(i + 1) % ring.size()];
      next_[a] = b;
      prev_[b] = a;
    }
    for (std::size_t t : fan) register_hull_edges(t);
    hull_start_ = apex;
  }

  void register_hull_edges(std::size_t t) {
    const Tri& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = tri.v[(k + 1) % 3], b = tri.v[(k + 2) % 3];
      if (tri.nbr[k] == kNone && next_[a] == b) hull_tri_[a] = t;
    }
  }

  bool visible(std::size_t a, std::size_t p) const {
    return orient_ld(pts_[a], pts_[next_[a]], pts_[p]) < 0.0L;
  }

  void insert_outside(std::size_t p) {
    std::size_t first = kNone;
    std::size_t probe = hull_start_;
    do {
      if (visible(probe, p)) {
        first = probe;
        break;
      }
      probe = next_[probe];
    } while (probe != hull_start_);
    if (first == kNone) return;  // unreachable for lexicographically increasing input
    for (std::size_t guard = 0; guard < pts_.size() && visible(prev_[first], p); ++guard) {
      first = prev_[first];
    }
    std::vector<std::size_t> chain{first};
    while (visible(chain.back(), p)) chain.push_back(next_[chain.back()]);

    std::vector<std::size_t> created;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const std::size_t a = chain[i], b = chain[i + 1];
      const std::size_t t = add_tri(b, a, p);
      const std::size_t outer = hull_tri_[a];
      tris_[t].nbr[2] = outer;
      Tri& o = tris_[outer];
      for (int k = 0; k < 3; ++k) {
        if (o.v[k] != a && o.v[k] != b) o.nbr[k] = t;
      }
      if (!created.empty()) {
        tris_[t].nbr[0] = created.back();
        tris_[created.back()].nbr[1] = t;
      }
      created.push_back(t);
    }
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      next_[chain[i]] = prev_[chain[i]] = kNone;
    }
    const std::size_t head = chain.front(), tail = chain.back();
    next_[head] = p;
    prev_[p] = head;
    next_[p] = tail;
    prev_[tail] = p;
    hull_tri_[head] = created.front();
    hull_tri_[p] = created.back();
    hull_start_ = p;
  }

  void legalize() {
    std::vector<std::pair<std::size_t, int>> stack;
    for (std::size_t t = 0; t < tris_.size(); ++t)
      for (int k = 0; k < 3; ++k) stack.emplace_back(t, k);
    const std::size_t budget = 64 * tris_.size() * tris_.size() + 1024;
    std::size_t flips = 0;
    while (!stack.empty() && flips < budget) {
      auto [t1, k1] = stack.back();
      stack.pop_back();
      const std::size_t t2 = tris_[t1].nbr[k1];
      if (t2 == kNone) continue;
      if (try_flip(t1, k1, t2, stack)) ++flips;
    }
  }

  bool try_flip(std::size_t t1, int k1, std::size_t t2,
                std::vector<std::pair<std::size_t, int>>& stack) {
    Tri& T1 = tris_[t1];
    Tri& T2 = tris_[t2];
    const std::size_t a = T1.v[k1];
    const std::size_t b = T1.v[(k1 + 1) % 3];
    const std::size_t c = T1.v[(k1 + 2) % 3];
    int k2 = -1;
    for (int k = 0; k < 3; ++k)
      if (T2.v[k] != b && T2.v[k] != c) k2 = k;
    const std::size_t d = T2.v[k2];

    bool tie = false;
    const long double in = incircle_ld(pts_[a], pts_[b], pts_[c], pts_[d], tie);
    bool flip = false;
    if (tie) {
      flip = diagonal_less(pts_[a], pts_[d], pts_[b], pts_[c]);
    } else {
      flip = in > 0.0L;
    }
    if (!flip) return false;
    if (orient_ld(pts_[a], pts_[b], pts_[d]) <= 0.0L || orient_ld(pts_[a], pts_[d], pts_[c]) <= 0.0L)
      return false;

    const std::size_t n_ca = T1.nbr[(k1 + 1) % 3];  // opposite b
    const std::size_t n_ab = T1.nbr[(k1 + 2) % 3];  // opposite c
    // In T2 = (d, c, b) rotated: opposite c is edge (b, d), opposite b is edge (d, c).
    const std::size_t n_bd = T2.nbr[slot_of(T2, c)];
    const std::size_t n_dc = T2.nbr[slot_of(T2, b)];

    T1.v = {a, b, d};
    T1.nbr = {n_bd, t2, n_ab};
    T2.v = {a, d, c};
    T2.nbr = {n_dc, n_ca, t1};
    relink(n_bd, t2, t1);
    relink(n_ca, t1, t2);

    stack.emplace_back(t1, 0);
    stack.emplace_back(t1, 2);
    stack.emplace_back(t2, 0);
    stack.emplace_back(t2, 1);
    return true;
  }

  void relink(std::size_t t, std::size_t from, std::size_t to) {
    if (t == kNone) return;
    for (auto& n : tris_[t].nbr)
      if (n == from) n = to;
  }

  std::span<const Point2> pts_;
  std::vector<Tri> tris_;
  std::vector<std::size_t> next_, prev_, hull_tri_;
  std::size_t hull_start_ = 0;
};

}  // namespace detail

/// Delaunay triangulation of `points`. Points within `merge_tolerance` of an
/// earlier point are folded onto that earlier index.
inline Triangulation delaunay_triangulate(std::span<const Point2> points,
                                          double merge_tolerance = kDefaultMergeTolerance) {
  std::vector<std::size_t> unique;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_finite(points[i])) throw Error(ErrorCode::InvalidSegment, "non-finite point");
    bool dup = false;
    for (std::size_t u : unique) {
      if (same_vertex(points[i], points[u], merge_tolerance)) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(i);
  }
  if (unique.size() < 3) {
    throw Error(ErrorCode::TooFewPoints,
                "need at least 3 distinct points, got " + std::to_string(unique.size()));
  }

  Triangulation out;
  out.triangles = detail::SweepTriangulator(points).run(unique);
  for (const auto& t : out.triangles) {
    for (int k = 0; k < 3; ++k) {
      std::size_t i = t[k], j = t[(k + 1) % 3];
      if (i > j) std::swap(i, j);
      out.edges.emplace_back(i, j);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

/// Edge set of the Delaunay triangulation.
inline std::vector<IndexPair> delaunay(std::span<const Point2> points,
                                       double merge_tolerance = kDefaultMergeTolerance) {
  return delaunay_triangulate(points, merge_tolerance).edges;
}

}  // namespace cbt
