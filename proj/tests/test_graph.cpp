#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cbt/graph.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

using namespace cbt;

namespace {

std::size_t count_kind(const BoundaryGraph& g, SegmentKind kind) {
  std::size_t n = 0;
  for (const auto& e : g.edges()) n += e.kind == kind;
  return n;
}

}  // namespace

TEST(BuildGraph, RectangleFixture) {
  const BoundaryGraph g = build_graph(cbt::testing::rectangle_segments());
  ASSERT_EQ(g.vertex_count(), 4u);
  ASSERT_EQ(g.edge_count(), 5u);
  EXPECT_EQ(count_kind(g, SegmentKind::Detected), 2u);
  EXPECT_EQ(g.detected_index(), (std::vector<EdgeId>{0, 1}));
  // Vertices in first-appearance order: (0,0) (10,0) (0,8) (10,8).
  EXPECT_EQ(g.vertex(2), (Point2{0, 8}));
  std::multiset<double> generated;
  for (const auto& e : g.edges())
    if (e.kind == SegmentKind::Generated) generated.insert(e.weight);
  EXPECT_EQ(generated, (std::multiset<double>{8.0, 8.0, 12.806248474865697}));
  // Cocircular corners: the (0,0)-(10,8) diagonal is chosen.
  EXPECT_TRUE(g.find_edge(0, 3).has_value());
  EXPECT_FALSE(g.find_edge(1, 2).has_value());
}

TEST(BuildGraph, SingleSegmentIsTooFew) {
  try {
    build_graph(std::vector<LineSegment>{{{0, 0}, {1, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSegments);
  }
}

TEST(BuildGraph, SharedEndpoint) {
  const BoundaryGraph g = build_graph(std::vector<LineSegment>{{{0, 0}, {10, 0}}, {{10, 0}, {4, 7}}});
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(count_kind(g, SegmentKind::Detected), 2u);
  ASSERT_EQ(count_kind(g, SegmentKind::Generated), 1u);
  const GraphEdge& closing = g.edge(2);
  EXPECT_EQ(closing.weight, distance({0, 0}, {4, 7}));
}

TEST(BuildGraph, MergesNearbyEndpointsAndDuplicateSegments) {
  const std::vector<LineSegment> segs{
      {{0, 0}, {10, 0}}, {{10, 0.0000005}, {5, 8}}, {{5, 8}, {10, 0}}, {{0, 0}, {0, 0}}, {{5, 8}, {0, 0}}};
  const BoundaryGraph g = build_graph(segs);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.detected_index().size(), 3u);
  EXPECT_EQ(count_kind(g, SegmentKind::Generated), 0u);
}

TEST(BuildGraph, AllCollinearPropagates) {
  try {
    build_graph(std::vector<LineSegment>{{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllCollinear);
  }
}

TEST(BoundaryGraph, FromPartsRejectsBrokenInvariants) {
  const std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(BoundaryGraph::from_parts(v, {{0, 0, SegmentKind::Generated, 0.0}}), std::invalid_argument);
  EXPECT_THROW(BoundaryGraph::from_parts(v, {{0, 1, SegmentKind::Detected, 1.0}}), std::invalid_argument);
  EXPECT_THROW(BoundaryGraph::from_parts(v, {{0, 1, SegmentKind::Detected, 0.0}, {1, 0, SegmentKind::Generated, 1.0}}),
               std::invalid_argument);
}

TEST(BuildGraphProperties, InvariantsOnRandomInputs) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto segs = cbt::testing::random_segments(rng, 2 + trial % 5);
    BoundaryGraph g;
    try {
      g = build_graph(segs);
    } catch (const Error&) {
      continue;
    }
    std::set<Point2, decltype([](Point2 a, Point2 b) { return lex_less(a, b); })> distinct;
    for (const auto& s : segs) {
      distinct.insert(s.a);
      distinct.insert(s.b);
    }
    EXPECT_EQ(g.vertex_count(), distinct.size());
    EXPECT_EQ(g.detected_index().size(), segs.size());
    EXPECT_LE(g.delaunay_edge_count(), 3 * g.vertex_count() - 6);

    const auto dt = oracle::delaunay_edges(g.vertices());
    std::set<std::pair<VertexId, VertexId>> detected_pairs;
    for (const auto& e : g.edges()) {
      EXPECT_NE(e.u, e.v);
      if (e.kind == SegmentKind::Detected) {
        EXPECT_EQ(e.weight, 0.0);
        detected_pairs.insert({e.u, e.v});
      } else {
        EXPECT_EQ(e.weight, distance(g.vertex(e.u), g.vertex(e.v)));
        EXPECT_TRUE(dt.count({e.u, e.v})) << "generated edge outside the Delaunay edge set";
        EXPECT_FALSE(detected_pairs.count({e.u, e.v}));
      }
    }
  }
}
