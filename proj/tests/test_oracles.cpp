// Sanity checks for the test oracles themselves.
#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "cbt/delaunay.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

using namespace cbt;

TEST(OracleDelaunayCheck, AcceptsTriangulatorOutput) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = cbt::testing::random_points(rng, 8);
    const auto edges = delaunay(pts);
    EXPECT_TRUE(oracle::delaunay_check(pts, edges)) << "trial " << trial;
  }
}

TEST(OracleDelaunayCheck, RejectsIllegalDiagonal) {
  // Thin quad: (0,0),(10,0),(5,1),(5,-1). The legal diagonal is the short one.
  const std::vector<Point2> pts{{0, 0}, {10, 0}, {5, 1}, {5, -1}};
  const std::vector<std::pair<std::size_t, std::size_t>> legal{{0, 2}, {2, 1}, {1, 3}, {3, 0}, {2, 3}};
  const std::vector<std::pair<std::size_t, std::size_t>> flipped{{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 1}};
  EXPECT_TRUE(oracle::delaunay_check(pts, legal));
  EXPECT_FALSE(oracle::delaunay_check(pts, flipped));
  // Missing an edge is not a triangulation.
  EXPECT_FALSE(oracle::delaunay_check(pts, std::vector<std::pair<std::size_t, std::size_t>>(legal.begin(), legal.end() - 1)));
}

TEST(OracleDelaunayCheck, SingleTriangle) {
  const std::vector<Point2> pts{{0, 0}, {4, 0}, {1, 3}};
  EXPECT_TRUE(oracle::delaunay_check(pts, std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {0, 2}}));
}

TEST(OracleBestCycle, RectangleFixture) {
  const BoundaryGraph g = build_graph(cbt::testing::rectangle_segments());
  const auto best = oracle::best_cycle(g, cbt::testing::rectangle_10x8(), 0.9);
  ASSERT_TRUE(best.has_value());
  EXPECT_DOUBLE_EQ(best->cost, 0.2);
  EXPECT_EQ(best->vertices.size(), 4u);
  // Nothing near area 1e6.
  EXPECT_FALSE(oracle::best_cycle(g, cbt::testing::square(0, 0, 1000), 0.9).has_value());
}

TEST(OracleBestCycle, DetectedTriangleIsFree) {
  const std::vector<LineSegment> tri{{{0, 0}, {10, 0}}, {{10, 0}, {3, 7}}, {{3, 7}, {0, 0}}};
  const BoundaryGraph g = build_graph(tri);
  const auto best = oracle::best_cycle(g, Polygon{{{0, 0}, {10, 0}, {3, 7}}}, 0.9);
  ASSERT_TRUE(best.has_value());
  EXPECT_EQ(best->cost, 0.0);
  EXPECT_EQ(best->area, 35.0);
}

TEST(OracleShortestPath, Examples) {
  const BoundaryGraph g = build_graph(cbt::testing::rectangle_segments());
  EXPECT_EQ(oracle::shortest_path(g, 0, 1, g.detected_index()[0]), 16.0);
  EXPECT_EQ(oracle::shortest_path(g, 2, 2, kNoEdge), 0.0);
  const BoundaryGraph split = BoundaryGraph::from_parts({{0, 0}, {1, 0}, {0, 1}, {9, 9}},
                                                        {{0, 1, SegmentKind::Detected, 0.0},
                                                         {0, 2, SegmentKind::Generated, 1.0},
                                                         {1, 2, SegmentKind::Generated, 1.4}});
  EXPECT_EQ(oracle::shortest_path(split, 0, 3, kNoEdge), std::numeric_limits<double>::infinity());
}

TEST(OracleDistanceTransform, SinglePixel) {
  std::vector<double> mask(25, 0.0);
  mask[12] = 1.0;
  const auto d = oracle::distance_transform(mask, 5, 5);
  EXPECT_EQ(d[12], 0.0);
  EXPECT_EQ(d[0], std::sqrt(8.0));
  EXPECT_EQ(d[2], 2.0);
}
