#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cbt/geometry.hpp"
#include "test_support.hpp"

using namespace cbt;
using cbt::testing::square;

TEST(SegmentLength, Examples) {
  EXPECT_DOUBLE_EQ(segment_length({{0, 0}, {3, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(segment_length({{2, 2}, {2, 2}}), 0.0);
  EXPECT_DOUBLE_EQ(segment_length({{0, 0}, {10, 0}}), 10.0);
  EXPECT_TRUE(is_degenerate({{2, 2}, {2, 2}}));
}

TEST(PolygonArea, Examples) {
  EXPECT_DOUBLE_EQ(polygon_area(Polygon{{{0, 0}, {4, 0}, {0, 3}}}), 6.0);
  Polygon unit = square(0, 0, 1);
  EXPECT_DOUBLE_EQ(polygon_area(unit), 1.0);
  std::reverse(unit.vertices.begin(), unit.vertices.end());
  EXPECT_DOUBLE_EQ(polygon_area(unit), 1.0);
  EXPECT_DOUBLE_EQ(polygon_area(Polygon{{{0, 0}, {1, 0}, {2, 0}}}), 0.0);
}

TEST(PolygonArea, SelfIntersectingUsesAbsoluteShoelace) {
  // Bow-tie: the two lobes have opposite orientation and cancel.
  EXPECT_DOUBLE_EQ(polygon_area(Polygon{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}), 0.0);
}

TEST(PolygonPerimeter, Examples) {
  EXPECT_DOUBLE_EQ(polygon_perimeter(square(0, 0, 1)), 4.0);
  EXPECT_DOUBLE_EQ(polygon_perimeter(Polygon{{{0, 0}, {3, 0}, {3, 4}}}), 12.0);
  Polygon hex;
  for (int k = 0; k < 6; ++k) hex.vertices.push_back({std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)});
  EXPECT_NEAR(polygon_perimeter(hex), 6.0, 1e-9);
}

TEST(PointToPolygonDistance, Examples) {
  const Polygon sq = square(0, 0, 100);
  EXPECT_DOUBLE_EQ(point_to_polygon_distance({50, -5}, sq), 5.0);
  EXPECT_DOUBLE_EQ(point_to_polygon_distance({30, 0}, sq), 0.0);
  EXPECT_NEAR(point_to_polygon_distance({200, 200}, sq), 141.42135623730951, 1e-9);
  // Outline, not region: the centre is 50 px from every side.
  EXPECT_DOUBLE_EQ(point_to_polygon_distance({50, 50}, sq), 50.0);
}

TEST(ValidatePolygon, RejectsBadInput) {
  EXPECT_THROW(validate_polygon(Polygon{{{0, 0}, {1, 1}}}), Error);
  EXPECT_THROW(validate_polygon(Polygon{{{0, 0}, {0, 0}, {1, 1}}}), Error);
  EXPECT_THROW(validate_polygon(Polygon{{{0, 0}, {NAN, 0}, {1, 1}}}), Error);
  EXPECT_NO_THROW(validate_polygon(square(0, 0, 1)));
}

TEST(GeometryProperties, AreaInvariantUnderReversalAndRotation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Polygon p = cbt::testing::random_polygon(rng, 3 + trial % 8);
    const double a = polygon_area(p);
    Polygon r = p;
    std::reverse(r.vertices.begin(), r.vertices.end());
    EXPECT_NEAR(polygon_area(r), a, 1e-9 * (1 + a));
    std::rotate(r.vertices.begin(), r.vertices.begin() + 1, r.vertices.end());
    EXPECT_NEAR(polygon_area(r), a, 1e-9 * (1 + a));
  }
}

TEST(GeometryProperties, TranslationAndScaling) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> shift(-500, 500), scale(0.1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const Polygon p = cbt::testing::random_polygon(rng, 3 + trial % 7);
    const double a = polygon_area(p), per = polygon_perimeter(p);
    const double dx = shift(rng), dy = shift(rng), s = scale(rng);
    Polygon t = p, sc = p;
    for (auto& v : t.vertices) v = v + Point2{dx, dy};
    for (auto& v : sc.vertices) v = s * v;
    EXPECT_NEAR(polygon_area(t), a, 1e-7 * (1 + a));
    EXPECT_NEAR(polygon_perimeter(t), per, 1e-9 * (1 + per));
    EXPECT_NEAR(polygon_area(sc), s * s * a, 1e-9 * (1 + s * s * a));
    EXPECT_NEAR(polygon_perimeter(sc), s * per, 1e-9 * (1 + s * per));
  }
}

TEST(GeometryProperties, PolygonDistanceIsMinOverEdges) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const Polygon p = cbt::testing::random_polygon(rng, 3 + trial % 6);
    const Point2 q = cbt::testing::random_point(rng, -50, 150);
    // Dense sampling along each edge bounds the true minimum from above.
    double sampled = INFINITY;
    double exact = INFINITY;
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto [a, b] = p.edge(i);
      exact = std::min(exact, point_segment_distance(q, a, b));
      for (int k = 0; k <= 2000; ++k) sampled = std::min(sampled, distance(q, a + (k / 2000.0) * (b - a)));
    }
    const double d = point_to_polygon_distance(q, p);
    EXPECT_EQ(d, exact);
    EXPECT_LE(d, sampled + 1e-12);
    EXPECT_GE(d, sampled - 0.2);
  }
}
