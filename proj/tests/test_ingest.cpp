#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cbt/ingest.hpp"
#include "test_support.hpp"

using namespace cbt;
using cbt::testing::square;

TEST(LoadSequence, TwoFrames) {
  std::istringstream in(
      R"({"frame_id": 1, "width": 640, "height": 480, "segments": [[0,0,10,0],[0,0,0,10],[5,5,9,9],[1,2,3,4],[7,7,8,1]]})"
      "\n"
      R"({"frame_id": 0, "width": 640, "height": 480, "segments": [[0,0,10,0],[0,0,0,10],[5,5,9,9]]})"
      "\n");
  const auto frames = read_sequence(in);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].frame_id, 0u);
  EXPECT_EQ(frames[0].segments.size(), 3u);
  EXPECT_EQ(frames[1].frame_id, 1u);
  EXPECT_EQ(frames[1].segments.size(), 5u);
  EXPECT_EQ(frames[0].segments[2].a, (Point2{5, 5}));
}

TEST(LoadSequence, EmptySegmentList) {
  std::istringstream in(R"({"frame_id": 3, "width": 64, "height": 48, "segments": []})");
  const auto frames = read_sequence(in);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_TRUE(frames[0].segments.empty());
}

TEST(LoadSequence, MalformedTokenNamesLine) {
  std::istringstream in(
      R"({"frame_id": 0, "width": 64, "height": 48, "segments": []})"
      "\n\n"
      R"({"frame_id": 1, "width": 64, "height": 48, "segments": [[0,0,"x",1]]})");
  try {
    read_sequence(in);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadSequence, DuplicateFrameId) {
  std::istringstream in(
      R"({"frame_id": 2, "width": 64, "height": 48, "segments": []})"
      "\n"
      R"({"frame_id": 2, "width": 64, "height": 48, "segments": []})");
  try {
    read_sequence(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateFrame);
  }
}

TEST(LoadSequence, ClampsAndDropsDegenerate) {
  std::istringstream in(
      R"({"frame_id": 0, "width": 100, "height": 50, "segments": [[-10,10,50,60],[3,3,3,3],[120,-5,130,-9]]})");
  const auto frames = read_sequence(in);
  ASSERT_EQ(frames[0].segments.size(), 1u);  // the third collapses onto (100,0)
  EXPECT_EQ(frames[0].segments[0].a, (Point2{0, 10}));
  EXPECT_EQ(frames[0].segments[0].b, (Point2{50, 50}));
}

TEST(LoadSequence, MissingFileIsIoError) {
  try {
    load_sequence("/nonexistent/file.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(SequenceFormat, WriteThenReadPreservesBits) {
  std::mt19937_64 rng(3);
  FrameRecord f{7, 640, 480, cbt::testing::random_segments(rng, 20, 400.0)};
  std::stringstream io;
  write_sequence(io, std::vector<FrameRecord>{f});
  const auto back = read_sequence(io);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].segments, f.segments);
}

TEST(FilterByBuffer, Examples) {
  const Polygon prior = square(0, 0, 100);
  const std::vector<LineSegment> segs{{{10, -5}, {90, -5}}, {{200, 200}, {300, 200}}};
  const auto kept = filter_by_buffer(segs, prior, 20.0);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], segs[0]);
  // Mean distance of the dropped segment: (141.421 + 180.278 + 223.607) / 3.
  const double mean = (point_to_polygon_distance({200, 200}, prior) + point_to_polygon_distance({250, 200}, prior) +
                       point_to_polygon_distance({300, 200}, prior)) /
                      3.0;
  EXPECT_NEAR(mean, 181.76857258682932, 1e-9);
  EXPECT_EQ(kDefaultBufferThreshold, 20.0);
}

TEST(FilterByBuffer, StrictInequality) {
  const Polygon prior = square(0, 0, 100);
  const std::vector<LineSegment> segs{{{10, -20}, {90, -20}}};
  EXPECT_TRUE(filter_by_buffer(segs, prior, 20.0).empty());
  EXPECT_EQ(filter_by_buffer(segs, prior, 20.000001).size(), 1u);
}

TEST(FilterByBuffer, InteriorFarFromOutlineIsDropped) {
  const Polygon prior = square(0, 0, 100);
  const std::vector<LineSegment> segs{{{40, 50}, {60, 50}}};
  EXPECT_TRUE(filter_by_buffer(segs, prior, 20.0).empty());
}

TEST(FilterByBuffer, RejectsNonPositiveThreshold) {
  EXPECT_THROW(filter_by_buffer({}, square(0, 0, 1), 0.0), Error);
}

TEST(FilterByBufferProperties, SubsequenceMonotoneAndOnBoundaryKept) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon prior = cbt::testing::random_polygon(rng, 3 + trial % 5, 50, 250);
    const auto segs = cbt::testing::random_segments(rng, 40, 300.0, 60.0);
    const auto low = filter_by_buffer(segs, prior, 10.0);
    const auto high = filter_by_buffer(segs, prior, 30.0);
    // Subsequence of the input, and everything kept at 10 px is kept at 30 px.
    std::size_t at = 0;
    for (const auto& s : low) {
      while (at < segs.size() && !(segs[at] == s)) ++at;
      ASSERT_LT(at, segs.size());
      ++at;
    }
    for (const auto& s : low) EXPECT_NE(std::find(high.begin(), high.end(), s), high.end());
    // A chord between two points of the same polygon edge lies on the outline.
    auto [a, b] = prior.edge(trial % prior.size());
    const std::vector<LineSegment> on{{a + 0.2 * (b - a), a + 0.7 * (b - a)}};
    EXPECT_EQ(filter_by_buffer(on, prior, 1e-6).size(), 1u);
  }
}
