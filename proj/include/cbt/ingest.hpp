#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"

namespace cbt {

inline constexpr double kDefaultBufferThreshold = 20.0;

struct FrameRecord {
  std::uint64_t frame_id = 0;
  int width = 0;
  int height = 0;
  std::vector<LineSegment> segments;  // all Detected
};

/// Keeps the segments whose mean distance (two endpoints and midpoint) to the
/// prior outline is below `threshold`. Input order is preserved.
inline std::vector<LineSegment> filter_by_buffer(std::span<const LineSegment> segments, const Polygon& prior,
                                                 double threshold = kDefaultBufferThreshold) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "buffer threshold must be positive");
  std::vector<LineSegment> kept;
  for (const LineSegment& s : segments) {
    const double mean = (point_to_polygon_distance(s.a, prior) +
                         point_to_polygon_distance(midpoint(s.a, s.b), prior) +
                         point_to_polygon_distance(s.b, prior)) /
                        3.0;
    if (mean < threshold) kept.push_back(s);
  }
  return kept;
}

namespace detail {

inline Point2 clamp_to_frame(Point2 p, int width, int height) {
  return {std::clamp(p.x, 0.0, static_cast<double>(width)), std::clamp(p.y, 0.0, static_cast<double>(height))};
}

inline double json_real(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " is not a number");
  return j.get<double>();
}

}  // namespace detail

/// Parses one sequence line:
///   {"frame_id": int, "width": int, "height": int, "segments": [[x1,y1,x2,y2], ...]}
/// Endpoints are clamped into the frame; segments that collapse under the
/// merge tolerance are dropped.
inline FrameRecord parse_frame(const std::string& line, double merge_tolerance = kDefaultMergeTolerance) {
  const nlohmann::json j = nlohmann::json::parse(line);
  if (!j.is_object()) throw std::invalid_argument("frame record must be a JSON object");
  FrameRecord f;
  const auto& id = j.at("frame_id");
  if (!id.is_number_integer() || id.get<std::int64_t>() < 0)
    throw std::invalid_argument("frame_id must be a non-negative integer");
  f.frame_id = id.get<std::uint64_t>();
  f.width = j.at("width").get<int>();
  f.height = j.at("height").get<int>();
  if (f.width <= 0 || f.height <= 0) throw std::invalid_argument("width and height must be positive");
  for (const auto& s : j.at("segments")) {
    if (!s.is_array() || s.size() != 4) throw std::invalid_argument("segment must be [x1,y1,x2,y2]");
    LineSegment seg{{detail::json_real(s[0], "x1"), detail::json_real(s[1], "y1")},
                    {detail::json_real(s[2], "x2"), detail::json_real(s[3], "y2")},
                    SegmentKind::Detected};
    seg.a = detail::clamp_to_frame(seg.a, f.width, f.height);
    seg.b = detail::clamp_to_frame(seg.b, f.width, f.height);
    if (is_degenerate(seg, merge_tolerance)) continue;
    f.segments.push_back(seg);
  }
  return f;
}

inline nlohmann::json frame_to_json(const FrameRecord& f) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : f.segments) segs.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
  return {{"frame_id", f.frame_id}, {"width", f.width}, {"height", f.height}, {"segments", segs}};
}

/// Reads a JSON-lines sequence; frames are returned in ascending frame_id.
inline std::vector<FrameRecord> read_sequence(std::istream& in, double merge_tolerance = kDefaultMergeTolerance) {
  std::vector<FrameRecord> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      frames.push_back(parse_frame(line, merge_tolerance));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const FrameRecord& a, const FrameRecord& b) { return a.frame_id < b.frame_id; });
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame_id == frames[i - 1].frame_id)
      throw Error(ErrorCode::DuplicateFrame, "frame_id " + std::to_string(frames[i].frame_id) + " repeated");
  }
  return frames;
}

inline std::vector<FrameRecord> load_sequence(const std::string& path,
                                              double merge_tolerance = kDefaultMergeTolerance) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_sequence(in, merge_tolerance);
}

inline void write_sequence(std::ostream& out, std::span<const FrameRecord> frames) {
  for (const auto& f : frames) out << frame_to_json(f).dump() << '\n';
}

inline void save_sequence(const std::string& path, std::span<const FrameRecord> frames) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_sequence(out, frames);
}

}  // namespace cbt
