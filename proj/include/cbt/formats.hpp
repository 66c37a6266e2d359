#pragma once

// JSON encodings shared by the CLI subcommands:
//   polygon file      [[x, y], ...]
//   ground truth      JSON-lines {"frame_id", "polygon": [[x, y], ...]} (+ optional width/height)
//   track report      JSON-lines, one TrackReport per frame
//   candidate dump    JSON-lines, one CycleCandidate per line

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbt/bdsp.hpp"
#include "cbt/error.hpp"
#include "cbt/geometry.hpp"
#include "cbt/tracker.hpp"

namespace cbt {

inline nlohmann::json polygon_to_json(const Polygon& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : p.vertices) out.push_back({v.x, v.y});
  return out;
}

inline Polygon polygon_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("polygon must be an array of [x, y] pairs");
  Polygon p;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw std::invalid_argument("polygon vertex must be [x, y]");
    p.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return p;
}

inline Polygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    Polygon p = polygon_from_json(nlohmann::json::parse(in));
    validate_polygon(p);
    return p;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void save_polygon(const std::string& path, const Polygon& p) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << polygon_to_json(p).dump() << '\n';
}

struct GroundTruthFrame {
  Polygon polygon;
  std::optional<int> width;
  std::optional<int> height;
};

using GroundTruth = std::map<std::uint64_t, GroundTruthFrame>;

namespace detail {

template <typename Fn>
void for_each_json_line(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline nlohmann::json real_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline double real_or_nan(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.at(key).get<double>();
}

}  // namespace detail

inline GroundTruth load_ground_truth(const std::string& path) {
  GroundTruth gt;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) {
    GroundTruthFrame f;
    f.polygon = polygon_from_json(j.at("polygon"));
    if (j.contains("width")) f.width = j.at("width").get<int>();
    if (j.contains("height")) f.height = j.at("height").get<int>();
    const auto id = j.at("frame_id").get<std::uint64_t>();
    if (!gt.emplace(id, std::move(f)).second)
      throw Error(ErrorCode::DuplicateFrame, "ground truth repeats frame_id " + std::to_string(id));
  });
  return gt;
}

inline void save_ground_truth(const std::string& path, const std::vector<Polygon>& polygons, int width, int height) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  for (std::size_t k = 0; k < polygons.size(); ++k) {
    out << nlohmann::json{{"frame_id", k}, {"width", width}, {"height", height}, {"polygon", polygon_to_json(polygons[k])}}
               .dump()
        << '\n';
  }
}

inline nlohmann::json report_to_json(const TrackReport& r) {
  return {{"frame_id", r.frame_id},
          {"status", std::string(to_string(r.status))},
          {"boundary", r.boundary ? polygon_to_json(*r.boundary) : nlohmann::json()},
          {"cost", detail::real_or_null(r.cost)},
          {"similarity", detail::real_or_null(r.similarity)},
          {"lt_ms", r.lt_ms},
          {"gt_ms", r.gt_ms},
          {"segments_in", r.counts.segments_in},
          {"segments_kept", r.counts.segments_kept},
          {"vertices", r.counts.vertices},
          {"edges", r.counts.edges},
          {"candidates", r.counts.candidates},
          {"width", r.width},
          {"height", r.height},
          {"failure", r.failure}};
}

inline TrackReport report_from_json(const nlohmann::json& j) {
  TrackReport r;
  r.frame_id = j.at("frame_id").get<std::uint64_t>();
  const std::string status = j.at("status").get<std::string>();
  if (status == "tracked") {
    r.status = TrackStatus::Tracked;
  } else if (status == "fallback") {
    r.status = TrackStatus::Fallback;
  } else if (status == "lost") {
    r.status = TrackStatus::Lost;
  } else {
    throw std::invalid_argument("unknown status '" + status + "'");
  }
  if (j.contains("boundary") && !j.at("boundary").is_null()) r.boundary = polygon_from_json(j.at("boundary"));
  r.cost = detail::real_or_nan(j, "cost");
  r.similarity = detail::real_or_nan(j, "similarity");
  r.lt_ms = j.value("lt_ms", 0.0);
  r.gt_ms = j.value("gt_ms", 0.0);
  r.counts.segments_in = j.value("segments_in", std::size_t{0});
  r.counts.segments_kept = j.value("segments_kept", std::size_t{0});
  r.counts.vertices = j.value("vertices", std::size_t{0});
  r.counts.edges = j.value("edges", std::size_t{0});
  r.counts.candidates = j.value("candidates", std::size_t{0});
  r.width = j.value("width", 0);
  r.height = j.value("height", 0);
  r.failure = j.value("failure", std::string());
  return r;
}

inline std::vector<TrackReport> load_reports(const std::string& path) {
  std::vector<TrackReport> out;
  detail::for_each_json_line(path, [&](const nlohmann::json& j) { out.push_back(report_from_json(j)); });
  return out;
}

inline nlohmann::json candidate_to_json(std::uint64_t frame_id, const CycleCandidate& c) {
  return {{"frame_id", frame_id},
          {"seed_edge", c.seed_edge},
          {"anchor_vertex", c.anchor_vertex},
          {"edge_ids", c.edge_ids},
          {"gap_length", c.gap_length},
          {"area", c.area},
          {"cost", c.cost},
          {"similarity", c.similarity ? nlohmann::json(*c.similarity) : nlohmann::json()},
          {"polygon", polygon_to_json(c.polygon)}};
}

}  // namespace cbt
