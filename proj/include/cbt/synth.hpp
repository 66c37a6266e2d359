#pragma once

// Deterministic synthetic sequences: a rigidly moving ground-truth polygon
// whose edges are broken into detected segments with gaps, jitter and
// dropouts, plus clutter.
//
// Random stream: std::mt19937_64 seeded with `seed`. Uniform reals take the
// top 53 bits of one draw; normals use Box-Muller on two uniforms, cosine
// branch only. Draw order per frame: boundary pieces (dropout, then 4
// jitter normals, per piece, edge by edge), decoys, clutter. Sequence files
// are the cross-implementation contract, not this stream.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cbt/error.hpp"
#include "cbt/geometry.hpp"
#include "cbt/ingest.hpp"

namespace cbt {

struct RigidMotion {
  double tx = 0.0;        // px per frame
  double ty = 0.0;        // px per frame
  double rotation = 0.0;  // rad per frame, about the base polygon's vertex centroid
  double scale = 1.0;     // multiplicative per frame
};

struct Fragmentation {
  int segments_per_edge = 1;
  double gap_fraction = 0.0;  // share of each piece removed, centred
};

struct Clutter {
  int count_per_frame = 0;
  double min_length = 10.0;
  double max_length = 40.0;
  // 0: midpoints uniform over the frame. > 0: midpoints within this normal
  // offset of a uniformly chosen boundary point.
  double band = 0.0;
};

// Small closed squares of detected segments near the boundary; each is a
// zero-gap cycle that competes with the true boundary on cost alone.
struct Decoys {
  int count_per_frame = 0;
  double size = 12.0;
};

struct SynthSpec {
  std::uint64_t seed = 0;
  int frames = 1;
  int width = 640;
  int height = 480;
  Polygon base_polygon;
  RigidMotion motion;
  Fragmentation fragmentation;
  double jitter_sigma = 0.0;
  double dropout_prob = 0.0;
  Clutter clutter;
  Decoys decoys;
};

struct SynthSequence {
  std::vector<FrameRecord> frames;
  std::vector<Polygon> ground_truth;
};

class SynthRandom {
 public:
  explicit SynthRandom(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// Ground-truth polygon of frame `k`.
inline Polygon transform_polygon(const Polygon& base, const RigidMotion& m, int k) {
  const Point2 c = polygon_centroid(base);
  const double angle = m.rotation * k;
  const double s = std::pow(m.scale, k);
  const double cs = std::cos(angle), sn = std::sin(angle);
  Polygon out;
  for (const Point2& p : base.vertices) {
    const Point2 r = p - c;
    out.vertices.push_back({c.x + m.tx * k + s * (cs * r.x - sn * r.y), c.y + m.ty * k + s * (sn * r.x + cs * r.y)});
  }
  return out;
}

inline void validate(const SynthSpec& spec) {
  if (spec.frames < 1) throw Error(ErrorCode::InvalidConfig, "frames must be >= 1");
  if (spec.width <= 0 || spec.height <= 0) throw Error(ErrorCode::InvalidConfig, "frame size must be positive");
  validate_polygon(spec.base_polygon);
  if (spec.fragmentation.segments_per_edge < 1) throw Error(ErrorCode::InvalidConfig, "segments_per_edge < 1");
  if (!(spec.fragmentation.gap_fraction >= 0.0 && spec.fragmentation.gap_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "gap_fraction must lie in [0, 1)");
  if (!(spec.dropout_prob >= 0.0 && spec.dropout_prob < 1.0))
    throw Error(ErrorCode::InvalidConfig, "dropout_prob must lie in [0, 1)");
  if (spec.jitter_sigma < 0.0) throw Error(ErrorCode::InvalidConfig, "jitter_sigma must be >= 0");
  if (spec.clutter.count_per_frame < 0 || spec.clutter.min_length < 0.0 ||
      spec.clutter.max_length < spec.clutter.min_length)
    throw Error(ErrorCode::InvalidConfig, "bad clutter parameters");
  if (spec.decoys.count_per_frame < 0 || !(spec.decoys.size > 0.0))
    throw Error(ErrorCode::InvalidConfig, "bad decoy parameters");
}

namespace detail {

inline Point2 point_on_outline(const Polygon& p, double t) {
  // t in [0, perimeter)
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto [a, b] = p.edge(i);
    const double len = distance(a, b);
    if (t <= len || i + 1 == p.size()) return a + (std::min(t, len) / len) * (b - a);
    t -= len;
  }
  return p[0];
}

inline void push_clamped(FrameRecord& f, Point2 a, Point2 b) {
  LineSegment s{clamp_to_frame(a, f.width, f.height), clamp_to_frame(b, f.width, f.height), SegmentKind::Detected};
  if (!is_degenerate(s)) f.segments.push_back(s);
}

}  // namespace detail

inline SynthSequence generate(const SynthSpec& spec) {
  validate(spec);
  SynthSequence seq;
  for (int k = 0; k < spec.frames; ++k) {
    Polygon gt = transform_polygon(spec.base_polygon, spec.motion, k);
    for (const Point2& v : gt.vertices) {
      if (v.x < 0.0 || v.y < 0.0 || v.x > spec.width || v.y > spec.height)
        throw Error(ErrorCode::PolygonEscapesFrame, "ground truth leaves the frame at frame " + std::to_string(k));
    }
    seq.ground_truth.push_back(std::move(gt));
  }

  SynthRandom rng(spec.seed);
  const int pieces = spec.fragmentation.segments_per_edge;
  const double shrink = 0.5 * spec.fragmentation.gap_fraction;
  for (int k = 0; k < spec.frames; ++k) {
    const Polygon& gt = seq.ground_truth[static_cast<std::size_t>(k)];
    FrameRecord f;
    f.frame_id = static_cast<std::uint64_t>(k);
    f.width = spec.width;
    f.height = spec.height;

    for (std::size_t e = 0; e < gt.size(); ++e) {
      auto [a, b] = gt.edge(e);
      for (int i = 0; i < pieces; ++i) {
        const double t0 = static_cast<double>(i) / pieces, t1 = static_cast<double>(i + 1) / pieces;
        const double s0 = t0 + shrink * (t1 - t0), s1 = t1 - shrink * (t1 - t0);
        const bool dropped = rng.uniform() < spec.dropout_prob;
        const Point2 ja{rng.normal(spec.jitter_sigma), rng.normal(spec.jitter_sigma)};
        const Point2 jb{rng.normal(spec.jitter_sigma), rng.normal(spec.jitter_sigma)};
        if (dropped) continue;
        detail::push_clamped(f, a + s0 * (b - a) + ja, a + s1 * (b - a) + jb);
      }
    }

    const double perimeter = polygon_perimeter(gt);
    for (int d = 0; d < spec.decoys.count_per_frame; ++d) {
      const Point2 c = detail::point_on_outline(gt, rng.uniform(0.0, perimeter));
      const double angle = rng.uniform(0.0, 0.5 * std::numbers::pi);
      const double r = spec.decoys.size / std::numbers::sqrt2;
      Point2 corner[4];
      for (int q = 0; q < 4; ++q) {
        const double phi = angle + q * 0.5 * std::numbers::pi;
        corner[q] = {c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
      }
      for (int q = 0; q < 4; ++q) detail::push_clamped(f, corner[q], corner[(q + 1) % 4]);
    }

    for (int c = 0; c < spec.clutter.count_per_frame; ++c) {
      Point2 mid;
      if (spec.clutter.band > 0.0) {
        const double t = rng.uniform(0.0, perimeter);
        const Point2 on = detail::point_on_outline(gt, t);
        const double offset = rng.uniform(-spec.clutter.band, spec.clutter.band);
        const Point2 ahead = detail::point_on_outline(gt, std::fmod(t + 1e-3, perimeter));
        Point2 dir = ahead - on;
        const double len = std::hypot(dir.x, dir.y);
        const Point2 normal = len > 0.0 ? Point2{-dir.y / len, dir.x / len} : Point2{0.0, 1.0};
        mid = on + offset * normal;
      } else {
        mid = {rng.uniform(0.0, spec.width), rng.uniform(0.0, spec.height)};
      }
      const double theta = rng.uniform(0.0, std::numbers::pi);
      const double half = 0.5 * rng.uniform(spec.clutter.min_length, spec.clutter.max_length);
      const Point2 dir{std::cos(theta), std::sin(theta)};
      detail::push_clamped(f, mid - half * dir, mid + half * dir);
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

// JSON form of SynthSpec (the `synth --spec` file). Every field but
// base_polygon is optional.
inline SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  SynthSpec s;
  s.seed = j.value("seed", s.seed);
  s.frames = j.value("frames", s.frames);
  if (j.contains("frame_size")) {
    s.width = j.at("frame_size").at(0).get<int>();
    s.height = j.at("frame_size").at(1).get<int>();
  }
  for (const auto& v : j.at("base_polygon")) s.base_polygon.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  if (j.contains("motion")) {
    const auto& m = j.at("motion");
    s.motion.tx = m.value("tx", 0.0);
    s.motion.ty = m.value("ty", 0.0);
    s.motion.rotation = m.value("rotation", 0.0);
    s.motion.scale = m.value("scale", 1.0);
  }
  if (j.contains("fragmentation")) {
    const auto& fr = j.at("fragmentation");
    s.fragmentation.segments_per_edge = fr.value("segments_per_edge", 1);
    s.fragmentation.gap_fraction = fr.value("gap_fraction", 0.0);
  }
  s.jitter_sigma = j.value("jitter_sigma", 0.0);
  s.dropout_prob = j.value("dropout_prob", 0.0);
  if (j.contains("clutter")) {
    const auto& c = j.at("clutter");
    s.clutter.count_per_frame = c.value("count_per_frame", 0);
    if (c.contains("length_range")) {
      s.clutter.min_length = c.at("length_range").at(0).get<double>();
      s.clutter.max_length = c.at("length_range").at(1).get<double>();
    }
    s.clutter.band = c.value("band", 0.0);
  }
  if (j.contains("decoys")) {
    s.decoys.count_per_frame = j.at("decoys").value("count_per_frame", 0);
    s.decoys.size = j.at("decoys").value("size", s.decoys.size);
  }
  return s;
}

inline nlohmann::json synth_spec_to_json(const SynthSpec& s) {
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& v : s.base_polygon.vertices) poly.push_back({v.x, v.y});
  return {{"seed", s.seed},
          {"frames", s.frames},
          {"frame_size", {s.width, s.height}},
          {"base_polygon", poly},
          {"motion", {{"tx", s.motion.tx}, {"ty", s.motion.ty}, {"rotation", s.motion.rotation}, {"scale", s.motion.scale}}},
          {"fragmentation",
           {{"segments_per_edge", s.fragmentation.segments_per_edge}, {"gap_fraction", s.fragmentation.gap_fraction}}},
          {"jitter_sigma", s.jitter_sigma},
          {"dropout_prob", s.dropout_prob},
          {"clutter",
           {{"count_per_frame", s.clutter.count_per_frame},
            {"length_range", {s.clutter.min_length, s.clutter.max_length}},
            {"band", s.clutter.band}}},
          {"decoys", {{"count_per_frame", s.decoys.count_per_frame}, {"size", s.decoys.size}}}};
}

}  // namespace cbt
