#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cbt/bdsp.hpp"
#include "cbt/error.hpp"
#include "cbt/geometry.hpp"
#include "cbt/graph.hpp"
#include "cbt/ingest.hpp"

namespace cbt {

enum class FallbackPolicy { HoldPrior, ReportLost };

struct TrackerConfig {
  double buffer_threshold = kDefaultBufferThreshold;
  // Area-similarity gate; 0 disables it.
  double s_e = kDefaultSimilarityGate;
  double merge_tolerance = kDefaultMergeTolerance;
  FallbackPolicy fallback = FallbackPolicy::HoldPrior;
  SearchOptions search;

  void validate() const {
    if (!(buffer_threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "buffer_threshold must be positive");
    if (!(s_e >= 0.0 && s_e < 1.0)) throw Error(ErrorCode::InvalidConfig, "s_e must lie in [0, 1)");
    if (!(merge_tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "merge_tolerance must be positive");
  }
};

enum class TrackStatus { Tracked, Fallback, Lost };

constexpr std::string_view to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tracked: return "tracked";
    case TrackStatus::Fallback: return "fallback";
    case TrackStatus::Lost: return "lost";
  }
  return "unknown";
}

struct FrameCounts {
  std::size_t segments_in = 0;
  std::size_t segments_kept = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t candidates = 0;
};

struct TrackReport {
  std::uint64_t frame_id = 0;
  TrackStatus status = TrackStatus::Lost;
  std::optional<Polygon> boundary;
  // Cost and similarity of the selected boundary, or of the best rejected
  // candidate when the gate emptied the field; NaN when nothing was scored.
  double cost = std::numeric_limits<double>::quiet_NaN();
  double similarity = std::numeric_limits<double>::quiet_NaN();
  double lt_ms = 0.0;  // buffer filtering
  double gt_ms = 0.0;  // graph build + candidate search + selection
  FrameCounts counts;
  int width = 0;
  int height = 0;
  std::string failure;  // empty when Tracked
};

struct TrackerState {
  Polygon prior;
  TrackerConfig config;
  std::vector<TrackReport> history;
};

inline TrackerState init(Polygon initial_boundary, TrackerConfig config = {}) {
  config.validate();
  validate_polygon(initial_boundary, config.merge_tolerance);
  if (!(polygon_area(initial_boundary) > 0.0))
    throw Error(ErrorCode::InvalidPolygon, "initial boundary encloses no area");
  return TrackerState{std::move(initial_boundary), config, {}};
}

/// Optional per-step callbacks, used by the CLI for candidate dumps and
/// rendering. Not needed for tracking itself.
struct StepHooks {
  std::function<void(const FrameRecord&, std::span<const LineSegment> kept)> on_filtered;
  std::function<void(const FrameRecord&, const BoundaryGraph&, std::span<const CycleCandidate>)> on_candidates;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

/// One frame of the pipeline: buffer filter, gap filling, candidate search,
/// gated selection. On success the prior becomes the tracked boundary.
inline TrackReport step(TrackerState& state, const FrameRecord& frame, const StepHooks& hooks = {}) {
  using clock = std::chrono::steady_clock;
  TrackReport report;
  report.frame_id = frame.frame_id;
  report.width = frame.width;
  report.height = frame.height;
  report.counts.segments_in = frame.segments.size();

  auto t0 = clock::now();
  const std::vector<LineSegment> kept = filter_by_buffer(frame.segments, state.prior, state.config.buffer_threshold);
  report.lt_ms = detail::elapsed_ms(t0);
  report.counts.segments_kept = kept.size();
  if (hooks.on_filtered) hooks.on_filtered(frame, kept);

  t0 = clock::now();
  std::optional<Selection> selection;
  try {
    const BoundaryGraph g = build_graph(kept, state.config.merge_tolerance);
    report.counts.vertices = g.vertex_count();
    report.counts.edges = g.edge_count();
    std::vector<CycleCandidate> candidates;
    selection = select_optimal(g, state.prior, state.config.s_e, state.config.search,
                               hooks.on_candidates ? &candidates : nullptr);
    report.counts.candidates = selection->candidate_count;
    if (hooks.on_candidates) hooks.on_candidates(frame, g, candidates);
  } catch (const Error& e) {
    report.failure = std::string(to_string(e.code()));
  }
  report.gt_ms = detail::elapsed_ms(t0);

  if (selection && selection->best) {
    report.cost = selection->best->cost;
    report.similarity = selection->best->similarity.value_or(report.similarity);
  }
  if (selection && selection->ok()) {
    report.status = TrackStatus::Tracked;
    report.boundary = selection->best->polygon;
    state.prior = selection->best->polygon;
  } else {
    if (report.failure.empty()) {
      report.failure = selection && selection->status == SelectionStatus::NoSimilarCandidate ? "NoSimilarCandidate"
                                                                                             : "NoCandidates";
    }
    if (state.config.fallback == FallbackPolicy::HoldPrior) {
      report.status = TrackStatus::Fallback;
      report.boundary = state.prior;
    } else {
      report.status = TrackStatus::Lost;
    }
  }
  state.history.push_back(report);
  return report;
}

}  // namespace cbt
