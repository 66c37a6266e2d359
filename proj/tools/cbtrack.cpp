// cbtrack: command-line front end for the closed boundary tracker.
//
//   cbtrack synth  --spec s.json --out-seq seq.jsonl --out-gt gt.jsonl
//   cbtrack track  --sequence seq.jsonl --init init.json --out reports.jsonl
//   cbtrack eval   --reports reports.jsonl --gt gt.jsonl --out curve.csv
//   cbtrack render --sequence seq.jsonl --init init.json --layers graph --out-dir svg/
//   cbtrack bench  --sequence seq.jsonl --init init.json
//
// Exit status: 0 on success, 1 when --strict and some frame was not tracked,
// 2 on usage, parse or input errors.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cbt/cbt.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLost = 1;
constexpr int kExitInput = 2;

struct TrackerFlags {
  double threshold = cbt::kDefaultBufferThreshold;
  double s_e = cbt::kDefaultSimilarityGate;
  std::string fallback = "hold";
  unsigned threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "Buffer threshold in pixels")->capture_default_str();
    cmd->add_option("--se", s_e, "Area-similarity gate in [0, 1); 0 disables it")->capture_default_str();
    cmd->add_option("--fallback", fallback, "What to report when no candidate passes")
        ->check(CLI::IsMember({"hold", "lost"}))
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for the candidate search")->capture_default_str();
  }

  cbt::TrackerConfig config() const {
    cbt::TrackerConfig c;
    c.buffer_threshold = threshold;
    c.s_e = s_e;
    c.fallback = fallback == "lost" ? cbt::FallbackPolicy::ReportLost : cbt::FallbackPolicy::HoldPrior;
    c.search.threads = std::max(1u, threads);
    return c;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw cbt::Error(cbt::ErrorCode::Io, "cannot write " + path);
  out << std::setprecision(17);
  return out;
}

// "first:last:step", e.g. 1:30:1.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw cbt::Error(cbt::ErrorCode::ParseError, "bad --ep-grid: " + text);
    parts.push_back(v);
  }
  if (parts.size() != 3) throw cbt::Error(cbt::ErrorCode::ParseError, "--ep-grid wants first:last:step");
  return cbt::threshold_grid(parts[0], parts[1], parts[2]);
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto all = std::make_pair(std::uint64_t{0}, std::numeric_limits<std::uint64_t>::max());
  if (text.empty()) return all;
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    return {lo.empty() ? all.first : std::stoull(lo), hi.empty() ? all.second : std::stoull(hi)};
  } catch (const std::exception&) {
    throw cbt::Error(cbt::ErrorCode::ParseError, "bad --frames range: " + text);
  }
}

// ---------------------------------------------------------------- synth

int run_synth(const std::string& spec_path, const std::string& seq_path, const std::string& gt_path) {
  std::ifstream in(spec_path);
  if (!in) throw cbt::Error(cbt::ErrorCode::Io, "cannot open " + spec_path);
  const cbt::SynthSpec spec = cbt::synth_spec_from_json(nlohmann::json::parse(in));
  const cbt::SynthSequence seq = cbt::generate(spec);
  cbt::save_sequence(seq_path, seq.frames);
  cbt::save_ground_truth(gt_path, seq.ground_truth, spec.width, spec.height);
  std::cerr << "wrote " << seq.frames.size() << " frames\n";
  return kExitOk;
}

// ---------------------------------------------------------------- track

struct TrackArgs {
  std::string sequence, init, out, dump;
  bool strict = false;
  TrackerFlags tracker;
};

int run_track(const TrackArgs& a) {
  const auto frames = cbt::load_sequence(a.sequence);
  cbt::TrackerState state = cbt::init(cbt::load_polygon(a.init), a.tracker.config());
  std::ofstream out = open_out(a.out);
  std::ofstream dump;
  cbt::StepHooks hooks;
  if (!a.dump.empty()) {
    dump = open_out(a.dump);
    hooks.on_candidates = [&](const cbt::FrameRecord& f, const cbt::BoundaryGraph&,
                              std::span<const cbt::CycleCandidate> cands) {
      for (const auto& c : cands) dump << cbt::candidate_to_json(f.frame_id, c).dump() << '\n';
    };
  }
  std::size_t untracked = 0;
  for (const auto& f : frames) {
    const cbt::TrackReport r = cbt::step(state, f, hooks);
    untracked += r.status != cbt::TrackStatus::Tracked;
    out << cbt::report_to_json(r).dump() << '\n';
  }
  std::cerr << "tracked " << frames.size() - untracked << " of " << frames.size() << " frames\n";
  return a.strict && untracked > 0 ? kExitLost : kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string reports, gt, grid = "1:30:1", out, per_frame;
};

int run_eval(const EvalArgs& a) {
  const auto thresholds = parse_grid(a.grid);
  const cbt::GroundTruth gt = cbt::load_ground_truth(a.gt);
  std::map<std::uint64_t, cbt::TrackReport> by_frame;
  for (auto& r : cbt::load_reports(a.reports)) by_frame[r.frame_id] = std::move(r);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> errors;
  std::vector<std::pair<std::uint64_t, double>> rows;
  for (const auto& [id, truth] : gt) {
    double e = inf;
    const auto it = by_frame.find(id);
    if (it != by_frame.end() && it->second.boundary) {
      const int w = truth.width.value_or(it->second.width), h = truth.height.value_or(it->second.height);
      if (w <= 0 || h <= 0)
        throw cbt::Error(cbt::ErrorCode::ParseError, "no frame size for frame " + std::to_string(id));
      e = cbt::alignment_error(*it->second.boundary, truth.polygon, w, h);
    }
    errors.push_back(e);
    rows.emplace_back(id, e);
  }
  const cbt::SuccessCurve curve = cbt::success_curve(errors, thresholds);
  std::ofstream out = open_out(a.out);
  out << "e_p,success_rate\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) out << curve.thresholds[i] << ',' << curve.rates[i] << '\n';
  if (!a.per_frame.empty()) {
    std::ofstream pf = open_out(a.per_frame);
    pf << "frame_id,alignment_error\n";
    for (auto [id, e] : rows) pf << id << ',' << (std::isfinite(e) ? std::to_string(e) : std::string("inf")) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string sequence, init, gt, out_dir, frames;
  std::vector<std::string> layers;
  TrackerFlags tracker;
};

int run_render(const RenderArgs& a) {
  const std::set<std::string> layers(a.layers.begin(), a.layers.end());
  if (layers.empty()) throw cbt::Error(cbt::ErrorCode::InvalidConfig, "--layers needs at least one layer");
  const auto [first, last] = parse_range(a.frames);
  const auto frames = cbt::load_sequence(a.sequence);
  cbt::GroundTruth gt;
  if (layers.count("ground_truth")) {
    if (a.gt.empty()) throw cbt::Error(cbt::ErrorCode::InvalidConfig, "layer ground_truth needs --gt");
    gt = cbt::load_ground_truth(a.gt);
  }
  cbt::TrackerState state = cbt::init(cbt::load_polygon(a.init), a.tracker.config());
  std::filesystem::create_directories(a.out_dir);

  std::size_t written = 0;
  for (const auto& f : frames) {
    const bool wanted = f.frame_id >= first && f.frame_id <= last;
    std::optional<cbt::BoundaryGraph> graph;
    std::vector<cbt::CycleCandidate> cands;
    cbt::StepHooks hooks;
    if (wanted) {
      hooks.on_candidates = [&](const cbt::FrameRecord&, const cbt::BoundaryGraph& g,
                                std::span<const cbt::CycleCandidate> c) {
        graph = g;
        cands.assign(c.begin(), c.end());
      };
    }
    const cbt::Polygon prior = state.prior;
    const cbt::TrackReport r = cbt::step(state, f, hooks);
    if (!wanted) continue;

    cbt::SvgDocument svg(f.width, f.height);
    if (layers.count("buffer")) {
      svg.begin_group("buffer");
      svg.polygon(prior, "#ffd27f", 2.0 * a.tracker.threshold, "stroke-opacity=\"0.4\" stroke-linejoin=\"round\"");
      svg.end_group();
    }
    if (layers.count("segments")) {
      svg.begin_group("segments");
      for (const auto& s : f.segments) svg.line(s.a, s.b, "#777777", 1.0);
      svg.end_group();
    }
    if (layers.count("graph") && graph) svg.graph(*graph);
    if (layers.count("candidates")) {
      svg.begin_group("candidates");
      for (const auto& c : cands) svg.polygon(c.polygon, "#2a9d8f", 1.0, "stroke-dasharray=\"4 3\"");
      svg.end_group();
    }
    if (layers.count("ground_truth")) {
      if (const auto it = gt.find(f.frame_id); it != gt.end()) {
        svg.begin_group("ground_truth");
        svg.polygon(it->second.polygon, "#00a000", 1.5);
        svg.end_group();
      }
    }
    if (layers.count("boundary") && r.boundary) {
      svg.begin_group("boundary");
      svg.polygon(*r.boundary, r.status == cbt::TrackStatus::Tracked ? "#111111" : "#999999", 2.5);
      svg.end_group();
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06llu.svg", static_cast<unsigned long long>(f.frame_id));
    svg.save((std::filesystem::path(a.out_dir) / name).string());
    ++written;
  }
  std::cerr << "wrote " << written << " SVG files to " << a.out_dir << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string sequence, init, gt, out;
  TrackerFlags tracker;
};

int run_bench(const BenchArgs& a) {
  const auto frames = cbt::load_sequence(a.sequence);
  if (frames.empty()) throw cbt::Error(cbt::ErrorCode::EmptyList, "sequence has no frames");
  cbt::Polygon start;
  if (!a.init.empty()) {
    start = cbt::load_polygon(a.init);
  } else if (!a.gt.empty()) {
    const auto gt = cbt::load_ground_truth(a.gt);
    const auto it = gt.find(frames.front().frame_id);
    if (it == gt.end()) throw cbt::Error(cbt::ErrorCode::InvalidConfig, "ground truth lacks the first frame");
    start = it->second.polygon;
  } else {
    throw cbt::Error(cbt::ErrorCode::InvalidConfig, "bench needs --init or --gt for the starting boundary");
  }
  cbt::TrackerState state = cbt::init(start, a.tracker.config());

  std::ostringstream table;
  table << std::setprecision(6);
  table << "frame_id,edges,arcs,nodes,lt_ms,gt_ms,fps\n";
  double sum_edges = 0, sum_nodes = 0, sum_lt = 0, sum_gt = 0, sum_fps = 0;
  for (const auto& f : frames) {
    const cbt::TrackReport r = cbt::step(state, f);
    const double fps = 1000.0 / std::max(r.lt_ms + r.gt_ms, 1e-6);
    table << f.frame_id << ',' << r.counts.edges << ',' << 2 * r.counts.edges << ',' << r.counts.vertices << ','
          << r.lt_ms << ',' << r.gt_ms << ',' << fps << '\n';
    sum_edges += static_cast<double>(r.counts.edges);
    sum_nodes += static_cast<double>(r.counts.vertices);
    sum_lt += r.lt_ms;
    sum_gt += r.gt_ms;
    sum_fps += fps;
  }
  const double n = static_cast<double>(frames.size());
  table << "mean," << sum_edges / n << ',' << 2 * sum_edges / n << ',' << sum_nodes / n << ',' << sum_lt / n << ','
        << sum_gt / n << ',' << sum_fps / n << '\n';
  if (a.out.empty()) {
    std::cout << table.str();
  } else {
    open_out(a.out) << table.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed boundary tracking over line-segment frames"};
  app.require_subcommand(1);

  std::string spec_path, seq_out, gt_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence and its ground truth");
  synth->add_option("--spec", spec_path, "Scene description (JSON)")->required();
  synth->add_option("--out-seq", seq_out, "Segment sequence to write (JSON lines)")->required();
  synth->add_option("--out-gt", gt_out, "Ground truth to write (JSON lines)")->required();

  TrackArgs track_args;
  auto* track = app.add_subcommand("track", "Track a boundary through a segment sequence");
  track->add_option("--sequence", track_args.sequence, "Segment sequence (JSON lines)")->required();
  track->add_option("--init", track_args.init, "Initial boundary: JSON array of [x, y]")->required();
  track->add_option("--out", track_args.out, "Report file to write (JSON lines)")->required();
  track->add_option("--dump-candidates", track_args.dump, "Write every candidate cycle (JSON lines)");
  track->add_flag("--strict", track_args.strict, "Exit 1 if any frame is not tracked");
  track_args.tracker.attach(track);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score reports against ground truth");
  eval->add_option("--reports", eval_args.reports, "Report file from track")->required();
  eval->add_option("--gt", eval_args.gt, "Ground truth (JSON lines of frame_id, polygon)")->required();
  eval->add_option("--ep-grid", eval_args.grid, "Error thresholds as first:last:step")->capture_default_str();
  eval->add_option("--out", eval_args.out, "Success curve CSV to write")->required();
  eval->add_option("--per-frame", eval_args.per_frame, "Optional per-frame alignment error CSV");

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "Write one SVG overlay per frame");
  render->add_option("--sequence", render_args.sequence, "Segment sequence (JSON lines)")->required();
  render->add_option("--init", render_args.init, "Initial boundary: JSON array of [x, y]")->required();
  render->add_option("--gt", render_args.gt, "Ground truth, for the ground_truth layer");
  render->add_option("--layers", render_args.layers, "Comma-separated layers")
      ->delimiter(',')
      ->check(CLI::IsMember({"segments", "buffer", "graph", "candidates", "boundary", "ground_truth"}))
      ->required();
  render->add_option("--frames", render_args.frames, "Frame range first:last (inclusive)");
  render->add_option("--out-dir", render_args.out_dir, "Directory for the SVG files")->required();
  render_args.tracker.attach(render);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Per-frame graph size and timing table");
  bench->add_option("--sequence", bench_args.sequence, "Segment sequence (JSON lines)")->required();
  bench->add_option("--init", bench_args.init, "Initial boundary: JSON array of [x, y]");
  bench->add_option("--gt", bench_args.gt, "Ground truth; its first frame is used when --init is absent");
  bench->add_option("--out", bench_args.out, "CSV to write (default: stdout)");
  bench_args.tracker.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << failed->help();
    return kExitInput;
  }

  try {
    if (*synth) return run_synth(spec_path, seq_out, gt_out);
    if (*track) return run_track(track_args);
    if (*eval) return run_eval(eval_args);
    if (*render) return run_render(render_args);
    if (*bench) return run_bench(bench_args);
  } catch (const cbt::Error& e) {
    std::cerr << "error [" << cbt::to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
