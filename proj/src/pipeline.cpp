#include "shadowseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include "shadowseg/error.hpp"
#include "shadowseg/image_io.hpp"

namespace fs = std::filesystem;

namespace shadowseg {

namespace {

std::optional<long long> trailing_number(const std::string& stem) {
  std::size_t start = stem.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(stem[start - 1]))) --start;
  if (start == stem.size()) return std::nullopt;
  // Long digit runs cannot be frame numbers; treat them as absent.
  if (stem.size() - start > 18) return std::nullopt;
  return std::stoll(stem.substr(start));
}

unsigned worker_count(unsigned configured, std::size_t jobs) {
  unsigned n = configured ? configured : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, n). After a failure no new index beyond it is
// started; the failure with the lowest index is rethrown.
template <class Body>
void for_each_index(std::size_t n, unsigned threads, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_failed{n};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || i > first_failed.load()) return;
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        std::size_t cur = first_failed.load();
        while (i < cur && !first_failed.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const unsigned workers = worker_count(threads, n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

struct LoadedPair {
  RgbFrame prev;
  RgbFrame cur;
};

LoadedPair load_pair(const FrameEntry& prev, const FrameEntry& cur) {
  LoadedPair p{load_frame(prev.path), load_frame(cur.path)};
  if (!same_size(p.prev, p.cur)) {
    throw ValidationError("frame " + cur.path.string() + " differs in size from " +
                          prev.path.string());
  }
  return p;
}

void require_ground_truth(const PipelineConfig& cfg, const char* what) {
  if (!cfg.has_ground_truth()) {
    throw UsageError("gt_cast", std::string(what) + " needs gt_cast and gt_self directories");
  }
}

// Pairs whose frame t+1 has ground truth, fully processed.
struct TruthPair {
  PairStages stages;
  GroundTruth truth;
};

std::vector<TruthPair> process_truth_pairs(const PipelineConfig& cfg,
                                           const std::vector<FrameEntry>& frames,
                                           const GroundTruthIndex& gt, double threshold) {
  const std::size_t pairs = frames.size() - 1;
  std::vector<std::optional<TruthPair>> slots(pairs);
  const MotionThreshold t(threshold);
  const StructuringElement se = cfg.structuring_element();
  for_each_index(pairs, cfg.threads, [&](std::size_t i) {
    auto truth = gt.load(frames[i + 1]);
    if (!truth) return;
    auto loaded = load_pair(frames[i], frames[i + 1]);
    if (!same_size(*truth, loaded.cur)) {
      throw ValidationError("ground truth for " + frames[i + 1].id +
                            " differs in size from the frame");
    }
    slots[i] = TruthPair{process_pair(frames[i + 1].id, loaded.prev, loaded.cur, t,
                                      cfg.erosion_passes, se),
                         std::move(*truth)};
  });
  std::vector<TruthPair> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  if (out.empty()) {
    throw UsageError("gt_cast", "no ground-truth file matches any frame t+1 of the sequence");
  }
  return out;
}

}  // namespace

PairStages process_pair(std::string frame_id, const RgbFrame& prev, const RgbFrame& cur,
                        MotionThreshold threshold, unsigned erosion_passes,
                        const StructuringElement& se) {
  PairStages s;
  s.frame_id = std::move(frame_id);
  s.motion = segment_motion(prev, cur, threshold);
  s.filled = postprocess(cur, s.motion.mask, erosion_passes, se);
  s.eigen = eigen_sum_map(s.filled);
  return s;
}

std::vector<FrameEntry> select_frames(const PipelineConfig& cfg) {
  if (cfg.input_dir.empty()) throw UsageError("input", "no input directory given");
  const auto paths = list_frames(cfg.input_dir);
  std::vector<FrameEntry> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    FrameEntry e;
    e.path = paths[i];
    e.id = paths[i].stem().string();
    e.number = trailing_number(e.id).value_or(static_cast<long long>(i));
    if (cfg.first_frame && e.number < *cfg.first_frame) continue;
    if (cfg.last_frame && e.number > *cfg.last_frame) continue;
    out.push_back(std::move(e));
  }
  if (out.size() < 2) {
    throw UsageError("input", "need at least two frames in range, found " +
                                  std::to_string(out.size()) + " in " + cfg.input_dir.string());
  }
  return out;
}

GroundTruthIndex::GroundTruthIndex(const fs::path& cast_dir, const fs::path& self_dir) {
  auto scan = [](const fs::path& dir) {
    std::vector<Entry> entries;
    for (const auto& p : list_frames(dir)) {
      const std::string stem = p.stem().string();
      entries.push_back({stem, trailing_number(stem), p});
    }
    return entries;
  };
  cast_ = scan(cast_dir);
  self_ = scan(self_dir);
}

std::optional<fs::path> GroundTruthIndex::find(const std::vector<Entry>& entries,
                                               const FrameEntry& frame) {
  for (const auto& e : entries) {
    if (e.stem == frame.id) return e.path;
  }
  const auto number = trailing_number(frame.id);
  if (!number) return std::nullopt;
  for (const auto& e : entries) {
    if (e.number == number) return e.path;
  }
  return std::nullopt;
}

std::optional<GroundTruth> GroundTruthIndex::load(const FrameEntry& frame) const {
  const auto cast = find(cast_, frame);
  const auto self = find(self_, frame);
  if (!cast || !self) return std::nullopt;
  return load_ground_truth(*cast, *self);
}

std::string format_report(const DatasetReport& report) {
  std::ostringstream os;
  write_report(os, std::span<const DatasetReport>(&report, 1));
  return os.str();
}

RunSummary run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const auto frames = select_frames(cfg);
  GroundTruthIndex gt;
  if (cfg.has_ground_truth()) gt = GroundTruthIndex(cfg.gt_cast_dir, cfg.gt_self_dir);

  RunSummary summary;
  summary.pairs = frames.size() - 1;
  if (const auto iv = cfg.intervals()) {
    summary.intervals = *iv;
    summary.intervals_enabled = true;
  } else if (cfg.calibrate) {
    summary.intervals = calibrate(cfg);
    summary.intervals_enabled = true;
  } else {
    summary.intervals = ShadowIntervals::disabled();
  }

  const fs::path out_dir = cfg.effective_output_dir();
  ensure_directory(out_dir);

  const MotionThreshold threshold(cfg.threshold);
  const StructuringElement se = cfg.structuring_element();
  std::vector<std::optional<FrameScore>> scores(summary.pairs);
  for_each_index(summary.pairs, cfg.threads, [&](std::size_t i) {
    const FrameEntry& cur = frames[i + 1];
    const auto loaded = load_pair(frames[i], cur);
    const PairStages s =
        process_pair(cur.id, loaded.prev, loaded.cur, threshold, cfg.erosion_passes, se);
    const ClassifiedFrame classified = classify_shadows(s.eigen, s.filled, summary.intervals);

    if (cfg.emit_motion) save_mask(s.motion.mask, out_dir / (cur.id + ".motion.png"));
    if (cfg.emit_filled) save_mask(s.filled.mask, out_dir / (cur.id + ".filled.png"));
    if (cfg.emit_dualmap) save_frame(classified.overlay, out_dir / (cur.id + ".dualmap.png"));

    if (!gt.empty()) {
      if (auto truth = gt.load(cur)) scores[i] = score_frame(cur.id, classified.classes, *truth);
    }
  });

  std::vector<FrameScore> scored;
  for (auto& s : scores) {
    if (s) scored.push_back(std::move(*s));
  }
  if (!scored.empty()) {
    summary.report = aggregate(cfg.effective_dataset(), std::move(scored));
    summary.report_text = format_report(*summary.report);
    if (cfg.emit_report) write_text(out_dir / "report.txt", summary.report_text);
  }
  return summary;
}

ShadowIntervals calibrate(const PipelineConfig& cfg) {
  cfg.validate();
  require_ground_truth(cfg, "calibration");
  const auto frames = select_frames(cfg);
  const GroundTruthIndex gt(cfg.gt_cast_dir, cfg.gt_self_dir);
  const auto pairs = process_truth_pairs(cfg, frames, gt, cfg.threshold);
  std::vector<EigenSumMap> maps;
  std::vector<GroundTruth> truths;
  for (const auto& p : pairs) {
    maps.push_back(p.stages.eigen);
    truths.push_back(p.truth);
  }
  return calibrate_intervals(maps, truths, cfg.percentile);
}

std::vector<SweepRow> sweep(const PipelineConfig& cfg) {
  cfg.validate();
  require_ground_truth(cfg, "sweep");
  std::vector<double> thresholds = cfg.sweep_thresholds;
  if (thresholds.empty()) thresholds.push_back(cfg.threshold);
  std::vector<ShadowIntervals> candidates = cfg.sweep_intervals;
  if (candidates.empty()) {
    if (const auto iv = cfg.intervals()) candidates.push_back(*iv);
  }
  if (candidates.empty()) {
    throw UsageError("sweep_intervals", "no interval candidates and no intervals configured");
  }

  const auto frames = select_frames(cfg);
  const GroundTruthIndex gt(cfg.gt_cast_dir, cfg.gt_self_dir);
  std::vector<SweepRow> rows;
  for (double t : thresholds) {
    const auto pairs = process_truth_pairs(cfg, frames, gt, t);
    for (const auto& iv : candidates) {
      std::vector<FrameScore> scores;
      for (const auto& p : pairs) {
        const auto classified = classify_shadows(p.stages.eigen, p.stages.filled, iv);
        scores.push_back(score_frame(p.stages.frame_id, classified.classes, p.truth));
      }
      const DatasetReport r = aggregate(cfg.effective_dataset(), std::move(scores));
      rows.push_back({t, iv, r.mean_cast_f, r.mean_self_f, combined_mean_f(r)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const double fa = a.mean_f.value_or(-1.0);
    const double fb = b.mean_f.value_or(-1.0);
    if (fa != fb) return fa > fb;
    return std::tie(a.threshold, a.intervals.cast_min, a.intervals.self_min) <
           std::tie(b.threshold, b.intervals.cast_min, b.intervals.self_min);
  });
  return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  auto real = [](std::optional<double> v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::string(buf);
  };
  auto bound = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "# rank\tthreshold\tcast_min\tcast_max\tself_min\tself_max\tf_cast\tf_self\tf_mean\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << i + 1 << '\t' << bound(r.threshold) << '\t' << bound(r.intervals.cast_min) << '\t'
       << bound(r.intervals.cast_max) << '\t' << bound(r.intervals.self_min) << '\t'
       << bound(r.intervals.self_max) << '\t' << real(r.mean_cast_f) << '\t'
       << real(r.mean_self_f) << '\t' << real(r.mean_f) << '\n';
  }
  return os.str();
}

DatasetReport evaluate_overlays(const PipelineConfig& cfg) {
  cfg.validate();
  require_ground_truth(cfg, "evaluation");
  if (cfg.predictions_dir.empty()) {
    throw UsageError("predictions", "no directory of .dualmap.png overlays given");
  }
  constexpr std::string_view kSuffix = ".dualmap.png";
  const GroundTruthIndex gt(cfg.gt_cast_dir, cfg.gt_self_dir);

  std::vector<FrameScore> scores;
  for (const auto& path : list_frames(cfg.predictions_dir)) {
    const std::string name = path.filename().string();
    if (name.size() <= kSuffix.size() || !name.ends_with(kSuffix)) continue;
    FrameEntry entry;
    entry.path = path;
    entry.id = name.substr(0, name.size() - kSuffix.size());
    entry.number = trailing_number(entry.id).value_or(0);
    if (cfg.first_frame && entry.number < *cfg.first_frame) continue;
    if (cfg.last_frame && entry.number > *cfg.last_frame) continue;
    auto truth = gt.load(entry);
    if (!truth) continue;
    scores.push_back(score_frame(entry.id, decode_overlay(load_frame(path)), *truth));
  }
  if (scores.empty()) {
    throw UsageError("predictions", "no overlay in " + cfg.predictions_dir.string() +
                                        " has matching ground truth");
  }
  std::string name = cfg.dataset;
  if (name.empty()) {
    name = cfg.input_dir.empty() ? cfg.predictions_dir.filename().string() : cfg.effective_dataset();
  }
  return aggregate(name, std::move(scores));
}

}  // namespace shadowseg
