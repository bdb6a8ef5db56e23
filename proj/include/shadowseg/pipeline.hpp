#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shadowseg/eigen_shadow.hpp"
#include "shadowseg/evaluation.hpp"
#include "shadowseg/frame.hpp"
#include "shadowseg/morphology.hpp"
#include "shadowseg/motion.hpp"

namespace shadowseg {

// Environment variable consulted when no output directory is configured.
inline constexpr const char* kOutputDirEnv = "SHADOWSEG_OUTPUT_DIR";

// Every tunable of a run. Populated from a flat `key = value` file and/or
// individual set() calls; later values win.
struct PipelineConfig {
  std::filesystem::path input_dir;
  // Inclusive frame-number range; a frame's number is the trailing digits of
  // its file stem (in000136 -> 136), or its sorted position when it has none.
  std::optional<long long> first_frame;
  std::optional<long long> last_frame;

  double threshold = MotionThreshold::kDefault;
  unsigned erosion_passes = 1;
  bool cross_element = false;

  std::optional<double> cast_min, cast_max, self_min, self_max;
  bool calibrate = false;
  double percentile = 5.0;

  std::filesystem::path gt_cast_dir;
  std::filesystem::path gt_self_dir;
  std::filesystem::path output_dir;
  std::filesystem::path predictions_dir;
  std::string dataset;

  bool emit_motion = true;
  bool emit_filled = true;
  bool emit_dualmap = true;
  bool emit_report = true;

  // 0 picks the hardware concurrency.
  unsigned threads = 0;

  std::vector<double> sweep_thresholds;
  std::vector<ShadowIntervals> sweep_intervals;

  // Throws UsageError naming the key on an unknown key or unparsable value.
  void set(std::string_view key, std::string_view value);
  // `key = value` lines; blank lines and lines starting with '#' ignored.
  void read(std::istream& in);
  void load(const std::filesystem::path& path);
  // Round-trips through read().
  std::string serialize() const;

  // Throws UsageError for the first violated field.
  void validate() const;

  bool has_ground_truth() const { return !gt_cast_dir.empty() && !gt_self_dir.empty(); }
  // All four bounds, or nullopt when none is set. Throws UsageError when
  // only some are.
  std::optional<ShadowIntervals> intervals() const;
  void set_intervals(const ShadowIntervals& iv);
  StructuringElement structuring_element() const;
  std::filesystem::path effective_output_dir() const;
  std::string effective_dataset() const;
};

// Everything computed for one (t, t+1) pair, named after frame t+1.
struct PairStages {
  std::string frame_id;
  MotionFrame motion;
  HoleFilledFrame filled;
  EigenSumMap eigen;
};

// motion -> fill -> erode -> superimpose -> eigen sums.
PairStages process_pair(std::string frame_id, const RgbFrame& prev, const RgbFrame& cur,
                        MotionThreshold threshold, unsigned erosion_passes,
                        const StructuringElement& se = {});

struct FrameEntry {
  std::filesystem::path path;
  std::string id;  // file stem
  long long number = 0;
};

// Frames of cfg.input_dir inside the configured range. Throws IoError when
// the directory is missing, UsageError when fewer than two frames remain.
std::vector<FrameEntry> select_frames(const PipelineConfig& cfg);

// Ground-truth files keyed by frame: an exact stem match first, then the
// same trailing frame number (so gt000136.png pairs with in000136.jpg).
class GroundTruthIndex {
 public:
  GroundTruthIndex() = default;
  GroundTruthIndex(const std::filesystem::path& cast_dir, const std::filesystem::path& self_dir);

  bool empty() const noexcept { return cast_.empty(); }
  // Nullopt when either class file is missing for this frame.
  std::optional<GroundTruth> load(const FrameEntry& frame) const;

 private:
  struct Entry {
    std::string stem;
    std::optional<long long> number;
    std::filesystem::path path;
  };
  static std::optional<std::filesystem::path> find(const std::vector<Entry>& entries,
                                                   const FrameEntry& frame);
  std::vector<Entry> cast_;
  std::vector<Entry> self_;
};

struct RunSummary {
  std::size_t pairs = 0;
  ShadowIntervals intervals;
  bool intervals_enabled = false;
  std::optional<DatasetReport> report;
  // Report text as written to report.txt; empty without ground truth.
  std::string report_text;
};

// Writes <id>.motion.png, <id>.filled.png and <id>.dualmap.png per pair
// (per emit flags) plus report.txt when ground truth is configured.
// Without intervals and without calibration every blob pixel is object.
RunSummary run_pipeline(const PipelineConfig& cfg);

// Intervals from the ground-truth frames of the configured sequence.
ShadowIntervals calibrate(const PipelineConfig& cfg);

struct SweepRow {
  double threshold = 0.0;
  ShadowIntervals intervals;
  std::optional<double> mean_cast_f;
  std::optional<double> mean_self_f;
  std::optional<double> mean_f;
};

// Rows sorted by mean F descending, ties by (threshold, cast_min, self_min)
// ascending. Candidate lists fall back to cfg.threshold / cfg.intervals().
std::vector<SweepRow> sweep(const PipelineConfig& cfg);
std::string format_sweep(const std::vector<SweepRow>& rows);

// Scores <id>.dualmap.png overlays in cfg.predictions_dir against ground truth.
DatasetReport evaluate_overlays(const PipelineConfig& cfg);

std::string format_report(const DatasetReport& report);

}  // namespace shadowseg
