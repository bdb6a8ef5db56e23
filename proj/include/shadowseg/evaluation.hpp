#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "shadowseg/eigen_shadow.hpp"
#include "shadowseg/frame.hpp"

namespace shadowseg {

enum class ShadowClass { Cast, Self };

const char* to_string(ShadowClass c) noexcept;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  // Nothing predicted and nothing labeled: the score is undefined and the
  // frame is left out of the class mean.
  bool degenerate() const noexcept { return tp == 0 && fp == 0 && fn == 0; }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

ConfusionCounts confusion(const ClassMap& pred, const GroundTruth& truth, ShadowClass cls);

// Precision, recall and their harmonic mean. Empty denominators give 0.
ClassScore score(const ConfusionCounts& c) noexcept;

struct FrameScore {
  std::string frame_id;
  ConfusionCounts cast_counts;
  ConfusionCounts self_counts;
  // Unset when the counts are degenerate.
  std::optional<ClassScore> cast;
  std::optional<ClassScore> self;
};

FrameScore score_frame(std::string frame_id, const ClassMap& pred, const GroundTruth& truth);

struct DatasetReport {
  std::string dataset;
  std::vector<FrameScore> frames;
  // Arithmetic mean of F over frames where the class was scored; unset
  // when no frame scored it.
  std::optional<double> mean_cast_f;
  std::optional<double> mean_self_f;
  std::size_t cast_frames = 0;
  std::size_t self_frames = 0;
};

// Throws ValidationError on an empty frame list.
DatasetReport aggregate(std::string dataset, std::vector<FrameScore> frames);

// Mean of the available per-class means; unset when neither is available.
std::optional<double> combined_mean_f(const DatasetReport& r) noexcept;

// One record per frame and class, then a summary table with one row per
// dataset and, for more than one dataset, a Mean row.
void write_report(std::ostream& os, std::span<const DatasetReport> reports);

}  // namespace shadowseg
