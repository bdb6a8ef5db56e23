#pragma once

#include <cstddef>

#include "shadowseg/frame.hpp"

namespace shadowseg {

// Threshold on the mean neighborhood distance, in gray-level units.
class MotionThreshold {
 public:
  static constexpr double kDefault = 10.0;

  constexpr MotionThreshold() = default;
  // Throws ValidationError for negative or NaN values.
  explicit MotionThreshold(double t);

  constexpr double value() const noexcept { return t_; }

 private:
  double t_ = kDefault;
};

// Current-frame colors on moving pixels, black elsewhere.
struct MotionFrame {
  RgbFrame frame;
  BinaryMask mask;
};

// Mean over the nine window positions of |prev - cur|, both windows
// replicate-padded around (w, h).
double mean_neighborhood_distance(const GrayFrame& prev, const GrayFrame& cur, std::size_t w,
                                  std::size_t h);

// A pixel moves when its mean neighborhood distance strictly exceeds the
// threshold. Colors come from `cur_rgb` (frame t+1).
MotionFrame segment_motion(const RgbFrame& prev_rgb, const RgbFrame& cur_rgb,
                           MotionThreshold threshold);

}  // namespace shadowseg
