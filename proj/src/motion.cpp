#include "shadowseg/motion.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "shadowseg/error.hpp"

namespace shadowseg {

MotionThreshold::MotionThreshold(double t) : t_(t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError("motion threshold must be a finite value >= 0, got " +
                          std::to_string(t));
  }
}

double mean_neighborhood_distance(const GrayFrame& prev, const GrayFrame& cur, std::size_t w,
                                  std::size_t h) {
  if (!same_size(prev, cur)) throw ValidationError("frame dimensions differ");
  const Neighborhood3x3 a = neighborhood(prev, w, h);
  const Neighborhood3x3 b = neighborhood(cur, w, h);
  double sum = 0.0;
  for (std::size_t i = 0; i < 9; ++i) sum += std::abs(a.values()[i] - b.values()[i]);
  return sum / 9.0;
}

MotionFrame segment_motion(const RgbFrame& prev_rgb, const RgbFrame& cur_rgb,
                           MotionThreshold threshold) {
  if (!same_size(prev_rgb, cur_rgb)) throw ValidationError("frame dimensions differ");
  const std::size_t width = cur_rgb.width();
  const std::size_t height = cur_rgb.height();

  // Per-pixel distance computed once; each window then sums nine entries in
  // the same row-major order as mean_neighborhood_distance, so both paths
  // agree bit for bit.
  std::vector<double> diff(width * height);
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = std::abs(gray_value(prev_rgb.pixels()[i]) - gray_value(cur_rgb.pixels()[i]));
  }

  MotionFrame out{RgbFrame(width, height), BinaryMask(width, height)};
  for (std::size_t h = 0; h < height; ++h) {
    const std::size_t rows[3] = {h == 0 ? 0 : h - 1, h, h + 1 == height ? h : h + 1};
    for (std::size_t w = 0; w < width; ++w) {
      const std::size_t cols[3] = {w == 0 ? 0 : w - 1, w, w + 1 == width ? w : w + 1};
      double sum = 0.0;
      for (std::size_t r : rows) {
        const double* row = diff.data() + r * width;
        for (std::size_t c : cols) sum += row[c];
      }
      if (sum / 9.0 > threshold.value()) {
        out.mask.set(w, h, true);
        out.frame.at(w, h) = cur_rgb.at(w, h);
      }
    }
  }
  return out;
}

}  // namespace shadowseg
