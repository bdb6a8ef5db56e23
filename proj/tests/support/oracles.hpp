#pragma once

// Test-only reference implementations. They are written as literal
// per-pixel loops and share no code with the library beyond its data types.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "shadowseg/eigen_shadow.hpp"
#include "shadowseg/frame.hpp"

namespace oracle {

using namespace shadowseg;

inline double mean_rgb(Rgb p) { return (p.r + p.g + p.b) / 3.0; }

inline long clampi(long v, long lo, long hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Literal mean neighborhood distance: nested loops over the 3x3 offsets,
// clamp-to-edge, one absolute difference per offset.
inline double motion_distance(const RgbFrame& prev, const RgbFrame& cur, long w, long h) {
  const long W = static_cast<long>(cur.width());
  const long H = static_cast<long>(cur.height());
  double sum = 0.0;
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      const auto x = static_cast<std::size_t>(clampi(w + dx, 0, W - 1));
      const auto y = static_cast<std::size_t>(clampi(h + dy, 0, H - 1));
      sum += std::fabs(mean_rgb(prev.at(x, y)) - mean_rgb(cur.at(x, y)));
    }
  }
  return sum / 9.0;
}

inline BinaryMask motion_mask(const RgbFrame& prev, const RgbFrame& cur, double threshold) {
  BinaryMask m(cur.width(), cur.height());
  for (std::size_t h = 0; h < cur.height(); ++h) {
    for (std::size_t w = 0; w < cur.width(); ++w) {
      m.set(w, h, motion_distance(prev, cur, static_cast<long>(w), static_cast<long>(h)) > threshold);
    }
  }
  return m;
}

// Grows the border-connected background one 4-step at a time until it
// stops changing; everything else is foreground.
inline BinaryMask fill_holes(const BinaryMask& m) {
  const std::size_t W = m.width();
  const std::size_t H = m.height();
  std::vector<std::vector<bool>> outside(H, std::vector<bool>(W, false));
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) {
      if (!m.at(w, h) && (w == 0 || h == 0 || w + 1 == W || h + 1 == H)) outside[h][w] = true;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t w = 0; w < W; ++w) {
        if (outside[h][w] || m.at(w, h)) continue;
        const bool touch = (w > 0 && outside[h][w - 1]) || (w + 1 < W && outside[h][w + 1]) ||
                           (h > 0 && outside[h - 1][w]) || (h + 1 < H && outside[h + 1][w]);
        if (touch) {
          outside[h][w] = true;
          changed = true;
        }
      }
    }
  }
  BinaryMask out(W, H);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) out.set(w, h, !outside[h][w]);
  }
  return out;
}

// Full 3x3 square erosion, off-frame = background.
inline BinaryMask erode_square(const BinaryMask& m) {
  const long W = static_cast<long>(m.width());
  const long H = static_cast<long>(m.height());
  BinaryMask out(m.width(), m.height());
  for (long h = 0; h < H; ++h) {
    for (long w = 0; w < W; ++w) {
      bool all = true;
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          const long x = w + dx;
          const long y = h + dy;
          if (x < 0 || y < 0 || x >= W || y >= H || !m.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) {
            all = false;
          }
        }
      }
      out.set(static_cast<std::size_t>(w), static_cast<std::size_t>(h), all);
    }
  }
  return out;
}

// Eigen sum at one pixel of an RGB frame: channel mean, clamp-to-edge
// window, then the sum of the window's diagonal.
inline double eigen_sum_at(const RgbFrame& f, long w, long h) {
  const long W = static_cast<long>(f.width());
  const long H = static_cast<long>(f.height());
  double window[3][3];
  for (long r = 0; r < 3; ++r) {
    for (long c = 0; c < 3; ++c) {
      window[r][c] = mean_rgb(f.at(static_cast<std::size_t>(clampi(w + c - 1, 0, W - 1)),
                                   static_cast<std::size_t>(clampi(h + r - 1, 0, H - 1))));
    }
  }
  return window[0][0] + window[1][1] + window[2][2];
}

// Cast band first, then self band, else object.
inline PixelClass classify(double v, const ShadowIntervals& iv) {
  if (iv.cast_min <= v && v <= iv.cast_max) return PixelClass::CastShadow;
  if (iv.self_min <= v && v <= iv.self_max) return PixelClass::SelfShadow;
  return PixelClass::Object;
}

inline BinaryMask random_mask(std::mt19937& rng, std::size_t w, std::size_t h, double density) {
  std::bernoulli_distribution coin(density);
  BinaryMask m(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) m.set(x, y, coin(rng));
  }
  return m;
}

// Axis-aligned filled rectangle [x0, x0+w) x [y0, y0+h).
inline void fill_rect(RgbFrame& f, long x0, long y0, long w, long h, Rgb c) {
  for (long y = y0; y < y0 + h; ++y) {
    for (long x = x0; x < x0 + w; ++x) {
      if (x >= 0 && y >= 0 && x < static_cast<long>(f.width()) && y < static_cast<long>(f.height())) {
        f.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = c;
      }
    }
  }
}

// Unique empty directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("shadowseg_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
