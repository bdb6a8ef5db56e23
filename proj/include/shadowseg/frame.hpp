#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shadowseg {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kBlue{0, 0, 255};

// Smallest frame side accepted; 3x3 windows need a full row/column on each
// side of the centre pixel.
inline constexpr std::size_t kMinFrameSide = 3;

// Row-major W x H grid of 8-bit RGB pixels.
class RgbFrame {
 public:
  RgbFrame() = default;
  // Filled with `fill`. Throws FormatError below kMinFrameSide on either side.
  RgbFrame(std::size_t width, std::size_t height, Rgb fill = kBlack);
  RgbFrame(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  const Rgb& at(std::size_t w, std::size_t h) const { return pixels_[h * width_ + w]; }
  Rgb& at(std::size_t w, std::size_t h) { return pixels_[h * width_ + w]; }
  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  std::span<Rgb> pixels() noexcept { return pixels_; }

  friend bool operator==(const RgbFrame&, const RgbFrame&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Rgb> pixels_;
};

// Real-valued intensities in [0, 255], same layout as RgbFrame.
class GrayFrame {
 public:
  GrayFrame() = default;
  GrayFrame(std::size_t width, std::size_t height, double fill = 0.0);
  // Throws ValidationError on a size mismatch or a value outside [0, 255].
  GrayFrame(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double at(std::size_t w, std::size_t h) const { return values_[h * width_ + w]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

// Row-major boolean grid. Stored as bytes (0/1) so spans of it are cheap.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(std::size_t width, std::size_t height, bool fill = false);
  BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(std::size_t w, std::size_t h) const { return bits_[h * width_ + w] != 0; }
  void set(std::size_t w, std::size_t h, bool v) { bits_[h * width_ + w] = v ? 1 : 0; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t count() const noexcept;
  // True when every set pixel of *this is also set in `other`.
  bool subset_of(const BinaryMask& other) const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// 3x3 window, row-major: (row, col) with row 0 above the centre pixel.
class Neighborhood3x3 {
 public:
  Neighborhood3x3() = default;
  explicit Neighborhood3x3(const std::array<double, 9>& m) : m_(m) {}

  double operator()(std::size_t row, std::size_t col) const { return m_[row * 3 + col]; }
  double& operator()(std::size_t row, std::size_t col) { return m_[row * 3 + col]; }
  const std::array<double, 9>& values() const noexcept { return m_; }

  friend bool operator==(const Neighborhood3x3&, const Neighborhood3x3&) = default;

 private:
  std::array<double, 9> m_{};
};

// Disjoint cast/self shadow labels for one frame.
class GroundTruth {
 public:
  GroundTruth() = default;
  // Throws ValidationError when sizes differ or a pixel carries both labels.
  GroundTruth(BinaryMask cast, BinaryMask self);

  const BinaryMask& cast() const noexcept { return cast_; }
  const BinaryMask& self() const noexcept { return self_; }
  std::size_t width() const noexcept { return cast_.width(); }
  std::size_t height() const noexcept { return cast_.height(); }

 private:
  BinaryMask cast_;
  BinaryMask self_;
};

template <class A, class B>
bool same_size(const A& a, const B& b) {
  return a.width() == b.width() && a.height() == b.height();
}

// Channel mean (R + G + B) / 3, kept real-valued.
double gray_value(Rgb p) noexcept;
GrayFrame to_gray(const RgbFrame& frame);

// Window centred on (w, h) with replicate padding. Throws BoundsError when
// the centre lies outside the frame.
Neighborhood3x3 neighborhood(const GrayFrame& frame, std::size_t w, std::size_t h);

}  // namespace shadowseg
