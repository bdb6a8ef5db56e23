#include "shadowseg/frame.hpp"

#include <algorithm>
#include <string>

#include "shadowseg/error.hpp"

namespace shadowseg {

namespace {

void check_frame_dims(std::size_t width, std::size_t height) {
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw FormatError("frame is " + std::to_string(width) + "x" + std::to_string(height) +
                      ", minimum is 3x3");
  }
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

}  // namespace

RgbFrame::RgbFrame(std::size_t width, std::size_t height, Rgb fill)
    : width_(width), height_(height) {
  check_frame_dims(width, height);
  pixels_.assign(width * height, fill);
}

RgbFrame::RgbFrame(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_frame_dims(width, height);
  if (pixels_.size() != width * height) {
    throw ValidationError("pixel buffer holds " + std::to_string(pixels_.size()) +
                          " entries, expected " + std::to_string(width * height));
  }
}

GrayFrame::GrayFrame(std::size_t width, std::size_t height, double fill)
    : GrayFrame(width, height, std::vector<double>(width * height, fill)) {}

GrayFrame::GrayFrame(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width * height) {
    throw ValidationError("gray buffer size does not match dimensions");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 255.0)) {
      throw ValidationError("gray value " + std::to_string(v) + " outside [0, 255]");
    }
  }
}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), bits_(width * height, fill ? 1 : 0) {}

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (bits_.size() != width * height) {
    throw ValidationError("mask buffer size does not match dimensions");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
  if (!same_size(*this, other)) throw ValidationError("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

GroundTruth::GroundTruth(BinaryMask cast, BinaryMask self)
    : cast_(std::move(cast)), self_(std::move(self)) {
  if (!same_size(cast_, self_)) {
    throw ValidationError("cast and self ground-truth masks differ in size");
  }
  auto c = cast_.bits();
  auto s = self_.bits();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] && s[i]) {
      throw ValidationError("pixel (" + std::to_string(i % cast_.width()) + "," +
                            std::to_string(i / cast_.width()) +
                            ") is labeled both cast and self shadow");
    }
  }
}

double gray_value(Rgb p) noexcept {
  return (static_cast<double>(p.r) + static_cast<double>(p.g) + static_cast<double>(p.b)) / 3.0;
}

GrayFrame to_gray(const RgbFrame& frame) {
  std::vector<double> values(frame.size());
  std::transform(frame.pixels().begin(), frame.pixels().end(), values.begin(), gray_value);
  return GrayFrame(frame.width(), frame.height(), std::move(values));
}

Neighborhood3x3 neighborhood(const GrayFrame& frame, std::size_t w, std::size_t h) {
  if (w >= frame.width() || h >= frame.height()) {
    throw BoundsError("pixel (" + std::to_string(w) + "," + std::to_string(h) +
                      ") outside " + std::to_string(frame.width()) + "x" +
                      std::to_string(frame.height()) + " frame");
  }
  Neighborhood3x3 n;
  for (std::size_t r = 0; r < 3; ++r) {
    const std::size_t y = clamp_index(static_cast<std::ptrdiff_t>(h) + static_cast<std::ptrdiff_t>(r) - 1,
                                      frame.height());
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t x = clamp_index(
          static_cast<std::ptrdiff_t>(w) + static_cast<std::ptrdiff_t>(c) - 1, frame.width());
      n(r, c) = frame.at(x, y);
    }
  }
  return n;
}

}  // namespace shadowseg
