#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "shadowseg/frame.hpp"
#include "shadowseg/morphology.hpp"

namespace shadowseg {

// Roots of the characteristic cubic of a real 3x3 matrix. A complex pair,
// when present, is stored in slots 1 and 2 with positive imaginary part
// first.
struct EigenTriple {
  std::array<std::complex<double>, 3> values;

  std::complex<double> sum() const { return values[0] + values[1] + values[2]; }
  std::complex<double> product() const { return values[0] * values[1] * values[2]; }
};

double trace(const Neighborhood3x3& m) noexcept;
double determinant(const Neighborhood3x3& m) noexcept;
// Sum of the three principal 2x2 minors.
double principal_minor_sum(const Neighborhood3x3& m) noexcept;

// Solves lambda^3 - tr*lambda^2 + c2*lambda - det = 0 on the depressed cubic:
// trigonometric form for three real roots, Cardano for one real root and a
// conjugate pair, closed form when the discriminant is below 1e-12 in
// magnitude. Real roots get a Newton polish.
EigenTriple eigen_values_3x3(const Neighborhood3x3& m);

// Sum of the eigenvalues, computed as the trace.
double eigen_sum(const Neighborhood3x3& m) noexcept;

// Eigen sums over the blob pixels of a frame; other pixels are invalid and
// hold 0.
class EigenSumMap {
 public:
  EigenSumMap() = default;
  EigenSumMap(std::size_t width, std::size_t height, std::vector<double> values,
              BinaryMask valid);

  std::size_t width() const noexcept { return valid_.width(); }
  std::size_t height() const noexcept { return valid_.height(); }
  double at(std::size_t w, std::size_t h) const { return values_[h * width() + w]; }
  bool valid(std::size_t w, std::size_t h) const { return valid_.at(w, h); }
  std::span<const double> values() const noexcept { return values_; }
  const BinaryMask& validity() const noexcept { return valid_; }

 private:
  std::vector<double> values_;
  BinaryMask valid_;
};

// Trace of each blob pixel's replicate-padded window over `gray`. Off-blob
// intensities inside a window are used as they are.
EigenSumMap eigen_sum_map(const GrayFrame& gray, const BinaryMask& blob);
// Same over the channel-mean gray of D_HF, blob = D_HF's mask.
EigenSumMap eigen_sum_map(const HoleFilledFrame& d_hf);

// Closed eigen-sum bands for cast and self shadow.
struct ShadowIntervals {
  double cast_min = 0.0;
  double cast_max = 0.0;
  double self_min = 0.0;
  double self_max = 0.0;

  // Throws ValidationError on inverted or non-finite bounds.
  void validate() const;
  bool in_cast(double v) const noexcept { return v >= cast_min && v <= cast_max; }
  bool in_self(double v) const noexcept { return v >= self_min && v <= self_max; }
  ShadowIntervals shifted(double delta) const noexcept {
    return {cast_min + delta, cast_max + delta, self_min + delta, self_max + delta};
  }

  // Eigen sums are never negative, so these bands match nothing and every
  // blob pixel is classified as object.
  static ShadowIntervals disabled() noexcept { return {-2.0, -1.0, -2.0, -1.0}; }

  friend bool operator==(const ShadowIntervals&, const ShadowIntervals&) = default;
};

enum class PixelClass : std::uint8_t {
  Background = 0,
  Object = 1,
  CastShadow = 2,
  SelfShadow = 3,
};

const char* to_string(PixelClass c) noexcept;

class ClassMap {
 public:
  ClassMap() = default;
  ClassMap(std::size_t width, std::size_t height, PixelClass fill = PixelClass::Background);
  ClassMap(std::size_t width, std::size_t height, std::vector<PixelClass> classes);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  PixelClass at(std::size_t w, std::size_t h) const { return classes_[h * width_ + w]; }
  void set(std::size_t w, std::size_t h, PixelClass c) { classes_[h * width_ + w] = c; }
  std::span<const PixelClass> classes() const noexcept { return classes_; }

  BinaryMask mask_of(PixelClass c) const;

  friend bool operator==(const ClassMap&, const ClassMap&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<PixelClass> classes_;
};

// D_S: cast pixels red, self pixels blue, object pixels keep D_HF colors.
struct ClassifiedFrame {
  ClassMap classes;
  RgbFrame overlay;
};

// Cast band is tested before the self band. Invalid map pixels are
// background and render black.
ClassifiedFrame classify_shadows(const EigenSumMap& map, const HoleFilledFrame& d_hf,
                                 const ShadowIntervals& intervals);

// Inverse of the overlay coloring: red -> cast, blue -> self, black ->
// background, anything else -> object. Ambiguous for object pixels that are
// pure red, pure blue or black in the input.
ClassMap decode_overlay(const RgbFrame& overlay);

// Pools the eigen sums of ground-truth pixels that are valid in the
// matching map and returns, per class, the samples at sorted indices
// floor(p/100 * (n-1)) and n-1 minus that index. `percentile` in (0, 50).
// Throws CalibrationError when a class has no usable sample.
ShadowIntervals calibrate_intervals(std::span<const EigenSumMap> maps,
                                    std::span<const GroundTruth> truths, double percentile);

}  // namespace shadowseg
