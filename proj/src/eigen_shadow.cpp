#include "shadowseg/eigen_shadow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shadowseg/error.hpp"

namespace shadowseg {

double trace(const Neighborhood3x3& m) noexcept { return m(0, 0) + m(1, 1) + m(2, 2); }

double determinant(const Neighborhood3x3& m) noexcept {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double principal_minor_sum(const Neighborhood3x3& m) noexcept {
  return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
         (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
}

namespace {

constexpr double kRepeatedRootDiscriminant = 1e-12;

// Monic cubic x^3 + b x^2 + c x + d.
struct Cubic {
  double b, c, d;

  double value(double x) const noexcept { return ((x + b) * x + c) * x + d; }
  double slope(double x) const noexcept { return (3.0 * x + 2.0 * b) * x + c; }
};

double polish(const Cubic& f, double x) {
  for (int it = 0; it < 3; ++it) {
    const double fx = f.value(x);
    const double dfx = f.slope(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!(std::abs(f.value(next)) < std::abs(fx))) break;
    x = next;
  }
  return x;
}

// Remaining pair from the real root r via Vieta: pair sum = -b - r and
// pair product = c - r * (pair sum).
std::array<std::complex<double>, 2> deflate(const Cubic& f, double r) {
  const double s = -f.b - r;
  const double prod = f.c - r * s;
  const double half = 0.5 * s;
  const double disc = half * half - prod;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return {std::complex<double>(half - root, 0.0), std::complex<double>(half + root, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, im), std::complex<double>(half, -im)};
}

// Roots of a monic cubic whose coefficients are O(1).
std::array<std::complex<double>, 3> solve_monic(const Cubic& f) {
  const double shift = -f.b / 3.0;
  const double p = f.c - f.b * f.b / 3.0;
  const double q = 2.0 * f.b * f.b * f.b / 27.0 - f.b * f.c / 3.0 + f.d;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);

  if (std::abs(disc) < kRepeatedRootDiscriminant) {
    if (std::abs(p) < kRepeatedRootDiscriminant) {
      const double x = polish(f, shift);
      return {x, x, x};
    }
    const double simple = polish(f, 3.0 * q / p + shift);
    const auto pair = deflate(f, simple);
    return {std::complex<double>(simple, 0.0), pair[0], pair[1]};
  }

  if (disc > 0.0) {
    const double amp = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * amp), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::array<double, 3> xs{};
    for (int k = 0; k < 3; ++k) {
      xs[k] = polish(f, amp * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
    }
    std::sort(xs.begin(), xs.end());
    return {xs[0], xs[1], xs[2]};
  }

  // One real root. Take the Cardano term with the larger magnitude to avoid
  // cancellation, then recover the conjugate pair from Vieta.
  const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  const double a = -std::copysign(std::cbrt(std::abs(q) / 2.0 + sq), q);
  const double bterm = a != 0.0 ? -p / (3.0 * a) : 0.0;
  const double r = polish(f, a + bterm + shift);
  const auto pair = deflate(f, r);
  return {std::complex<double>(r, 0.0), pair[0], pair[1]};
}

}  // namespace

EigenTriple eigen_values_3x3(const Neighborhood3x3& m) {
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};

  Neighborhood3x3 unit;
  for (std::size_t i = 0; i < 9; ++i) {
    unit(i / 3, i % 3) = m.values()[i] / scale;
  }
  const Cubic f{-trace(unit), principal_minor_sum(unit), -determinant(unit)};
  const auto roots = solve_monic(f);
  EigenTriple out;
  for (std::size_t i = 0; i < 3; ++i) out.values[i] = roots[i] * scale;
  return out;
}

double eigen_sum(const Neighborhood3x3& m) noexcept { return trace(m); }

EigenSumMap::EigenSumMap(std::size_t width, std::size_t height, std::vector<double> values,
                         BinaryMask valid)
    : values_(std::move(values)), valid_(std::move(valid)) {
  if (valid_.width() != width || valid_.height() != height || values_.size() != width * height) {
    throw ValidationError("eigen-sum map buffers do not match dimensions");
  }
}

EigenSumMap eigen_sum_map(const GrayFrame& gray, const BinaryMask& blob) {
  if (!same_size(gray, blob)) throw ValidationError("gray frame and blob mask differ in size");
  const std::size_t width = gray.width();
  const std::size_t height = gray.height();
  std::vector<double> values(width * height, 0.0);
  for (std::size_t h = 0; h < height; ++h) {
    const std::size_t up = h == 0 ? 0 : h - 1;
    const std::size_t down = h + 1 == height ? h : h + 1;
    for (std::size_t w = 0; w < width; ++w) {
      if (!blob.at(w, h)) continue;
      const std::size_t left = w == 0 ? 0 : w - 1;
      const std::size_t right = w + 1 == width ? w : w + 1;
      // Diagonal of the replicate-padded window, same order as trace().
      values[h * width + w] = gray.at(left, up) + gray.at(w, h) + gray.at(right, down);
    }
  }
  return EigenSumMap(width, height, std::move(values), blob);
}

EigenSumMap eigen_sum_map(const HoleFilledFrame& d_hf) {
  return eigen_sum_map(to_gray(d_hf.frame), d_hf.mask);
}

void ShadowIntervals::validate() const {
  for (double v : {cast_min, cast_max, self_min, self_max}) {
    if (!std::isfinite(v)) throw ValidationError("interval bounds must be finite");
  }
  if (cast_min > cast_max) {
    throw ValidationError("cast interval inverted: [" + std::to_string(cast_min) + ", " +
                          std::to_string(cast_max) + "]");
  }
  if (self_min > self_max) {
    throw ValidationError("self interval inverted: [" + std::to_string(self_min) + ", " +
                          std::to_string(self_max) + "]");
  }
}

const char* to_string(PixelClass c) noexcept {
  switch (c) {
    case PixelClass::Background: return "background";
    case PixelClass::Object: return "object";
    case PixelClass::CastShadow: return "cast";
    case PixelClass::SelfShadow: return "self";
  }
  return "unknown";
}

ClassMap::ClassMap(std::size_t width, std::size_t height, PixelClass fill)
    : width_(width), height_(height), classes_(width * height, fill) {}

ClassMap::ClassMap(std::size_t width, std::size_t height, std::vector<PixelClass> classes)
    : width_(width), height_(height), classes_(std::move(classes)) {
  if (classes_.size() != width * height) {
    throw ValidationError("class buffer size does not match dimensions");
  }
}

BinaryMask ClassMap::mask_of(PixelClass c) const {
  std::vector<std::uint8_t> bits(classes_.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = classes_[i] == c ? 1 : 0;
  return BinaryMask(width_, height_, std::move(bits));
}

ClassifiedFrame classify_shadows(const EigenSumMap& map, const HoleFilledFrame& d_hf,
                                 const ShadowIntervals& intervals) {
  intervals.validate();
  if (!same_size(map, d_hf.frame)) throw ValidationError("eigen-sum map and frame differ in size");

  const std::size_t width = map.width();
  const std::size_t height = map.height();
  ClassifiedFrame out{ClassMap(width, height), RgbFrame(width, height)};
  for (std::size_t h = 0; h < height; ++h) {
    for (std::size_t w = 0; w < width; ++w) {
      if (!map.valid(w, h)) continue;
      const double v = map.at(w, h);
      if (intervals.in_cast(v)) {
        out.classes.set(w, h, PixelClass::CastShadow);
        out.overlay.at(w, h) = kRed;
      } else if (intervals.in_self(v)) {
        out.classes.set(w, h, PixelClass::SelfShadow);
        out.overlay.at(w, h) = kBlue;
      } else {
        out.classes.set(w, h, PixelClass::Object);
        out.overlay.at(w, h) = d_hf.frame.at(w, h);
      }
    }
  }
  return out;
}

ClassMap decode_overlay(const RgbFrame& overlay) {
  std::vector<PixelClass> classes(overlay.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Rgb p = overlay.pixels()[i];
    if (p == kRed) {
      classes[i] = PixelClass::CastShadow;
    } else if (p == kBlue) {
      classes[i] = PixelClass::SelfShadow;
    } else if (p == kBlack) {
      classes[i] = PixelClass::Background;
    } else {
      classes[i] = PixelClass::Object;
    }
  }
  return ClassMap(overlay.width(), overlay.height(), std::move(classes));
}

namespace {

std::pair<double, double> trimmed_bounds(std::vector<double>& samples, double percentile) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const auto lo = static_cast<std::size_t>(std::floor(percentile / 100.0 * static_cast<double>(n - 1)));
  return {samples[lo], samples[n - 1 - lo]};
}

}  // namespace

ShadowIntervals calibrate_intervals(std::span<const EigenSumMap> maps,
                                    std::span<const GroundTruth> truths, double percentile) {
  if (!(percentile > 0.0 && percentile < 50.0)) {
    throw ValidationError("percentile must lie in (0, 50), got " + std::to_string(percentile));
  }
  if (maps.size() != truths.size()) {
    throw ValidationError("calibration needs one ground truth per eigen-sum map");
  }
  std::vector<double> cast;
  std::vector<double> self;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const EigenSumMap& map = maps[k];
    const GroundTruth& gt = truths[k];
    if (!same_size(map, gt)) {
      throw ValidationError("ground truth " + std::to_string(k) + " differs in size from its map");
    }
    for (std::size_t h = 0; h < map.height(); ++h) {
      for (std::size_t w = 0; w < map.width(); ++w) {
        if (!map.valid(w, h)) continue;
        if (gt.cast().at(w, h)) cast.push_back(map.at(w, h));
        if (gt.self().at(w, h)) self.push_back(map.at(w, h));
      }
    }
  }
  if (cast.empty()) throw CalibrationError("no cast-shadow pixels inside any blob");
  if (self.empty()) throw CalibrationError("no self-shadow pixels inside any blob");

  const auto [cmin, cmax] = trimmed_bounds(cast, percentile);
  const auto [smin, smax] = trimmed_bounds(self, percentile);
  return {cmin, cmax, smin, smax};
}

}  // namespace shadowseg
