#include "shadowseg/morphology.hpp"

#include <vector>

#include "shadowseg/error.hpp"

namespace shadowseg {

StructuringElement::StructuringElement() { cells_.fill(true); }

StructuringElement::StructuringElement(const std::array<bool, 9>& cells) : cells_(cells) {
  if (!cells_[4]) throw ValidationError("structuring element origin must be set");
}

StructuringElement StructuringElement::cross() {
  return StructuringElement({false, true, false, true, true, true, false, true, false});
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const std::size_t width = mask.width();
  const std::size_t height = mask.height();
  if (width == 0 || height == 0) return mask;

  // Flood the background from every border pixel; whatever background is
  // left unreached is a hole.
  std::vector<std::uint8_t> reached(width * height, 0);
  std::vector<std::size_t> stack;
  auto push = [&](std::size_t w, std::size_t h) {
    const std::size_t i = h * width + w;
    if (!reached[i] && !mask.at(w, h)) {
      reached[i] = 1;
      stack.push_back(i);
    }
  };
  for (std::size_t w = 0; w < width; ++w) {
    push(w, 0);
    push(w, height - 1);
  }
  for (std::size_t h = 0; h < height; ++h) {
    push(0, h);
    push(width - 1, h);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const std::size_t w = i % width;
    const std::size_t h = i / width;
    if (w > 0) push(w - 1, h);
    if (w + 1 < width) push(w + 1, h);
    if (h > 0) push(w, h - 1);
    if (h + 1 < height) push(w, h + 1);
  }

  std::vector<std::uint8_t> out(width * height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = reached[i] ? 0 : 1;
  return BinaryMask(width, height, std::move(out));
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  const std::size_t width = mask.width();
  const std::size_t height = mask.height();
  BinaryMask out(width, height);
  for (std::size_t h = 0; h < height; ++h) {
    for (std::size_t w = 0; w < width; ++w) {
      if (!mask.at(w, h)) continue;
      bool keep = true;
      for (std::size_t r = 0; r < 3 && keep; ++r) {
        for (std::size_t c = 0; c < 3 && keep; ++c) {
          if (!se.at(r, c)) continue;
          const auto x = static_cast<std::ptrdiff_t>(w) + static_cast<std::ptrdiff_t>(c) - 1;
          const auto y = static_cast<std::ptrdiff_t>(h) + static_cast<std::ptrdiff_t>(r) - 1;
          if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(width) ||
              y >= static_cast<std::ptrdiff_t>(height) ||
              !mask.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) {
            keep = false;
          }
        }
      }
      if (keep) out.set(w, h, true);
    }
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se, unsigned passes) {
  BinaryMask out = mask;
  for (unsigned i = 0; i < passes; ++i) out = erode(out, se);
  return out;
}

HoleFilledFrame superimpose(const RgbFrame& input, const BinaryMask& mask) {
  if (!same_size(input, mask)) throw ValidationError("frame and mask dimensions differ");
  RgbFrame frame(input.width(), input.height());
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (mask.bits()[i]) frame.pixels()[i] = input.pixels()[i];
  }
  return {std::move(frame), mask};
}

HoleFilledFrame postprocess(const RgbFrame& input, const BinaryMask& motion_mask,
                            unsigned erosion_passes, const StructuringElement& se) {
  return superimpose(input, erode(fill_holes(motion_mask), se, erosion_passes));
}

}  // namespace shadowseg
