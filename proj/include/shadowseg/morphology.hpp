#pragma once

#include <array>
#include <cstddef>

#include "shadowseg/frame.hpp"

namespace shadowseg {

// 3x3 structuring element, row-major, centre must be set.
class StructuringElement {
 public:
  // Full 3x3 square.
  StructuringElement();
  // Throws ValidationError if the centre is unset.
  explicit StructuringElement(const std::array<bool, 9>& cells);

  static StructuringElement square() { return {}; }
  static StructuringElement cross();

  bool at(std::size_t row, std::size_t col) const { return cells_[row * 3 + col]; }

 private:
  std::array<bool, 9> cells_;
};

// D_HF: input colors on the blob, black off it.
struct HoleFilledFrame {
  RgbFrame frame;
  BinaryMask mask;
};

// Background pixels not 4-connected through background to the frame border
// become foreground.
BinaryMask fill_holes(const BinaryMask& mask);

// One erosion pass. Off-frame positions count as background.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se = {});
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se, unsigned passes);

HoleFilledFrame superimpose(const RgbFrame& input, const BinaryMask& mask);

// fill_holes, then `erosion_passes` erosions, then superimpose.
HoleFilledFrame postprocess(const RgbFrame& input, const BinaryMask& motion_mask,
                            unsigned erosion_passes = 1,
                            const StructuringElement& se = {});

}  // namespace shadowseg
