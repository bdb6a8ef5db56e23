#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "shadowseg/frame.hpp"

namespace shadowseg {

// Decodes an 8-bit PNG/JPEG/BMP into RGB. Grayscale inputs are expanded and
// alpha is dropped. Throws IoError when the file cannot be read, FormatError
// when it cannot be decoded, is 16-bit, or is smaller than 3x3.
RgbFrame load_frame(const std::filesystem::path& path);

// Always PNG regardless of extension handling in the codec.
void save_frame(const RgbFrame& frame, const std::filesystem::path& path);

// Nonzero in any channel marks the pixel. No minimum size.
BinaryMask load_mask(const std::filesystem::path& path);
// Written as 8-bit grayscale, 255 on / 0 off.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

GroundTruth load_ground_truth(const std::filesystem::path& cast_path,
                              const std::filesystem::path& self_path);

// Image files directly inside `dir`, sorted lexicographically by filename
// (zero-padded CDnet names such as in000136.jpg sort in temporal order).
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace shadowseg
