#include "shadowseg/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "shadowseg/error.hpp"

namespace fs = std::filesystem;

namespace shadowseg {

namespace {

void check_readable(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError("cannot read " + path.string() + ": no such file");
  }
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path.string());
}

// Decoded 8-bit image with 1, 3 or 4 channels (BGR order, OpenCV convention).
cv::Mat decode_8bit(const fs::path& path) {
  check_readable(path);
  cv::Mat img;
  try {
    img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw FormatError("cannot decode " + path.string() + ": " + e.what());
  }
  if (img.empty()) throw FormatError("cannot decode " + path.string());
  if (img.depth() != CV_8U) {
    throw FormatError(path.string() + " is not an 8-bit image");
  }
  const int ch = img.channels();
  if (ch != 1 && ch != 3 && ch != 4) {
    throw FormatError(path.string() + " has unsupported channel count " + std::to_string(ch));
  }
  return img;
}

Rgb pixel_at(const cv::Mat& img, int x, int y) {
  const std::uint8_t* row = img.ptr<std::uint8_t>(y);
  switch (img.channels()) {
    case 1: {
      const auto v = row[x];
      return {v, v, v};
    }
    case 3: {
      const auto* p = row + 3 * x;
      return {p[2], p[1], p[0]};
    }
    default: {
      const auto* p = row + 4 * x;
      return {p[2], p[1], p[0]};
    }
  }
}

void write_png(const cv::Mat& img, const fs::path& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img, {cv::IMWRITE_PNG_COMPRESSION, 3});
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

bool is_image_extension(std::string ext) {
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}  // namespace

RgbFrame load_frame(const fs::path& path) {
  const cv::Mat img = decode_8bit(path);
  if (img.cols < static_cast<int>(kMinFrameSide) || img.rows < static_cast<int>(kMinFrameSide)) {
    throw FormatError(path.string() + " is " + std::to_string(img.cols) + "x" +
                      std::to_string(img.rows) + ", minimum is 3x3");
  }
  std::vector<Rgb> pixels;
  pixels.reserve(static_cast<std::size_t>(img.rows) * static_cast<std::size_t>(img.cols));
  for (int y = 0; y < img.rows; ++y) {
    for (int x = 0; x < img.cols; ++x) pixels.push_back(pixel_at(img, x, y));
  }
  return RgbFrame(static_cast<std::size_t>(img.cols), static_cast<std::size_t>(img.rows),
                  std::move(pixels));
}

void save_frame(const RgbFrame& frame, const fs::path& path) {
  cv::Mat img(static_cast<int>(frame.height()), static_cast<int>(frame.width()), CV_8UC3);
  for (std::size_t y = 0; y < frame.height(); ++y) {
    auto* row = img.ptr<std::uint8_t>(static_cast<int>(y));
    for (std::size_t x = 0; x < frame.width(); ++x) {
      const Rgb p = frame.at(x, y);
      row[3 * x + 0] = p.b;
      row[3 * x + 1] = p.g;
      row[3 * x + 2] = p.r;
    }
  }
  write_png(img, path);
}

BinaryMask load_mask(const fs::path& path) {
  const cv::Mat img = decode_8bit(path);
  BinaryMask mask(static_cast<std::size_t>(img.cols), static_cast<std::size_t>(img.rows));
  for (int y = 0; y < img.rows; ++y) {
    for (int x = 0; x < img.cols; ++x) {
      const Rgb p = pixel_at(img, x, y);
      mask.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
               p.r != 0 || p.g != 0 || p.b != 0);
    }
  }
  return mask;
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
  cv::Mat img(static_cast<int>(mask.height()), static_cast<int>(mask.width()), CV_8UC1);
  for (std::size_t y = 0; y < mask.height(); ++y) {
    auto* row = img.ptr<std::uint8_t>(static_cast<int>(y));
    for (std::size_t x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
  }
  write_png(img, path);
}

GroundTruth load_ground_truth(const fs::path& cast_path, const fs::path& self_path) {
  BinaryMask cast = load_mask(cast_path);
  BinaryMask self = load_mask(self_path);
  if (!same_size(cast, self)) {
    throw FormatError("ground truth " + cast_path.string() + " and " + self_path.string() +
                      " differ in size");
  }
  return GroundTruth(std::move(cast), std::move(self));
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_extension(entry.path().extension().string())) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace shadowseg
