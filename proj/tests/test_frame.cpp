#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "shadowseg/error.hpp"
#include "shadowseg/frame.hpp"
#include "shadowseg/image_io.hpp"
#include "support/oracles.hpp"

using namespace shadowseg;

TEST_CASE("frames below 3x3 are rejected") {
  CHECK_THROWS_AS(RgbFrame(2, 2), FormatError);
  CHECK_THROWS_AS(RgbFrame(3, 2), FormatError);
  CHECK_NOTHROW(RgbFrame(3, 3));
  CHECK_THROWS_AS(RgbFrame(3, 3, std::vector<Rgb>(8)), ValidationError);
}

TEST_CASE("gray frame values must lie in [0, 255]") {
  CHECK_THROWS_AS(GrayFrame(3, 1, std::vector<double>{0.0, 255.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(GrayFrame(3, 1, std::vector<double>{0.0, -0.1, 1.0}), ValidationError);
}

TEST_CASE("to_gray is the real channel mean") {
  CHECK(gray_value({30, 60, 90}) == 60.0);
  CHECK(gray_value({255, 255, 255}) == 255.0);
  // (10 + 20 + 40) / 3 = 70 / 3
  CHECK(gray_value({10, 20, 40}) == doctest::Approx(23.333333333333332).epsilon(1e-15));
  CHECK(gray_value({10, 20, 40}) != 23.0);

  RgbFrame f(3, 3, Rgb{10, 20, 40});
  const GrayFrame g = to_gray(f);
  CHECK(g.width() == 3);
  CHECK(g.height() == 3);
  CHECK(g.at(2, 2) == doctest::Approx(70.0 / 3.0));
}

TEST_CASE("to_gray properties over random pixels") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 5000; ++i) {
    const Rgb p{static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
                static_cast<std::uint8_t>(byte(rng))};
    const double g = gray_value(p);
    CHECK(g == gray_value({p.b, p.g, p.r}));
    CHECK(g == gray_value({p.g, p.b, p.r}));
    CHECK(g >= std::min({p.r, p.g, p.b}));
    CHECK(g <= std::max({p.r, p.g, p.b}));
  }
}

TEST_CASE("neighborhood replicates the nearest edge pixel") {
  SUBCASE("constant frame") {
    const GrayFrame g(8, 8, 50.0);
    const auto n = neighborhood(g, 4, 4);
    for (double v : n.values()) CHECK(v == 50.0);
  }

  // 3x3 frame with distinct values 0..8 row-major.
  std::vector<double> vals(9);
  for (int i = 0; i < 9; ++i) vals[i] = i;
  const GrayFrame g(3, 3, vals);

  SUBCASE("centre of a 3x3 frame is the frame itself") {
    const auto n = neighborhood(g, 1, 1);
    for (int i = 0; i < 9; ++i) CHECK(n.values()[i] == vals[i]);
  }

  SUBCASE("corner window replicates five entries") {
    const auto n = neighborhood(g, 0, 0);
    const std::array<double, 9> want{0, 0, 1, 0, 0, 1, 3, 3, 4};
    CHECK(n.values() == want);
    // Positions 0,1,2,3,6 (top row and left column) come from padding.
    int padded = 0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) padded += (r == 0 || c == 0) ? 1 : 0;
    }
    CHECK(padded == 5);
  }

  SUBCASE("out-of-range centre") {
    CHECK_THROWS_AS(neighborhood(g, 3, 0), BoundsError);
    CHECK_THROWS_AS(neighborhood(g, 0, 3), BoundsError);
  }
}

TEST_CASE("interior windows hold exactly the nine source values") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> val(0.0, 255.0);
  std::vector<double> vals(10 * 7);
  for (auto& v : vals) v = val(rng);
  const GrayFrame g(10, 7, vals);
  for (std::size_t h = 0; h < 7; ++h) {
    for (std::size_t w = 0; w < 10; ++w) {
      const auto n = neighborhood(g, w, h);
      for (double v : n.values()) {
        CHECK(std::find(vals.begin(), vals.end(), v) != vals.end());
      }
      if (w > 0 && h > 0 && w < 9 && h < 6) {
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) CHECK(n(r, c) == g.at(w + c - 1, h + r - 1));
        }
      }
    }
  }
}

TEST_CASE("ground truth labels are disjoint") {
  BinaryMask cast(4, 4);
  BinaryMask self(4, 4);
  cast.set(1, 1, true);
  self.set(2, 2, true);
  CHECK_NOTHROW(GroundTruth(cast, self));
  self.set(1, 1, true);
  CHECK_THROWS_AS(GroundTruth(cast, self), ValidationError);
  CHECK_THROWS_AS(GroundTruth(BinaryMask(4, 4), BinaryMask(4, 5)), ValidationError);
}

TEST_CASE("image files") {
  oracle::TempDir dir("frame");
  const auto p = dir.path();

  SUBCASE("solid black PNG loads as black") {
    save_frame(RgbFrame(8, 8), p / "black.png");
    const RgbFrame f = load_frame(p / "black.png");
    CHECK(f.width() == 8);
    CHECK(f.height() == 8);
    for (const Rgb& px : f.pixels()) CHECK(px == kBlack);
  }

  SUBCASE("PNG round trip is lossless") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbFrame f(13, 9);
    for (auto& px : f.pixels()) {
      px = {static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
            static_cast<std::uint8_t>(byte(rng))};
    }
    save_frame(f, p / "noise.png");
    CHECK(load_frame(p / "noise.png") == f);
  }

  SUBCASE("2x2 image is a format error") {
    BinaryMask tiny(2, 2, true);
    save_mask(tiny, p / "tiny.png");
    CHECK_THROWS_AS(load_frame(p / "tiny.png"), FormatError);
    CHECK(load_mask(p / "tiny.png").count() == 4);
  }

  SUBCASE("missing file is an I/O error, garbage is a format error") {
    CHECK_THROWS_AS(load_frame(p / "absent.png"), IoError);
    std::ofstream(p / "junk.png") << "not an image";
    CHECK_THROWS_AS(load_frame(p / "junk.png"), FormatError);
  }

  SUBCASE("ground-truth masks") {
    BinaryMask empty(10, 10);
    save_mask(empty, p / "c0.png");
    save_mask(empty, p / "s0.png");
    const GroundTruth none = load_ground_truth(p / "c0.png", p / "s0.png");
    CHECK(none.cast().count() == 0);
    CHECK(none.self().count() == 0);

    BinaryMask one(10, 10);
    one.set(5, 5, true);
    save_mask(one, p / "c1.png");
    const GroundTruth gt = load_ground_truth(p / "c1.png", p / "s0.png");
    CHECK(gt.cast().count() == 1);
    CHECK(gt.cast().at(5, 5));

    save_mask(one, p / "s1.png");
    CHECK_THROWS_AS(load_ground_truth(p / "c1.png", p / "s1.png"), ValidationError);

    save_mask(BinaryMask(10, 11), p / "s2.png");
    CHECK_THROWS_AS(load_ground_truth(p / "c1.png", p / "s2.png"), FormatError);
  }

  SUBCASE("frame listing sorts zero-padded names") {
    for (const char* n : {"in000010.png", "in000002.png", "in000100.png", "notes.txt"}) {
      if (std::string(n).ends_with(".png")) {
        save_frame(RgbFrame(3, 3), p / n);
      } else {
        std::ofstream(p / n) << "x";
      }
    }
    const auto frames = list_frames(p);
    REQUIRE(frames.size() == 3);
    CHECK(frames[0].filename() == "in000002.png");
    CHECK(frames[1].filename() == "in000010.png");
    CHECK(frames[2].filename() == "in000100.png");
  }
}
