#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "shadowseg/error.hpp"
#include "shadowseg/evaluation.hpp"

using namespace shadowseg;

namespace {

ClassMap cast_at(std::size_t w, std::size_t h, std::initializer_list<std::pair<int, int>> cells) {
  ClassMap m(w, h, PixelClass::Object);
  for (auto [x, y] : cells) m.set(x, y, PixelClass::CastShadow);
  return m;
}

BinaryMask mask_at(std::size_t w, std::size_t h, std::initializer_list<std::pair<int, int>> cells) {
  BinaryMask m(w, h);
  for (auto [x, y] : cells) m.set(x, y, true);
  return m;
}

FrameScore frame_with_cast_f(const std::string& id, double f) {
  FrameScore fs;
  fs.frame_id = id;
  fs.cast_counts = {1, 0, 0, 0};
  fs.cast = ClassScore{f, f, f};
  return fs;
}

}  // namespace

TEST_CASE("confusion examples") {
  SUBCASE("prediction equals ground truth") {
    ClassMap pred(20, 20, PixelClass::Object);
    BinaryMask cast(20, 20);
    for (std::size_t y = 0; y < 10; ++y) {
      for (std::size_t x = 0; x < 10; ++x) {
        pred.set(x, y, PixelClass::CastShadow);
        cast.set(x, y, true);
      }
    }
    const auto c = confusion(pred, GroundTruth(cast, BinaryMask(20, 20)), ShadowClass::Cast);
    CHECK(c == ConfusionCounts{100, 0, 0, 300});
  }

  SUBCASE("empty prediction") {
    BinaryMask self(5, 5);
    for (int i = 0; i < 7; ++i) self.set(i % 5, i / 5, true);
    const auto c = confusion(ClassMap(5, 5), GroundTruth(BinaryMask(5, 5), self), ShadowClass::Self);
    CHECK(c.tp == 0);
    CHECK(c.fp == 0);
    CHECK(c.fn == 7);
    CHECK(c.tn == 18);
  }

  SUBCASE("hand-enumerated 4x4 cells") {
    const auto pred = cast_at(4, 4, {{0, 0}, {1, 1}});
    const GroundTruth gt(mask_at(4, 4, {{1, 1}, {2, 2}}), BinaryMask(4, 4));
    const auto c = confusion(pred, gt, ShadowClass::Cast);
    CHECK(c == ConfusionCounts{1, 1, 1, 13});
    CHECK(c.total() == 16);
  }

  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(confusion(ClassMap(4, 4), GroundTruth(BinaryMask(4, 5), BinaryMask(4, 5)),
                              ShadowClass::Cast),
                    ValidationError);
  }
}

TEST_CASE("score examples") {
  const auto perfect = score({10, 0, 0, 0});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f == 1.0);

  const auto half = score({1, 1, 1, 0});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f == 0.5);

  const auto mixed = score({3, 1, 2, 0});
  CHECK(mixed.precision == 0.75);
  CHECK(mixed.recall == 0.6);
  CHECK(std::abs(mixed.f - 2.0 / 3.0) <= 1e-12);

  const auto none = score({0, 0, 0, 50});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f == 0.0);
  CHECK(ConfusionCounts{0, 0, 0, 50}.degenerate());
  CHECK_FALSE(ConfusionCounts{0, 3, 0, 0}.degenerate());
  CHECK(score({0, 3, 0, 0}).f == 0.0);
  CHECK(score({0, 0, 4, 0}).f == 0.0);
}

TEST_CASE("score is total and behaves as a harmonic mean") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::uint64_t> small(0, 3);
  std::uniform_int_distribution<std::uint64_t> large(0, 100000);
  for (int i = 0; i < 20000; ++i) {
    auto& d = (i % 2 == 0) ? small : large;
    const ConfusionCounts c{d(rng), d(rng), d(rng), d(rng)};
    const ClassScore s = score(c);
    CHECK(std::isfinite(s.precision));
    CHECK(std::isfinite(s.recall));
    CHECK(std::isfinite(s.f));
    CHECK(s.f >= 0.0);
    CHECK(s.f <= 1.0);
    const double lo = std::min(s.precision, s.recall);
    const double hi = std::max(s.precision, s.recall);
    CHECK(s.f >= lo - 1e-15);
    CHECK(s.f <= hi + 1e-15);
    CHECK(s.f <= (s.precision + s.recall) / 2.0 + 1e-15);
    CHECK(s.f <= std::sqrt(s.precision * s.recall) + 1e-15);

    ConfusionCounts more = c;
    ++more.tp;
    CHECK(score(more).f >= s.f - 1e-15);
  }
}

TEST_CASE("score_frame skips classes with nothing predicted or labeled") {
  ClassMap pred(4, 4, PixelClass::Object);
  pred.set(0, 0, PixelClass::CastShadow);
  const GroundTruth gt(mask_at(4, 4, {{0, 0}}), BinaryMask(4, 4));
  const FrameScore fs = score_frame("in000002", pred, gt);
  REQUIRE(fs.cast.has_value());
  CHECK(fs.cast->f == 1.0);
  CHECK_FALSE(fs.self.has_value());
  CHECK(fs.self_counts.tn == 16);
}

TEST_CASE("aggregate") {
  SUBCASE("single frame") {
    const auto r = aggregate("seq", {frame_with_cast_f("a", 0.8)});
    CHECK(r.mean_cast_f == 0.8);
    CHECK_FALSE(r.mean_self_f.has_value());
  }

  SUBCASE("four frames") {
    const auto r = aggregate("seq", {frame_with_cast_f("a", 0.75), frame_with_cast_f("b", 0.58),
                                     frame_with_cast_f("c", 0.85), frame_with_cast_f("d", 0.45)});
    REQUIRE(r.mean_cast_f.has_value());
    CHECK(*r.mean_cast_f == doctest::Approx(0.6575).epsilon(1e-12));
    CHECK(r.cast_frames == 4);
  }

  SUBCASE("skipped frames do not count") {
    FrameScore empty;
    empty.frame_id = "e";
    const auto r = aggregate("seq", {frame_with_cast_f("a", 0.5), empty});
    CHECK(r.mean_cast_f == 0.5);
    CHECK(r.cast_frames == 1);
    CHECK(r.frames.size() == 2);
  }

  SUBCASE("combined mean") {
    FrameScore fs = frame_with_cast_f("a", 0.6);
    fs.self_counts = {1, 1, 0, 0};
    fs.self = ClassScore{0.5, 1.0, 0.2};
    const auto r = aggregate("seq", {fs});
    CHECK(combined_mean_f(r) == doctest::Approx(0.4));
  }

  CHECK_THROWS_AS(aggregate("seq", {}), ValidationError);
}

TEST_CASE("report layout") {
  ClassMap pred = cast_at(4, 4, {{0, 0}, {1, 1}});
  pred.set(3, 3, PixelClass::SelfShadow);
  const GroundTruth gt(mask_at(4, 4, {{1, 1}, {2, 2}}), mask_at(4, 4, {{3, 3}}));
  const DatasetReport a = aggregate("alpha", {score_frame("in000002", pred, gt)});
  const DatasetReport b = aggregate("beta", {score_frame("in000007", pred, gt)});

  std::ostringstream one;
  write_report(one, std::span(&a, 1));
  CHECK(one.str() ==
        "# frame\tclass\ttp\tfp\tfn\tprecision\trecall\tf\n"
        "in000002\tcast\t1\t1\t1\t0.500000\t0.500000\t0.500000\n"
        "in000002\tself\t1\t0\t0\t1.000000\t1.000000\t1.000000\n"
        "\n# summary\nDataset\tF Cast shadow\tF Self shadow\n"
        "alpha\t0.500000\t1.000000\n");

  const std::vector<DatasetReport> both{a, b};
  std::ostringstream two;
  write_report(two, both);
  CHECK(two.str().ends_with("alpha\t0.500000\t1.000000\nbeta\t0.500000\t1.000000\n"
                            "Mean\t0.500000\t1.000000\n"));
}
