#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"
#include "fdv/imagery.hpp"

namespace fdv {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("fdv_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Frame gradient_frame(int w, int h) {
  std::vector<Rgb> px;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      px.push_back({static_cast<std::uint8_t>(x % 256), static_cast<std::uint8_t>(y % 256), 7});
  return Frame::visual(w, h, std::move(px));
}

TEST(RgbToHsv, PrimaryAndGrayValues) {
  auto red = rgb_to_hsv({255, 0, 0});
  EXPECT_DOUBLE_EQ(red.h, 0);
  EXPECT_DOUBLE_EQ(red.s, 1);
  EXPECT_DOUBLE_EQ(red.v, 1);
  auto green = rgb_to_hsv({0, 255, 0});
  EXPECT_DOUBLE_EQ(green.h, 120);
  EXPECT_DOUBLE_EQ(green.s, 1);
  EXPECT_DOUBLE_EQ(green.v, 1);
  auto gray = rgb_to_hsv({128, 128, 128});
  EXPECT_DOUBLE_EQ(gray.h, 0);
  EXPECT_DOUBLE_EQ(gray.s, 0);
  EXPECT_NEAR(gray.v, 0.502, 5e-4);
  auto magenta = rgb_to_hsv({255, 0, 128});
  EXPECT_GT(magenta.h, 300);
  EXPECT_LT(magenta.h, 360);
}

TEST(RgbToHsv, InverseReconstructsWithinOne) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(0, 255);
  for (int i = 0; i < 100000; ++i) {
    const Rgb p{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)),
                static_cast<std::uint8_t>(c(rng))};
    const auto hsv = rgb_to_hsv(p);
    ASSERT_GE(hsv.h, 0);
    ASSERT_LT(hsv.h, 360);
    const Rgb back = hsv_to_rgb(hsv);
    ASSERT_LE(std::abs(int{back.r} - p.r), 1);
    ASSERT_LE(std::abs(int{back.g} - p.g), 1);
    ASSERT_LE(std::abs(int{back.b} - p.b), 1);
  }
}

TEST(FrameStride, IntegralAndNonIntegral) {
  EXPECT_EQ(frame_stride(30, 1), 30u);
  EXPECT_EQ(frame_stride(30, 2), 15u);
  EXPECT_EQ(frame_stride(30, 30), 1u);
  EXPECT_THROW(frame_stride(30, 7), Error);
  EXPECT_THROW(frame_stride(30, 0), Error);
}

TEST(Subsample, ComposesAcrossRates) {
  std::vector<Frame> frames;
  for (std::size_t i = 0; i < 95; ++i) {
    auto f = Frame::infrared(1, 1, {static_cast<double>(i)}, i, 0.0);
    frames.push_back(f);
  }
  // f = 30, f_s = 10, f_s' = 2 (divides 10)
  const auto twice = subsample(subsample(frames, frame_stride(30, 10)), frame_stride(10, 2));
  const auto once = subsample(frames, frame_stride(30, 2));
  ASSERT_EQ(twice.size(), once.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(twice[i].index(), once[i].index());
}

TEST(Crop, IdentitySubgridAndBounds) {
  const auto f = gradient_frame(100, 100);
  EXPECT_EQ(crop(f, {0, 0, 100, 100}), f);
  const auto c = crop(f, {20, 30, 10, 10});
  EXPECT_EQ(c.width(), 10);
  EXPECT_EQ(c.height(), 10);
  EXPECT_EQ(c.rgb_at(0, 0), f.rgb_at(20, 30));
  EXPECT_EQ(c.rgb_at(9, 9), f.rgb_at(29, 39));
  try {
    crop(f, {95, 0, 10, 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::bounds);
  }
}

TEST(Crop, NestedEqualsIntersection) {
  const auto f = gradient_frame(64, 48);
  const Rect outer{5, 4, 40, 30};
  const Rect inner_rel{3, 2, 20, 10};  // relative to outer
  const auto nested = crop(crop(f, outer), inner_rel);
  const Rect inner_abs{outer.x + inner_rel.x, outer.y + inner_rel.y, inner_rel.width, inner_rel.height};
  const auto direct = crop(f, intersect(outer, inner_abs));
  EXPECT_EQ(nested.rgb().size(), direct.rgb().size());
  EXPECT_TRUE(std::equal(nested.rgb().begin(), nested.rgb().end(), direct.rgb().begin()));
}

TEST(LoadSequence, SubsamplesAndTimestamps) {
  const auto dir = scratch_dir("load_seq");
  for (int i = 0; i < 30; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.csv", i);
    write_csv_grid(dir / name, ScalarGrid{3, 2, {1, 2, 3, 4, 5, double(i)}});
  }
  SequenceMeta meta;
  meta.frame_rate_hz = 30;
  meta.sample_rate_hz = 1;
  auto frames = load_sequence(dir, meta);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].index(), 0u);
  EXPECT_EQ(frames[0].kind(), FrameKind::infrared);

  meta.sample_rate_hz = 2;
  frames = load_sequence(dir, meta);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[1].index(), 15u);
  EXPECT_DOUBLE_EQ(frames[1].timestamp_s(), 0.5);
  EXPECT_DOUBLE_EQ(frames[1].temperature_at(2, 1), 15.0);

  meta.sample_rate_hz = 7;
  EXPECT_THROW(load_sequence(dir, meta), Error);
}

TEST(LoadSequence, Errors) {
  SequenceMeta meta;
  meta.frame_rate_hz = 1;
  meta.sample_rate_hz = 1;
  const auto empty = scratch_dir("load_empty");
  try {
    load_sequence(empty, meta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::empty_input);
  }

  const auto mismatch = scratch_dir("load_mismatch");
  write_csv_grid(mismatch / "frame_000000.csv", ScalarGrid{2, 2, {1, 2, 3, 4}});
  write_csv_grid(mismatch / "frame_000001.csv", ScalarGrid{3, 1, {1, 2, 3}});
  try {
    load_sequence(mismatch, meta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }

  const auto corrupt = scratch_dir("load_corrupt");
  write_text_file(corrupt / "frame_000000.png", "not a png");
  try {
    load_sequence(corrupt, meta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::load);
    EXPECT_NE(std::string(e.what()).find("frame_000000.png"), std::string::npos);
  }

  const auto bad_csv = scratch_dir("load_bad_csv");
  write_text_file(bad_csv / "frame_000000.csv", "1,2\n3,abc\n");
  EXPECT_THROW(load_sequence(bad_csv, meta), Error);
}

TEST(LoadSequence, PngRoundTripAndRoi) {
  const auto dir = scratch_dir("load_png");
  const auto f = gradient_frame(20, 10);
  write_png(dir / "frame_000000.png", f.to_rgb_image());
  SequenceMeta meta;
  meta.frame_rate_hz = 1;
  meta.sample_rate_hz = 1;
  auto frames = load_sequence(dir, meta);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_TRUE(std::equal(frames[0].rgb().begin(), frames[0].rgb().end(), f.rgb().begin()));
  meta.roi = Rect{2, 3, 5, 4};
  frames = load_sequence(dir, meta);
  EXPECT_EQ(frames[0].width(), 5);
  EXPECT_EQ(frames[0].rgb_at(0, 0), f.rgb_at(2, 3));
  meta.roi = Rect{18, 0, 5, 4};
  EXPECT_THROW(load_sequence(dir, meta), Error);
}

TEST(Frame, RejectsWrongPixelCount) {
  EXPECT_THROW(Frame::visual(3, 3, std::vector<Rgb>(8)), Error);
  EXPECT_THROW(Frame::infrared(0, 3, {}), Error);
}

}  // namespace
}  // namespace fdv
