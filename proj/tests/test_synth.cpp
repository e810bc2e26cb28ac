#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "fdv/clustering.hpp"
#include "fdv/error.hpp"
#include "fdv/export.hpp"
#include "fdv/image_io.hpp"
#include "fdv/segmentation.hpp"
#include "fdv/synth.hpp"

namespace fdv {
namespace {

ColorThresholds fire_thresholds() {
  ColorThresholds t;
  t.rgb_lo = {200, 60, 0};
  t.rgb_hi = {255, 200, 80};
  t.hsv_lo = {0, 0.6, 0.7};
  t.hsv_hi = {60, 1, 1};
  return t;
}

ColorThresholds smoke_thresholds() {
  ColorThresholds t;
  t.rgb_lo = {120, 120, 120};
  t.rgb_hi = {200, 200, 200};
  t.hsv_lo = {0, 0, 0.45};
  t.hsv_hi = {360, 0.15, 0.85};
  return t;
}

TEST(Synth, ExpandingDiskTruth) {
  auto s = Scenario::defaults(ScenarioKind::expanding_disk);
  s.width = s.height = 128;
  const auto out = render(s);
  ASSERT_EQ(out.frames.size(), 20u);
  for (int t = 0; t < 20; ++t) {
    const double r = 10 + 2.0 * t;
    const auto& m = out.truth.burning[t];
    for (int y = 0; y < 128; ++y)
      for (int x = 0; x < 128; ++x) {
        const double dx = x - 63.5, dy = y - 63.5;
        EXPECT_EQ(m.at(x, y), dx * dx + dy * dy <= r * r);
      }
    for (double v : out.truth.normal_speed[t]) EXPECT_EQ(v, 2.0);
  }
}

TEST(Synth, NoiselessSegmentationIsExact) {
  for (auto kind : {ScenarioKind::expanding_disk, ScenarioKind::translating_front, ScenarioKind::ring_fire,
                    ScenarioKind::two_flanks}) {
    const auto out = render(Scenario::defaults(kind));
    for (std::size_t t = 0; t < out.frames.size(); ++t) {
      EXPECT_EQ(segment_visual(out.frames[t], fire_thresholds()), out.truth.burning[t]) << to_string(kind);
      EXPECT_EQ(segment_visual(out.frames[t], smoke_thresholds()).count(), 0u);
    }
  }
  const auto plume = render(Scenario::defaults(ScenarioKind::advected_plume));
  for (std::size_t t = 0; t < plume.frames.size(); ++t) {
    EXPECT_EQ(segment_visual(plume.frames[t], smoke_thresholds()), plume.truth.smoke[t]);
    EXPECT_EQ(segment_visual(plume.frames[t], fire_thresholds()).count(), 0u);
  }
}

TEST(Synth, PaletteColorsAreSeparated) {
  EXPECT_TRUE(fire_thresholds().accepts(palette::fire));
  for (auto c : {palette::background, palette::burned, palette::trees}) {
    EXPECT_FALSE(fire_thresholds().accepts(c));
    EXPECT_FALSE(smoke_thresholds().accepts(c));
  }
  for (int g = palette::smoke_lo; g <= palette::smoke_hi; ++g) {
    const Rgb c{static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(g)};
    EXPECT_TRUE(smoke_thresholds().accepts(c));
  }
}

TEST(Synth, TranslatingFrontBurnTimeIsExact) {
  auto s = Scenario::defaults(ScenarioKind::translating_front);
  s.burn_duration = 5;
  s.speed = 3;
  const auto out = render(s, 2.0);
  std::vector<LabelGrid> labels;
  for (std::size_t t = 0; t < out.frames.size(); ++t) {
    ClassMasks m;
    m.burning = out.truth.burning[t];
    m.burned_cooling = out.truth.burned[t];
    labels.push_back(compose_labels(m));
  }
  const auto& last = out.truth.burned.back();
  int checked = 0;
  for (std::size_t i = 0; i < last.size(); ++i)
    if (last[i]) {
      EXPECT_EQ(out.truth.burn_frames[i], 5);
      ++checked;
    }
  EXPECT_GT(checked, 1000);
  // Label-derived burn times agree with the analytic per-pixel counts.
  std::vector<double> want;
  for (int f : out.truth.burn_frames)
    if (f > 0) want.push_back(f / 2.0);
  EXPECT_EQ(burn_time_per_pixel(labels, 2.0), want);
}

TEST(Synth, SeedsOnlyChangeNoise) {
  auto s = Scenario::defaults(ScenarioKind::ring_fire);
  s.noise = 0.01;
  const auto a = render(s);
  const auto b = render(s);
  s.seed = 2;
  const auto c = render(s);
  s.noise = 0;
  const auto clean = render(s);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_NE(a.frames, c.frames);
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    const auto pa = a.frames[t].rgb(), pc = c.frames[t].rgb(), p0 = clean.frames[t].rgb();
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (!(pa[i] == p0[i])) EXPECT_EQ(pa[i], palette::fire);
      if (!(pc[i] == p0[i])) EXPECT_EQ(pc[i], palette::fire);
    }
  }
}

TEST(Synth, TwoFlanksStaySeparated) {
  const auto out = render(Scenario::defaults(ScenarioKind::two_flanks));
  for (std::size_t t = 0; t < out.frames.size(); ++t) {
    const auto regions = split_regions(out.truth.burning[t], 20.0, 10);
    EXPECT_EQ(regions.size(), 2u) << t;
  }
}

TEST(Synth, OcclusionsPaintTrees) {
  auto s = Scenario::defaults(ScenarioKind::expanding_disk);
  s.occlusions = {{100, 100, 20, 10}};
  const auto out = render(s);
  EXPECT_EQ(out.frames[5].rgb_at(105, 105), palette::trees);
}

TEST(Synth, GeometryValidation) {
  auto s = Scenario::defaults(ScenarioKind::expanding_disk);
  s.frames = 200;
  try {
    render(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::scenario);
  }
  s = Scenario::defaults(ScenarioKind::translating_front);
  s.speed = -1;
  EXPECT_THROW(render(s), Error);
  s = Scenario::defaults(ScenarioKind::advected_plume);
  s.frames = 100;
  EXPECT_THROW(render(s), Error);
  s = Scenario::defaults(ScenarioKind::expanding_disk);
  s.occlusions = {{250, 250, 20, 20}};
  EXPECT_THROW(render(s), Error);
}

TEST(Synth, WritesLoadableLayout) {
  auto s = Scenario::defaults(ScenarioKind::expanding_disk);
  s.frames = 3;
  s.width = s.height = 64;
  const auto out = render(s);
  const auto dir = std::filesystem::temp_directory_path() / "fdv_synth_layout";
  std::filesystem::remove_all(dir);
  write_synth(out, dir);
  EXPECT_EQ(read_png(dir / "frames" / "frame_000002.png"), out.frames[2].to_rgb_image());
  EXPECT_TRUE(std::filesystem::exists(dir / "truth" / "boundary_t000001.csv"));
  const auto bf = read_csv_grid(dir / "truth" / "burn_frames.csv");
  EXPECT_EQ(bf.width, 64);
}

}  // namespace
}  // namespace fdv
