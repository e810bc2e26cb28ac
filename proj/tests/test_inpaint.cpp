#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fdv/error.hpp"
#include "fdv/inpaint.hpp"
#include "oracles/laplace_oracle.hpp"

namespace fdv {
namespace {

BinaryMask rect_mask(int w, int h, int x0, int y0, int rw, int rh) {
  BinaryMask m(w, h);
  for (int y = y0; y < y0 + rh; ++y)
    for (int x = x0; x < x0 + rw; ++x) m.set(x, y);
  return m;
}

std::vector<double> smooth_field(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> a(-1, 1);
  const double c1 = a(rng), c2 = a(rng), c3 = a(rng);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      v[y * w + x] = 300 + 80 * std::sin(0.07 * x * (1 + c1) + c2) * std::cos(0.05 * y + c3) + 0.5 * x;
  return v;
}

TEST(Inpaint, ConstantImageFilledExactly) {
  for (auto mode : {InpaintMode::transport, InpaintMode::harmonic}) {
    InpaintOptions o;
    o.mode = mode;
    const auto vis = Frame::visual(30, 20, std::vector<Rgb>(600, {17, 200, 91}));
    const auto out = inpaint(vis, rect_mask(30, 20, 5, 3, 12, 9), o);
    EXPECT_EQ(out, vis);
    const auto ir = Frame::infrared(30, 20, std::vector<double>(600, 412.25));
    const auto m = rect_mask(30, 20, 0, 0, 10, 20);  // touches a border
    EXPECT_EQ(inpaint(ir, m, o), ir);
  }
}

TEST(Inpaint, EmptyMaskIsIdentity) {
  std::mt19937_64 rng(1);
  const auto ir = Frame::infrared(20, 20, smooth_field(rng, 20, 20));
  EXPECT_EQ(inpaint(ir, BinaryMask(20, 20)), ir);
}

TEST(Inpaint, HarmonicRampMatchesOracle) {
  const int w = 48, h = 40;
  std::vector<double> ramp(w * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) ramp[y * w + x] = 20 + 3.0 * x + 2.0 * y;
  InpaintOptions o;
  o.mode = InpaintMode::harmonic;
  for (const auto& m : {rect_mask(w, h, 10, 8, 20, 15), rect_mask(w, h, 0, 5, 12, 30)}) {
    const auto want = oracle::laplace_oracle(w, h, ramp, m);
    const auto got = inpaint(Frame::infrared(w, h, ramp), m, o);
    for (int i = 0; i < w * h; ++i)
      EXPECT_NEAR(got.temperature()[i], want[i], 0.01 * std::abs(want[i]));
  }
}

TEST(Inpaint, HarmonicSmoothFieldMatchesOracle) {
  std::mt19937_64 rng(2);
  const int w = 50, h = 45;
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = smooth_field(rng, w, h);
    std::uniform_int_distribution<int> pos(0, 30);
    const auto m = rect_mask(w, h, pos(rng), pos(rng), 6 + rep * 3, 5 + rep * 2);
    InpaintOptions o;
    o.mode = InpaintMode::harmonic;
    const auto got = inpaint_channel(w, h, f, m, o);
    EXPECT_TRUE(got.converged);
    const auto want = oracle::laplace_oracle(w, h, f, m);
    for (int i = 0; i < w * h; ++i) EXPECT_NEAR(got.values[i], want[i], 0.01 * std::abs(want[i]));
  }
}

TEST(Inpaint, MaximumPrincipleOnRandomHoles) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(0, 255);
  for (int rep = 0; rep < 100; ++rep) {
    const int w = 24, h = 20;
    std::vector<Rgb> px(w * h);
    for (auto& p : px) p = {static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
    const auto f = Frame::visual(w, h, px);
    std::uniform_int_distribution<int> pos(0, 15), size(1, 8);
    const auto m = rect_mask(w, h, pos(rng), pos(rng) % 13, size(rng), size(rng));
    InpaintOptions o;
    o.mode = rep % 2 ? InpaintMode::harmonic : InpaintMode::transport;
    o.max_iters = 300;
    const auto out = inpaint(f, m, o);
    std::array<int, 3> lo{255, 255, 255}, hi{0, 0, 0};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!m.at(x, y)) continue;
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h || m.at(xx, yy)) continue;
          const auto& q = f.rgb_at(xx, yy);
          const int ch[3] = {q.r, q.g, q.b};
          for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], ch[k]), hi[k] = std::max(hi[k], ch[k]);
        }
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const auto& p = out.rgb_at(x, y);
        if (!m.at(x, y)) {
          EXPECT_EQ(p, f.rgb_at(x, y));
          continue;
        }
        const int ch[3] = {p.r, p.g, p.b};
        for (int k = 0; k < 3; ++k) {
          EXPECT_GE(ch[k], lo[k]);
          EXPECT_LE(ch[k], hi[k]);
        }
      }
  }
}

TEST(Inpaint, TransportFillsEdgeAcrossHole) {
  // A vertical step edge crossing the hole continues through it.
  const int w = 40, h = 40;
  std::vector<double> v(w * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) v[y * w + x] = x < 20 ? 50.0 : 200.0;
  const auto m = rect_mask(w, h, 14, 14, 12, 12);
  const auto got = inpaint_channel(w, h, v, m, {});
  for (int y = 14; y < 26; ++y) {
    EXPECT_LT(got.values[y * w + 15], 125.0);
    EXPECT_GT(got.values[y * w + 24], 125.0);
  }
}

TEST(Inpaint, FullMaskAndNonConvergence) {
  const auto f = Frame::infrared(8, 8, std::vector<double>(64, 1.0));
  try {
    inpaint(f, BinaryMask(8, 8, true));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_boundary);
  }
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) v[i] = (i % 8) * (i % 8);
  InpaintOptions o;
  o.mode = InpaintMode::harmonic;
  o.max_iters = 1;
  o.tol = 1e-12;
  Warnings w;
  inpaint(Frame::infrared(8, 8, v), rect_mask(8, 8, 2, 2, 4, 4), o, &w);
  EXPECT_FALSE(w.empty());
  o.dt = 0.5;
  EXPECT_THROW(o.validate(), Error);
}

TEST(AutoOcclusion, ThresholdBehaviour) {
  const int w = 30, h = 20;
  std::vector<Rgb> px(w * h, {200, 150, 120});
  for (int y = 4; y < 11; ++y)
    for (int x = 6; x < 19; ++x) px[y * w + x] = {20, 160, 30};
  const auto f = Frame::visual(w, h, px);
  ColorThresholds green;
  green.hsv_lo = {90, 0.5, 0.3};
  green.hsv_hi = {150, 1.0, 1.0};
  EXPECT_EQ(auto_occlusion(f, green), rect_mask(w, h, 6, 4, 13, 7));
  ColorThresholds none;
  none.rgb_lo = {255, 255, 255};
  none.rgb_hi = {255, 255, 255};
  EXPECT_EQ(auto_occlusion(f, none).count(), 0u);
  const auto all = auto_occlusion(f, ColorThresholds::full_range());
  EXPECT_EQ(all.count(), static_cast<std::size_t>(w * h));
  EXPECT_THROW(inpaint(f, all), Error);
}

}  // namespace
}  // namespace fdv
