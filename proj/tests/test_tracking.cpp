#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fdv/error.hpp"
#include "fdv/tracking.hpp"
#include "oracles/matching_oracle.hpp"
#include "test_util.hpp"

namespace fdv {
namespace {

TEST(GreedyMatch, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size(1, 500);
  for (int rep = 0; rep < 100; ++rep) {
    const int span = 50 + rep * 5;
    const auto src = testing::random_points(rng, size(rng), 0, span);
    const auto dst = testing::random_points(rng, size(rng), -10, span + 10);
    const double max_dist = rep % 3 == 0 ? 1e6 : 2.0 + rep % 17;
    const auto got = greedy_match(src, dst, max_dist);
    EXPECT_EQ(got.pairs, oracle::brute_force_match(src, dst, max_dist)) << rep;
    EXPECT_EQ(got.pairs.size() + got.unmatched, src.size());
  }
}

TEST(GreedyMatch, TiesGoToRowMajorFirst) {
  const PointSet src{{5, 5}};
  const PointSet dst{{7, 5}, {3, 5}, {5, 7}, {5, 3}};
  const auto f = greedy_match(src, dst, 3.0);
  ASSERT_EQ(f.pairs.size(), 1u);
  EXPECT_EQ(f.pairs[0].dst, (Point{5, 3}));
}

TEST(GreedyMatch, IdentityAndTranslation) {
  std::mt19937_64 rng(22);
  PointSet src;
  // Points on a lattice of pitch 15 are pairwise farther apart than 2|u|.
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) src.push_back({x * 15 + static_cast<int>(rng() % 3), y * 15});
  const auto id = greedy_match(src, src, 1.0);
  for (const auto& d : id.pairs) EXPECT_EQ(d.dx * d.dx + d.dy * d.dy, 0);
  for (Point u : {Point{5, 0}, Point{-3, 4}, Point{2, -6}}) {
    PointSet dst;
    for (const auto& p : src) dst.push_back({p.x + u.x, p.y + u.y});
    const auto f = greedy_match(src, dst, std::hypot(u.x, u.y));
    ASSERT_EQ(f.pairs.size(), src.size());
    for (const auto& d : f.pairs) {
      EXPECT_EQ(d.dx, u.x);
      EXPECT_EQ(d.dy, u.y);
    }
  }
}

TEST(GreedyMatch, ManyToOneAndUnmatched) {
  const PointSet src{{0, 0}, {2, 0}, {100, 100}};
  const PointSet dst{{1, 0}};
  const auto f = greedy_match(src, dst, 5.0);
  ASSERT_EQ(f.pairs.size(), 2u);
  EXPECT_EQ(f.pairs[0].dst, f.pairs[1].dst);
  EXPECT_EQ(f.unmatched, 1u);
}

TEST(GreedyMatch, EmptyBoundaryWarns) {
  Warnings w;
  const auto f = greedy_match({{1, 1}}, {}, 5.0, 1.0, &w);
  EXPECT_TRUE(f.pairs.empty());
  EXPECT_FALSE(w.empty());
  EXPECT_THROW(greedy_match({{1, 1}}, {{1, 1}}, 0.0), Error);
}

TEST(Velocity, Conversions) {
  const auto v = to_velocity(3, 4, 1.0, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(v.magnitude, 10.0);
  const auto slow = to_velocity(1, 0, 1.0 / 0.79, 1.0 / 30.0, 0.0);
  EXPECT_NEAR(slow.magnitude, 23.7, 1e-9);
  const auto z = to_velocity(0, 0, 2.0, 1.0, 37.0);
  EXPECT_EQ(z.vx, 0.0);
  EXPECT_EQ(z.longitudinal, 0.0);
  EXPECT_EQ(z.transverse, 0.0);
}

TEST(Velocity, RotationPreservesMagnitude) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(-20, 20);
  std::uniform_real_distribution<double> ang(-360, 360);
  for (int i = 0; i < 1000; ++i) {
    const auto v = to_velocity(d(rng), d(rng), 1.27, 0.2, ang(rng));
    const double m2 = v.vx * v.vx + v.vy * v.vy;
    EXPECT_NEAR(v.longitudinal * v.longitudinal + v.transverse * v.transverse, m2, 1e-9 * std::max(1.0, m2));
    EXPECT_NEAR(v.magnitude * v.magnitude, m2, 1e-9 * std::max(1.0, m2));
  }
  const auto axis = to_velocity(0, 5, 1.0, 1.0, 90.0);
  EXPECT_NEAR(axis.longitudinal, 5.0, 1e-12);
  EXPECT_NEAR(axis.transverse, 0.0, 1e-12);
}

TEST(Velocity, DoublingRateDoublesVelocity) {
  DisplacementField f;
  f.pairs = {{{0, 0}, {3, 1}, 3, 1}, {{5, 5}, {4, 7}, -1, 2}};
  f.dt_s = 0.5;
  const auto a = to_velocities(f, 1.3, 20.0);
  f.dt_s = 0.25;
  const auto b = to_velocities(f, 1.3, 20.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_DOUBLE_EQ(b[i].vx, 2 * a[i].vx);
    EXPECT_DOUBLE_EQ(b[i].longitudinal, 2 * a[i].longitudinal);
  }
}

TEST(Velocity, PositiveLongitudinalSubset) {
  std::vector<VelocitySample> s;
  for (int dx : {-3, -1, 0, 2, 5}) s.push_back(to_velocity(dx, 0, 1, 1, 0));
  const auto lp = positive_longitudinal(s);
  EXPECT_EQ(lp, (std::vector<double>{2, 5}));
  double mean_l = 0;
  for (const auto& v : s) mean_l += v.longitudinal / s.size();
  EXPECT_GE((lp[0] + lp[1]) / 2, mean_l);
}

PointSet circle_points(double r) {
  PointSet p;
  const int n = static_cast<int>(2 * std::numbers::pi * r);
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * i / n;
    const Point q{static_cast<int>(std::lround(200 + r * std::cos(a))), static_cast<int>(std::lround(200 + r * std::sin(a)))};
    if (p.empty() || !(p.back() == q)) p.push_back(q);
  }
  return p;
}

TEST(TrackSequence, StaticBoundaryIsZero) {
  std::vector<std::vector<PointSet>> b(10, {circle_points(30)});
  const auto r = track_sequence(b, 1.0, 2.0, 0.0, 5.0);
  EXPECT_FALSE(r.samples.empty());
  for (const auto& s : r.samples) EXPECT_EQ(s.v.magnitude, 0.0);
}

TEST(TrackSequence, EmptySecondFrameAndShortSequence) {
  Warnings w;
  const auto r = track_sequence({{circle_points(10)}, {}}, 1.0, 1.0, 0.0, 5.0, 1, &w);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_FALSE(w.empty());
  try {
    track_sequence({{circle_points(10)}}, 1.0, 1.0, 0.0, 5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_sequence);
  }
}

TEST(TrackSequence, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(24);
  std::vector<std::vector<PointSet>> b;
  for (int t = 0; t < 12; ++t)
    b.push_back({testing::random_points(rng, 200, 0, 100), testing::random_points(rng, 50, 150, 200)});
  const auto a = track_sequence(b, 1.1, 2.0, 30.0, 15.0, 1);
  const auto c = track_sequence(b, 1.1, 2.0, 30.0, 15.0, 8);
  ASSERT_EQ(a.samples.size(), c.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].src, c.samples[i].src);
    EXPECT_EQ(a.samples[i].dst, c.samples[i].dst);
    EXPECT_EQ(a.samples[i].region, c.samples[i].region);
  }
}

}  // namespace
}  // namespace fdv
