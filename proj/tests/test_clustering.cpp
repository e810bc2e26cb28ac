#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fdv/clustering.hpp"
#include "fdv/error.hpp"
#include "oracles/dbscan_oracle.hpp"
#include "test_util.hpp"

namespace fdv {
namespace {

PointSet square_blob(int x0, int y0, int side) {
  PointSet p;
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) p.push_back({x, y});
  return p;
}

TEST(Dbscan, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 50 + 10 * rep;
    const auto pts = testing::random_points(rng, n, 0, 60 + rep * 3);
    const double eps = 1.5 + 0.25 * (rep % 12);
    const int min_pts = 1 + rep % 7;
    const auto got = dbscan(pts, eps, min_pts);
    const auto want = oracle::brute_force_dbscan(pts, eps, min_pts);
    EXPECT_EQ(got.labels, want) << "rep " << rep;
    EXPECT_EQ(got.cluster_count, want.empty() ? 0 : *std::max_element(want.begin(), want.end()) + 1);
  }
}

TEST(Dbscan, DenseCellsMatchBruteForce) {
  // Tight clumps exercise the all-core cell shortcut.
  std::mt19937_64 rng(12);
  PointSet pts;
  for (int c = 0; c < 6; ++c) {
    const auto clump = square_blob(15 * c, (c % 2) * 20, 5);
    pts.insert(pts.end(), clump.begin(), clump.end());
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  for (double eps : {3.0, 6.0, 9.5, 15.0}) {
    for (int min_pts : {3, 10, 25}) {
      EXPECT_EQ(dbscan(pts, eps, min_pts).labels, oracle::brute_force_dbscan(pts, eps, min_pts))
          << eps << " " << min_pts;
    }
  }
}

TEST(Dbscan, PermutationInvariant) {
  std::mt19937_64 rng(13);
  const auto pts = testing::random_points(rng, 600, 0, 120);
  const auto base = dbscan(pts, 4.0, 4);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<int> perm(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointSet shuffled;
    for (int i : perm) shuffled.push_back(pts[i]);
    const auto got = dbscan(shuffled, 4.0, 4);
    for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(got.labels[k], base.labels[perm[k]]);
  }
}

TEST(Dbscan, TwoSeparatedBlobs) {
  auto pts = square_blob(0, 0, 10);
  const auto far = square_blob(100, 100, 10);
  pts.insert(pts.end(), far.begin(), far.end());
  const auto c = dbscan(pts, 3.0, 5);
  EXPECT_EQ(c.cluster_count, 2);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(c.labels[i], 0);
  for (std::size_t i = 100; i < 200; ++i) EXPECT_EQ(c.labels[i], 1);
}

TEST(Dbscan, BlobsMergeWhenEpsBridgesGap) {
  auto pts = square_blob(0, 0, 10);
  const auto near = square_blob(14, 0, 10);  // gap of 5 columns between x=9 and x=14
  pts.insert(pts.end(), near.begin(), near.end());
  EXPECT_EQ(dbscan(pts, 4.0, 5).cluster_count, 2);
  EXPECT_EQ(dbscan(pts, 5.0, 5).cluster_count, 1);
}

TEST(Dbscan, NoiseAndMinPtsOne) {
  const PointSet pts{{0, 0}, {50, 50}, {100, 0}};
  const auto c = dbscan(pts, 5.0, 2);
  EXPECT_EQ(c.cluster_count, 0);
  for (int l : c.labels) EXPECT_EQ(l, kNoise);
  const auto singles = dbscan(pts, 5.0, 1);
  EXPECT_EQ(singles.cluster_count, 3);
  EXPECT_EQ(singles.labels, (std::vector<int>{0, 2, 1}));
}

TEST(Dbscan, Validation) {
  EXPECT_THROW(dbscan({{0, 0}}, 0.0, 1), Error);
  EXPECT_THROW(dbscan({{0, 0}}, 1.0, 0), Error);
  EXPECT_TRUE(dbscan({}, 1.0, 1).labels.empty());
}

TEST(SplitRegions, OrderedBySizeAndRowMajor) {
  BinaryMask m(80, 40);
  for (const auto& p : square_blob(2, 2, 5)) m.set(p.x, p.y);
  for (const auto& p : square_blob(40, 10, 12)) m.set(p.x, p.y);
  for (const auto& p : square_blob(60, 1, 5)) m.set(p.x, p.y);
  m.set(20, 35);
  const auto regions = split_regions(m, 2.0, 3);
  ASSERT_EQ(regions.size(), 3u);
  EXPECT_EQ(regions[0].size(), 144u);
  EXPECT_EQ(regions[1].front(), (Point{60, 1}));
  EXPECT_EQ(regions[2].front(), (Point{2, 2}));
  for (const auto& r : regions)
    EXPECT_TRUE(std::is_sorted(r.begin(), r.end(), [](Point a, Point b) { return row_major_less(a, b); }));
}

}  // namespace
}  // namespace fdv
