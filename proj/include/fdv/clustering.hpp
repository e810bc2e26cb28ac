#pragma once

#include <vector>

#include "fdv/geometry.hpp"
#include "fdv/segmentation.hpp"

namespace fdv {

inline constexpr int kNoise = -1;

struct Clustering {
  std::vector<int> labels;  // per input point: cluster id >= 0, or kNoise
  double eps = 0.0;
  int min_pts = 0;
  int cluster_count = 0;
};

// DBSCAN with Euclidean distance. A point is core when at least min_pts
// points (itself included) lie within eps. Cluster ids are contiguous and
// numbered by the row-major order of each cluster's first core point. A
// border point joins the cluster of its row-major-first core neighbor, so
// the result does not depend on input order.
Clustering dbscan(const PointSet& points, double eps, int min_pts);

// Clusters the set pixels of a mask; noise is dropped. Regions are ordered
// by descending size, ties by their row-major-first pixel. Each region's
// points are in row-major order.
std::vector<PointSet> split_regions(const BinaryMask& mask, double eps, int min_pts);

}  // namespace fdv
