#include "fdv/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "fdv/error.hpp"

namespace fdv {

namespace {

// Cells of side eps/sqrt(2): any two points sharing a cell are within eps,
// and every eps-neighbor of a point lies in the 5x5 block around its cell.
class CellGrid {
 public:
  CellGrid(const PointSet& pts, const std::vector<int>& order, double eps)
      : side_(eps / std::sqrt(2.0)), cell_of_point_(pts.size(), -1) {
    for (int idx : order) {
      const auto key = key_of(pts[idx]);
      auto [it, inserted] = index_.try_emplace(key, static_cast<int>(cells_.size()));
      if (inserted) {
        cells_.push_back({});
        coords_.push_back(cell_of(pts[idx]));
      }
      cells_[it->second].push_back(idx);
      cell_of_point_[idx] = it->second;
    }
  }

  std::pair<long long, long long> cell_of(const Point& p) const {
    return {static_cast<long long>(std::floor(p.x / side_)),
            static_cast<long long>(std::floor(p.y / side_))};
  }

  const std::vector<std::vector<int>>& cells() const { return cells_; }
  int cell_index(int point) const { return cell_of_point_[point]; }

  template <typename Fn>
  void for_each_neighbor_cell(int cell, Fn&& fn) const {
    const auto [cx, cy] = coords_[cell];
    for (long long dy = -2; dy <= 2; ++dy) {
      for (long long dx = -2; dx <= 2; ++dx) {
        auto it = index_.find(pack(cx + dx, cy + dy));
        if (it != index_.end()) fn(it->second);
      }
    }
  }

 private:
  static long long pack(long long cx, long long cy) { return (cx << 32) ^ (cy & 0xffffffffLL); }
  long long key_of(const Point& p) const {
    const auto [cx, cy] = cell_of(p);
    return pack(cx, cy);
  }

  double side_;
  std::unordered_map<long long, int> index_;
  std::vector<int> cell_of_point_;
  std::vector<std::vector<int>> cells_;
  std::vector<std::pair<long long, long long>> coords_;
};

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Clustering dbscan(const PointSet& points, double eps, int min_pts) {
  if (!(eps > 0)) throw Error(ErrorKind::config, "dbscan eps must be > 0");
  if (min_pts < 1) throw Error(ErrorKind::config, "dbscan min_pts must be >= 1");

  Clustering result;
  result.eps = eps;
  result.min_pts = min_pts;
  const int n = static_cast<int>(points.size());
  result.labels.assign(n, kNoise);
  if (n == 0) return result;

  // Canonical row-major processing order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return row_major_less(points[a], points[b]); });

  const double eps2 = eps * eps;
  auto within = [&](int a, int b) { return static_cast<double>(squared_distance(points[a], points[b])) <= eps2; };

  CellGrid grid(points, order, eps);
  const auto& cells = grid.cells();

  std::vector<char> core(n, 0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (static_cast<int>(cells[c].size()) >= min_pts) {
      for (int idx : cells[c]) core[idx] = 1;
      continue;
    }
    for (int idx : cells[c]) {
      int count = 0;
      grid.for_each_neighbor_cell(static_cast<int>(c), [&](int nc) {
        if (count >= min_pts) return;
        for (int other : cells[nc]) {
          if (within(idx, other) && ++count >= min_pts) return;
        }
      });
      core[idx] = count >= min_pts ? 1 : 0;
    }
  }

  // Core cells are internally connected; link neighboring core cells that
  // share at least one eps-close pair of core points.
  std::vector<std::vector<int>> core_members(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int idx : cells[c])
      if (core[idx]) core_members[c].push_back(idx);

  DisjointSet sets(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (core_members[c].empty()) continue;
    grid.for_each_neighbor_cell(static_cast<int>(c), [&](int nc) {
      if (nc <= static_cast<int>(c) || core_members[nc].empty()) return;
      if (sets.find(static_cast<int>(c)) == sets.find(nc)) return;
      for (int a : core_members[c]) {
        for (int b : core_members[nc]) {
          if (within(a, b)) {
            sets.unite(static_cast<int>(c), nc);
            return;
          }
        }
      }
    });
  }

  std::vector<int> cluster_of_root(cells.size(), kNoise);
  int next_id = 0;
  for (int idx : order) {
    if (!core[idx]) continue;
    const int root = sets.find(grid.cell_index(idx));
    if (cluster_of_root[root] == kNoise) cluster_of_root[root] = next_id++;
    result.labels[idx] = cluster_of_root[root];
  }
  result.cluster_count = next_id;

  for (int idx : order) {
    if (core[idx]) continue;
    int owner = -1;
    grid.for_each_neighbor_cell(grid.cell_index(idx), [&](int nc) {
      for (int other : core_members[nc]) {
        if (!within(idx, other)) continue;
        if (owner < 0 || row_major_less(points[other], points[owner])) owner = other;
        break;  // members are row-major sorted; the first hit is the cell's earliest
      }
    });
    if (owner >= 0) result.labels[idx] = result.labels[owner];
  }
  return result;
}

std::vector<PointSet> split_regions(const BinaryMask& mask, double eps, int min_pts) {
  const PointSet pts = mask.points();
  const Clustering cl = dbscan(pts, eps, min_pts);
  std::vector<PointSet> regions(cl.cluster_count);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (cl.labels[i] != kNoise) regions[cl.labels[i]].push_back(pts[i]);
  }
  // Points arrive row-major, so front() is each region's smallest member.
  std::stable_sort(regions.begin(), regions.end(), [](const PointSet& a, const PointSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return row_major_less(a.front(), b.front());
  });
  return regions;
}

}  // namespace fdv
