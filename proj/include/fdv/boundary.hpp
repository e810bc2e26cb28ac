#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fdv/error.hpp"
#include "fdv/geometry.hpp"

namespace fdv {

// Exact predicates on integer coordinates (|x|, |y| <= 2^24).
// orient > 0: a, b, c counterclockwise (x right, y as given).
std::int64_t orient2d(const Point& a, const Point& b, const Point& c);
// > 0: d strictly inside the circle through counterclockwise a, b, c.
int incircle_sign(const Point& a, const Point& b, const Point& c, const Point& d);

inline constexpr int kNoNeighbor = -1;

struct Triangulation {
  PointSet vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise vertex indices
  // neighbors[t][i]: triangle across the edge opposite triangles[t][i], or kNoNeighbor on the hull.
  std::vector<std::array<int, 3>> neighbors;
};

// Incremental (Bowyer-Watson) Delaunay triangulation. Points are inserted
// in row-major order; cocircular ties are resolved by that order, so the
// output is a deterministic function of the point set. Throws
// degenerate_geometry for fewer than 3 points, duplicates, or all-collinear
// input.
Triangulation delaunay(const PointSet& points);

double circumradius(const Point& a, const Point& b, const Point& c);

using Edge = std::pair<int, int>;  // vertex indices, first < second

struct AlphaBoundary {
  double alpha = 0.0;
  std::vector<char> retained;      // per triangle
  std::vector<Edge> boundary_edges;  // sorted
  PointSet boundary_points;          // deduplicated, row-major
};

// Keeps triangles with circumradius <= 1/alpha (all of them when alpha is
// 0). Boundary edges are those with exactly one retained incident triangle.
AlphaBoundary alpha_shape(const Triangulation& tri, double alpha);

// Connected components of the boundary edge graph; a simple region yields
// one, a region with a hole two.
int count_boundary_loops(const AlphaBoundary& boundary);

inline constexpr double kDefaultAlpha = 1.0 / 3.0;

// delaunay + alpha_shape. Regions with fewer than 3 points or collinear
// points produce a warning and no boundary.
std::optional<AlphaBoundary> region_boundary(const PointSet& points, double alpha = kDefaultAlpha,
                                             Warnings* warnings = nullptr);

}  // namespace fdv
