#include "fdv/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fdv {

namespace {

constexpr int kCoordLimit = 1 << 24;
constexpr int kGhost = -1;  // the vertex at infinity

}  // namespace

std::int64_t orient2d(const Point& a, const Point& b, const Point& c) {
  return (std::int64_t{b.x} - a.x) * (std::int64_t{c.y} - a.y) -
         (std::int64_t{b.y} - a.y) * (std::int64_t{c.x} - a.x);
}

int incircle_sign(const Point& a, const Point& b, const Point& c, const Point& d) {
  using i128 = __int128;
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                   (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                   (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

double circumradius(const Point& a, const Point& b, const Point& c) {
  const double ab = std::sqrt(static_cast<double>(squared_distance(a, b)));
  const double bc = std::sqrt(static_cast<double>(squared_distance(b, c)));
  const double ca = std::sqrt(static_cast<double>(squared_distance(c, a)));
  const double twice_area = std::fabs(static_cast<double>(orient2d(a, b, c)));
  return ab * bc * ca / (2.0 * twice_area);
}

namespace {

// Triangles carry three vertex ids (kGhost for the infinite vertex) in
// counterclockwise order and the neighbor across the edge opposite each
// vertex. A ghost triangle (a, b, ghost) sits outside hull edge a -> b.
struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> n;
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(const PointSet& pts) : pts_(pts) {}

  void run(const std::vector<int>& order) {
    // Seed with the first non-collinear triple in insertion order.
    const int a = order[0], b = order[1];
    std::size_t k = 2;
    while (k < order.size() && orient2d(pts_[a], pts_[b], pts_[order[k]]) == 0) ++k;
    if (k == order.size()) throw Error(ErrorKind::degenerate_geometry, "all points are collinear");
    int c = order[k];
    int bb = b;
    if (orient2d(pts_[a], pts_[bb], pts_[c]) < 0) std::swap(bb, c);
    seed(a, bb, c);

    vertex_stamp_.assign(pts_.size() + 1, 0);
    vertex_start_.assign(pts_.size() + 1, -1);
    vertex_end_.assign(pts_.size() + 1, -1);
    for (std::size_t i = 2; i < order.size(); ++i) {
      if (i == k) continue;
      insert(order[i]);
    }
  }

  Triangulation result() const {
    Triangulation out;
    out.vertices = pts_;
    std::vector<int> remap(tris_.size(), kNoNeighbor);
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!tris_[t].alive || is_ghost(tris_[t])) continue;
      remap[t] = static_cast<int>(out.triangles.size());
      out.triangles.push_back(tris_[t].v);
    }
    out.neighbors.reserve(out.triangles.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (remap[t] == kNoNeighbor) continue;
      std::array<int, 3> n{};
      for (int i = 0; i < 3; ++i) n[i] = remap[tris_[t].n[i]];
      out.neighbors.push_back(n);
    }
    return out;
  }

 private:
  static bool is_ghost(const Tri& t) { return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost; }

  const Point& P(int v) const { return pts_[v]; }

  int add(std::array<int, 3> v) {
    Tri t;
    t.v = v;
    t.n = {kNoNeighbor, kNoNeighbor, kNoNeighbor};
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tris_[id] = t;
      return id;
    }
    tris_.push_back(t);
    tri_stamp_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  void seed(int a, int b, int c) {
    const int t0 = add({a, b, c});
    const int gab = add({b, a, kGhost});
    const int gbc = add({c, b, kGhost});
    const int gca = add({a, c, kGhost});
    tris_[t0].n = {gbc, gca, gab};
    // Ghost (x, y, G): opposite x is edge (y, G), opposite y is edge (G, x).
    tris_[gab].n = {gca, gbc, t0};
    tris_[gbc].n = {gab, gca, t0};
    tris_[gca].n = {gbc, gab, t0};
    last_ = t0;
  }

  // p is in conflict with a solid triangle when strictly inside its
  // circumcircle, and with a ghost triangle over hull edge a -> b when
  // strictly outside the hull across that edge, or on the open edge itself.
  bool in_conflict(int t, int p) const {
    const Tri& tr = tris_[t];
    for (int i = 0; i < 3; ++i) {
      if (tr.v[i] != kGhost) continue;
      const Point& a = P(tr.v[(i + 1) % 3]);
      const Point& b = P(tr.v[(i + 2) % 3]);
      const Point& q = P(p);
      const std::int64_t o = orient2d(a, b, q);
      if (o > 0) return true;
      if (o < 0) return false;
      const std::int64_t dot = (std::int64_t{q.x} - a.x) * (std::int64_t{b.x} - a.x) +
                               (std::int64_t{q.y} - a.y) * (std::int64_t{b.y} - a.y);
      return dot > 0 && dot < squared_distance(a, b);
    }
    return incircle_sign(P(tr.v[0]), P(tr.v[1]), P(tr.v[2]), P(p)) > 0;
  }

  // Visibility walk from the last created solid triangle. Returns a triangle
  // in conflict with p: either a solid triangle containing it or the ghost
  // beyond a hull edge p lies strictly outside of.
  int locate(int p) {
    int t = last_;
    const Point& q = P(p);
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const Tri& tr = tris_[t];
      rng_ = rng_ * 6364136223846793005ULL + 1442695040888963407ULL;
      const int start = static_cast<int>((rng_ >> 33) % 3);
      int next = -1;
      for (int j = 0; j < 3; ++j) {
        const int i = (start + j) % 3;
        const Point& a = P(tr.v[(i + 1) % 3]);
        const Point& b = P(tr.v[(i + 2) % 3]);
        if (orient2d(a, b, q) < 0) {
          next = tr.n[i];
          break;
        }
      }
      if (next < 0) return t;
      if (is_ghost(tris_[next])) return next;
      t = next;
    }
    // Walk failed to settle; fall back to a scan.
    for (std::size_t s = 0; s < tris_.size(); ++s) {
      if (tris_[s].alive && in_conflict(static_cast<int>(s), p)) return static_cast<int>(s);
    }
    throw Error(ErrorKind::degenerate_geometry, "point location failed");
  }

  void insert(int p) {
    const int seed_tri = locate(p);
    ++stamp_;
    cavity_.clear();
    boundary_.clear();
    stack_.clear();
    stack_.push_back(seed_tri);
    tri_stamp_[seed_tri] = stamp_;  // in cavity
    while (!stack_.empty()) {
      const int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int i = 0; i < 3; ++i) {
        const int nb = tris_[t].n[i];
        if (tri_stamp_[nb] == stamp_) continue;
        if (tri_stamp_[nb] == -stamp_ || !in_conflict(nb, p)) {
          tri_stamp_[nb] = -stamp_;  // tested, outside the cavity
          boundary_.push_back({t, i});
          continue;
        }
        tri_stamp_[nb] = stamp_;
        stack_.push_back(nb);
      }
    }

    // One new triangle (x, y, p) per cavity boundary edge x -> y.
    new_tris_.clear();
    for (const auto& [t, i] : boundary_) {
      const int x = tris_[t].v[(i + 1) % 3];
      const int y = tris_[t].v[(i + 2) % 3];
      const int outer = tris_[t].n[i];
      new_tris_.push_back({-1, x, y, outer});
    }
    for (int t : cavity_) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    for (auto& nt : new_tris_) {
      nt.id = add({nt.x, nt.y, p});
      tri_stamp_[nt.id] = 0;
      const int xs = slot(nt.x), ys = slot(nt.y);
      if (vertex_stamp_[xs] != stamp_) {
        vertex_stamp_[xs] = stamp_;
        vertex_start_[xs] = vertex_end_[xs] = -1;
      }
      if (vertex_stamp_[ys] != stamp_) {
        vertex_stamp_[ys] = stamp_;
        vertex_start_[ys] = vertex_end_[ys] = -1;
      }
      vertex_start_[xs] = nt.id;
      vertex_end_[ys] = nt.id;
    }
    for (const auto& nt : new_tris_) {
      Tri& tr = tris_[nt.id];
      tr.n[2] = nt.outer;                    // across (x, y)
      tr.n[0] = vertex_start_[slot(nt.y)];   // across (y, p): new triangle starting at y
      tr.n[1] = vertex_end_[slot(nt.x)];     // across (p, x): new triangle ending at x
      Tri& out = tris_[nt.outer];
      for (int j = 0; j < 3; ++j) {
        const int u = out.v[(j + 1) % 3], w = out.v[(j + 2) % 3];
        if (u == nt.y && w == nt.x) {
          out.n[j] = nt.id;
          break;
        }
      }
      if (!is_ghost(tr)) last_ = nt.id;
    }
  }

  std::size_t slot(int v) const { return v == kGhost ? pts_.size() : static_cast<std::size_t>(v); }

  const PointSet& pts_;
  std::vector<Tri> tris_;
  std::vector<int> tri_stamp_;
  std::vector<int> free_;
  int last_ = 0;
  int stamp_ = 0;
  std::uint64_t rng_ = 0x9e3779b97f4a7c15ULL;

  std::vector<int> cavity_;
  std::vector<std::pair<int, int>> boundary_;
  std::vector<int> stack_;
  struct NewTri {
    int id, x, y, outer;
  };
  std::vector<NewTri> new_tris_;
  // Per-vertex scratch for linking the fan of new triangles around p.
  std::vector<int> vertex_stamp_, vertex_start_, vertex_end_;
};

}  // namespace

Triangulation delaunay(const PointSet& points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::degenerate_geometry, "triangulation needs at least 3 points, got " +
                                                    std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (std::abs(p.x) > kCoordLimit || std::abs(p.y) > kCoordLimit) {
      throw Error(ErrorKind::degenerate_geometry, "point coordinate exceeds 2^24");
    }
  }
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return row_major_less(points[a], points[b]); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      throw Error(ErrorKind::degenerate_geometry, "duplicate point (" +
                                                      std::to_string(points[order[i]].x) + "," +
                                                      std::to_string(points[order[i]].y) + ")");
    }
  }
  Builder builder(points);
  builder.run(order);
  return builder.result();
}

AlphaBoundary alpha_shape(const Triangulation& tri, double alpha) {
  if (!(alpha >= 0)) throw Error(ErrorKind::config, "alpha must be >= 0");
  AlphaBoundary out;
  out.alpha = alpha;
  const std::size_t nt = tri.triangles.size();
  out.retained.assign(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = tri.triangles[t];
    if (alpha == 0) {
      out.retained[t] = 1;
    } else {
      const double r = circumradius(tri.vertices[v[0]], tri.vertices[v[1]], tri.vertices[v[2]]);
      out.retained[t] = r <= 1.0 / alpha ? 1 : 0;
    }
  }
  std::vector<int> used;
  for (std::size_t t = 0; t < nt; ++t) {
    if (!out.retained[t]) continue;
    for (int i = 0; i < 3; ++i) {
      const int nb = tri.neighbors[t][i];
      if (nb != kNoNeighbor && out.retained[nb]) continue;
      const int a = tri.triangles[t][(i + 1) % 3];
      const int b = tri.triangles[t][(i + 2) % 3];
      out.boundary_edges.emplace_back(std::min(a, b), std::max(a, b));
      used.push_back(a);
      used.push_back(b);
    }
  }
  std::sort(out.boundary_edges.begin(), out.boundary_edges.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  out.boundary_points.reserve(used.size());
  for (int v : used) out.boundary_points.push_back(tri.vertices[v]);
  std::sort(out.boundary_points.begin(), out.boundary_points.end(), row_major_less);
  return out;
}

int count_boundary_loops(const AlphaBoundary& boundary) {
  std::vector<int> verts;
  for (const auto& [a, b] : boundary.boundary_edges) {
    verts.push_back(a);
    verts.push_back(b);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::vector<int> parent(verts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  int components = static_cast<int>(verts.size());
  for (const auto& [a, b] : boundary.boundary_edges) {
    const int ra = find(id(a)), rb = find(id(b));
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

std::optional<AlphaBoundary> region_boundary(const PointSet& points, double alpha, Warnings* warnings) {
  if (points.size() < 3) {
    if (warnings) warnings->add("region with " + std::to_string(points.size()) + " points skipped (need >= 3)");
    return std::nullopt;
  }
  try {
    return alpha_shape(delaunay(points), alpha);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_geometry) throw;
    if (warnings) warnings->add(std::string("region skipped: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace fdv
