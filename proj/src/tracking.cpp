#include "fdv/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fdv/parallel.hpp"

namespace fdv {

NearestIndex::NearestIndex(const PointSet& points) : points_(points) {
  if (points.empty()) return;
  int max_x = points[0].x, max_y = points[0].y;
  min_x_ = points[0].x;
  min_y_ = points[0].y;
  for (const auto& p : points) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double w = max_x - min_x_ + 1.0, h = max_y - min_y_ + 1.0;
  // About two points per cell on average.
  cell_ = std::max(1, static_cast<int>(std::sqrt(2.0 * w * h / points.size())));
  cols_ = static_cast<int>(w) / cell_ + 1;
  rows_ = static_cast<int>(h) / cell_ + 1;
  const std::size_t cells = static_cast<std::size_t>(cols_) * rows_;
  cell_start_.assign(cells + 1, 0);
  std::vector<int> cell_of(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int c = (points[i].y - min_y_) / cell_ * cols_ + (points[i].x - min_x_) / cell_;
    cell_of[i] = c;
    ++cell_start_[c + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  order_.resize(points.size());
  std::vector<int> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<int>(i);
}

int NearestIndex::nearest(Point q, std::int64_t max_d2) const {
  if (points_.empty()) return -1;
  const int qc = std::clamp((q.x - min_x_) / cell_ - (q.x < min_x_ ? 1 : 0), -1, cols_);
  const int qr = std::clamp((q.y - min_y_) / cell_ - (q.y < min_y_ ? 1 : 0), -1, rows_);
  int best = -1;
  std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
  auto visit = [&](int cx, int cy) {
    if (cx < 0 || cy < 0 || cx >= cols_ || cy >= rows_) return;
    const int c = cy * cols_ + cx;
    for (int k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const int i = order_[k];
      const std::int64_t d2 = squared_distance(q, points_[i]);
      if (d2 > max_d2) continue;
      if (d2 < best_d2 || (d2 == best_d2 && row_major_less(points_[i], points_[best]))) {
        best = i;
        best_d2 = d2;
      }
    }
  };
  const int max_ring = std::max({qc + 1, cols_ - qc, qr + 1, rows_ - qr});
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (ring == 0) {
      visit(qc, qr);
    } else {
      for (int dx = -ring; dx <= ring; ++dx) {
        visit(qc + dx, qr - ring);
        visit(qc + dx, qr + ring);
      }
      for (int dy = -ring + 1; dy <= ring - 1; ++dy) {
        visit(qc - ring, qr + dy);
        visit(qc + ring, qr + dy);
      }
    }
    // Unvisited cells are at least ring * cell_ away from q.
    const std::int64_t reach = std::int64_t{ring} * cell_;
    if (reach * reach > max_d2) break;
    if (best >= 0 && best_d2 < reach * reach) break;
  }
  return best;
}

DisplacementField greedy_match(const PointSet& src, const PointSet& dst, double max_dist_px,
                               double dt_s, Warnings* warnings) {
  if (!(max_dist_px > 0.0)) throw Error(ErrorKind::config, "max_dist_px must be positive");
  if (!(dt_s > 0.0)) throw Error(ErrorKind::config, "dt_s must be positive");
  DisplacementField field;
  field.dt_s = dt_s;
  if (src.empty() || dst.empty()) {
    if (warnings) warnings->add(src.empty() ? "empty source boundary" : "empty destination boundary");
    field.unmatched = src.size();
    return field;
  }
  const auto max_d2 = static_cast<std::int64_t>(std::floor(max_dist_px * max_dist_px + 1e-9));
  const NearestIndex index(dst);
  for (const auto& p : src) {
    const int j = index.nearest(p, max_d2);
    if (j < 0) {
      ++field.unmatched;
      continue;
    }
    field.pairs.push_back({p, dst[j], dst[j].x - p.x, dst[j].y - p.y});
  }
  return field;
}

VelocitySample to_velocity(int dx, int dy, double res_px_per_cm, double dt_s, double axis_deg) {
  if (!(res_px_per_cm > 0.0)) throw Error(ErrorKind::config, "resolution must be positive");
  VelocitySample v;
  v.vx = dx / res_px_per_cm / dt_s;
  v.vy = dy / res_px_per_cm / dt_s;
  const double th = axis_deg * std::numbers::pi / 180.0;
  const double c = std::cos(th), s = std::sin(th);
  v.longitudinal = v.vx * c + v.vy * s;
  v.transverse = -v.vx * s + v.vy * c;
  v.magnitude = std::hypot(v.vx, v.vy);
  return v;
}

std::vector<VelocitySample> to_velocities(const DisplacementField& field, double res_px_per_cm,
                                          double axis_deg) {
  std::vector<VelocitySample> out;
  out.reserve(field.pairs.size());
  for (const auto& d : field.pairs)
    out.push_back(to_velocity(d.dx, d.dy, res_px_per_cm, field.dt_s, axis_deg));
  return out;
}

std::vector<double> positive_longitudinal(const std::vector<VelocitySample>& samples) {
  std::vector<double> out;
  for (const auto& s : samples)
    if (s.longitudinal > 0.0) out.push_back(s.longitudinal);
  return out;
}

TrackResult track_sequence(const std::vector<std::vector<PointSet>>& boundaries,
                           double res_px_per_cm, double sample_rate_hz, double axis_deg,
                           double max_dist_px, unsigned threads, Warnings* warnings) {
  if (boundaries.size() < 2)
    throw Error(ErrorKind::insufficient_sequence, "tracking needs at least 2 frames");
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorKind::config, "sample rate must be positive");
  if (!(res_px_per_cm > 0.0)) throw Error(ErrorKind::config, "resolution must be positive");
  if (!(max_dist_px > 0.0)) throw Error(ErrorKind::config, "max_dist_px must be positive");
  const double dt = 1.0 / sample_rate_hz;
  const std::size_t n_pairs = boundaries.size() - 1;

  struct PairOut {
    std::vector<TrackedSample> samples;
    PairDiagnostics diag;
    Warnings warnings;
  };
  std::vector<PairOut> outs(n_pairs);
  parallel_for(n_pairs, threads, [&](std::size_t t) {
    auto& out = outs[t];
    out.diag.t = t;
    PointSet dst;
    for (const auto& r : boundaries[t + 1]) dst.insert(dst.end(), r.begin(), r.end());
    for (std::size_t r = 0; r < boundaries[t].size(); ++r) {
      const auto& src = boundaries[t][r];
      out.diag.src_points += src.size();
      if (src.empty()) continue;
      if (dst.empty()) {
        out.warnings.add("frame pair " + std::to_string(t) + ": empty destination boundary");
        break;
      }
      const auto field = greedy_match(src, dst, max_dist_px, dt);
      out.diag.matched += field.pairs.size();
      for (const auto& d : field.pairs)
        out.samples.push_back({t, static_cast<int>(r), d.src, d.dst,
                               to_velocity(d.dx, d.dy, res_px_per_cm, dt, axis_deg)});
    }
  });

  TrackResult result;
  for (auto& o : outs) {
    result.samples.insert(result.samples.end(), o.samples.begin(), o.samples.end());
    result.pairs.push_back(o.diag);
    if (warnings) warnings->append(o.warnings);
  }
  return result;
}

}  // namespace fdv
