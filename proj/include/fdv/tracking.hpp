#pragma once

#include <cstddef>
#include <vector>

#include "fdv/error.hpp"
#include "fdv/geometry.hpp"

namespace fdv {

struct Displacement {
  Point src;
  Point dst;
  int dx = 0;  // dst.x - src.x
  int dy = 0;

  friend bool operator==(const Displacement&, const Displacement&) = default;
};

struct DisplacementField {
  std::vector<Displacement> pairs;  // in src order
  std::size_t unmatched = 0;        // src points with no dst within range
  double dt_s = 1.0;
};

// Nearest-neighbor lookup over a fixed point set using a uniform grid.
// Ties at equal distance resolve to the row-major-first candidate.
class NearestIndex {
 public:
  explicit NearestIndex(const PointSet& points);

  // Index of the nearest point with squared distance <= max_d2, or -1.
  int nearest(Point q, std::int64_t max_d2) const;

 private:
  const PointSet& points_;
  int min_x_ = 0, min_y_ = 0, cell_ = 1, cols_ = 0, rows_ = 0;
  std::vector<int> cell_start_;  // CSR offsets into order_
  std::vector<int> order_;
};

// Forward greedy matching: every src point takes its nearest dst point when
// that point is within max_dist_px. Many src points may share a dst point.
DisplacementField greedy_match(const PointSet& src, const PointSet& dst, double max_dist_px,
                               double dt_s = 1.0, Warnings* warnings = nullptr);

struct VelocitySample {
  double vx = 0.0;  // cm/s, image axes
  double vy = 0.0;
  double longitudinal = 0.0;
  double transverse = 0.0;
  double magnitude = 0.0;
};

// v = d / res / dt_s. Longitudinal is the projection onto the unit vector at
// axis_deg (measured from image +x toward image +y); transverse is the
// component 90 degrees further on.
VelocitySample to_velocity(int dx, int dy, double res_px_per_cm, double dt_s, double axis_deg);
std::vector<VelocitySample> to_velocities(const DisplacementField& field, double res_px_per_cm,
                                          double axis_deg);

// Longitudinal values > 0.
std::vector<double> positive_longitudinal(const std::vector<VelocitySample>& samples);

struct TrackedSample {
  std::size_t t = 0;  // index of the earlier frame in the pair
  int region = 0;     // region of the src point in frame t
  Point src;
  Point dst;
  VelocitySample v;
};

struct PairDiagnostics {
  std::size_t t = 0;
  std::size_t src_points = 0;
  std::size_t matched = 0;
};

struct TrackResult {
  std::vector<TrackedSample> samples;  // ordered by t, region, src order
  std::vector<PairDiagnostics> pairs;
};

// boundaries[t][r] is the boundary point list of region r in sampled frame
// t. Destination points of frame t+1 are pooled across regions.
TrackResult track_sequence(const std::vector<std::vector<PointSet>>& boundaries,
                           double res_px_per_cm, double sample_rate_hz, double axis_deg,
                           double max_dist_px, unsigned threads = 1,
                           Warnings* warnings = nullptr);

}  // namespace fdv
