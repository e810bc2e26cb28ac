#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fdv/error.hpp"
#include "fdv/imagery.hpp"

namespace fdv {

// u_max = (f / 2) * FOV / RES, cm/s.
double nyquist_u_max(double f_hz, double fov_px, double res_px_per_cm);

struct SamplingRow {
  double f_hz = 0.0;
  double u_max = 0.0;
  double u_obs = 0.0;
  double ratio = 0.0;  // u_obs / u_max, 0 for degenerate rows
  bool degenerate = false;  // f = 0
  bool saturated = false;   // ratio within the plateau tolerance of the next-higher rate
};

struct SamplingReport {
  std::vector<SamplingRow> rows;  // ascending f
  std::optional<double> recommended_f_hz;
};

inline constexpr double kPlateauTolerance = 0.2;

// Rows are sorted by rate. The recommended rate is the lowest rate of the
// run of saturated rows that extends to the highest non-degenerate rate;
// with no such run (or fewer than two usable rates) nothing is recommended.
// Non-zero rates must divide meta.frame_rate_hz integrally.
SamplingReport sampling_advisor(const SequenceMeta& meta, std::span<const double> rates_hz,
                                std::span<const double> u_obs, Warnings* warnings = nullptr);

}  // namespace fdv
