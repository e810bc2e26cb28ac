#include "fdv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fdv {

double nyquist_u_max(double f_hz, double fov_px, double res_px_per_cm) {
  if (!(res_px_per_cm > 0.0)) throw Error(ErrorKind::config, "resolution must be positive");
  return f_hz / 2.0 * fov_px / res_px_per_cm;
}

SamplingReport sampling_advisor(const SequenceMeta& meta, std::span<const double> rates_hz,
                                std::span<const double> u_obs, Warnings* warnings) {
  if (rates_hz.size() != u_obs.size())
    throw Error(ErrorKind::config, "one observed velocity per candidate rate is required");
  std::vector<std::size_t> order(rates_hz.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates_hz[a] < rates_hz[b]; });

  SamplingReport report;
  for (std::size_t i : order) {
    SamplingRow row;
    row.f_hz = rates_hz[i];
    row.u_obs = u_obs[i];
    if (row.f_hz < 0.0 || !std::isfinite(row.f_hz))
      throw Error(ErrorKind::config, "candidate rates must be nonnegative");
    if (row.f_hz == 0.0) {
      row.degenerate = true;
      if (warnings) warnings->add("candidate rate 0 Hz is degenerate");
    } else {
      frame_stride(meta.frame_rate_hz, row.f_hz);
      row.u_max = nyquist_u_max(row.f_hz, meta.fov_px, meta.resolution_px_per_cm);
      row.ratio = row.u_obs / row.u_max;
      if (row.ratio > 1.0) {
        if (warnings) {
          std::ostringstream m;
          m << "observed velocity exceeds u_max at " << row.f_hz << " Hz";
          warnings->add(m.str());
        }
        row.ratio = 1.0;
      }
    }
    report.rows.push_back(row);
  }

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < report.rows.size(); ++i)
    if (!report.rows[i].degenerate) usable.push_back(i);
  for (std::size_t j = 0; j + 1 < usable.size(); ++j) {
    auto& row = report.rows[usable[j]];
    const double next = report.rows[usable[j + 1]].ratio;
    row.saturated = next > 0.0 ? std::abs(row.ratio - next) <= kPlateauTolerance * next
                               : row.ratio == 0.0;
  }
  if (usable.size() >= 2 && report.rows[usable[usable.size() - 2]].saturated) {
    std::size_t start = usable.size() - 2;
    while (start > 0 && report.rows[usable[start - 1]].saturated) --start;
    report.recommended_f_hz = report.rows[usable[start]].f_hz;
  }
  return report;
}

}  // namespace fdv
