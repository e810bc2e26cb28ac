#include "fdv/cleaning.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "fdv/error.hpp"

namespace fdv {

CleaningSchedule::CleaningSchedule(std::vector<CleaningLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorKind::config, "cleaning schedule needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& l = levels_[i];
    if (l.radius_px < 1) throw Error(ErrorKind::config, "cleaning radius must be a positive integer");
    const long long window = (2LL * l.radius_px + 1) * (2LL * l.radius_px + 1) - 1;
    if (l.min_neighbors < 1 || l.min_neighbors > window) {
      throw Error(ErrorKind::config, "min_neighbors at level " + std::to_string(i) +
                                         " must lie in [1, " + std::to_string(window) + "]");
    }
    if (i > 0 && !(l.radius_px < levels_[i - 1].radius_px)) {
      throw Error(ErrorKind::config, "cleaning radii must be strictly decreasing");
    }
  }
}

CleaningSchedule CleaningSchedule::defaults() {
  return CleaningSchedule({{8, 60}, {3, 8}, {1, 2}});
}

BinaryMask single_level_clean(const BinaryMask& mask, int radius, int min_neighbors) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out = mask;
  if (w == 0 || h == 0) return out;

  // Summed-area table with a zero guard row and column.
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<std::int32_t> sat(stride * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::int32_t row = 0;
    for (int x = 0; x < w; ++x) {
      row += mask.at(x, y) ? 1 : 0;
      sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row;
    }
  }

  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(h, y + radius + 1);
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int x0 = std::max(0, x - radius);
      const int x1 = std::min(w, x + radius + 1);
      const std::int32_t total = sat[y1 * stride + x1] - sat[y0 * stride + x1] -
                                 sat[y1 * stride + x0] + sat[y0 * stride + x0];
      if (total - 1 < min_neighbors) out.set(x, y, false);
    }
  }
  return out;
}

BinaryMask clean(const BinaryMask& mask, const CleaningSchedule& schedule) {
  BinaryMask current = mask;
  for (const auto& level : schedule.levels()) {
    current = single_level_clean(current, level.radius_px, level.min_neighbors);
  }
  return current;
}

}  // namespace fdv
