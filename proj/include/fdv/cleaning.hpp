#pragma once

#include <vector>

#include "fdv/segmentation.hpp"

namespace fdv {

struct CleaningLevel {
  int radius_px;
  int min_neighbors;

  friend bool operator==(const CleaningLevel&, const CleaningLevel&) = default;
};

// Coarse-to-fine levels: radii strictly decreasing, each min_neighbors in
// [1, (2r+1)^2 - 1].
class CleaningSchedule {
 public:
  explicit CleaningSchedule(std::vector<CleaningLevel> levels);

  static CleaningSchedule defaults();

  const std::vector<CleaningLevel>& levels() const { return levels_; }

 private:
  std::vector<CleaningLevel> levels_;
};

// Clears every set pixel whose count of set pixels in the Chebyshev
// neighborhood of `radius` (itself excluded, clipped at the image border) is
// below `min_neighbors`. All decisions are taken against the input snapshot.
BinaryMask single_level_clean(const BinaryMask& mask, int radius, int min_neighbors);

// Applies each level in order, feeding the output of one into the next.
BinaryMask clean(const BinaryMask& mask, const CleaningSchedule& schedule);

}  // namespace fdv
