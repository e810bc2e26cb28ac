#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdv/segmentation.hpp"

namespace fdv::oracle {

// Successive over-relaxation of the discrete Laplace equation with
// in-bounds 4-neighbors, iterated until the max residual is below 1e-8.
inline std::vector<double> laplace_oracle(int w, int h, std::vector<double> u, const BinaryMask& m) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (m[i]) u[i] = 0.0;
  for (int sweep = 0; sweep < 200000; ++sweep) {
    double residual = 0.0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!m.at(x, y)) continue;
        double s = 0;
        int n = 0;
        if (x > 0) s += u[y * w + x - 1], ++n;
        if (x + 1 < w) s += u[y * w + x + 1], ++n;
        if (y > 0) s += u[(y - 1) * w + x], ++n;
        if (y + 1 < h) s += u[(y + 1) * w + x], ++n;
        const double r = s / n - u[y * w + x];
        residual = std::max(residual, std::abs(r));
        u[y * w + x] += 1.8 * r;
      }
    if (residual < 1e-8) break;
  }
  return u;
}

}  // namespace fdv::oracle
