#include "fdv/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdv {
namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

struct Grid {
  int w, h;
  std::size_t at(int x, int y) const { return static_cast<std::size_t>(y) * w + x; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h; }
};

// Value at (x, y) with out-of-range coordinates clamped to the border.
double sample(const Grid& g, const std::vector<double>& u, int x, int y) {
  return u[g.at(std::clamp(x, 0, g.w - 1), std::clamp(y, 0, g.h - 1))];
}

double laplacian(const Grid& g, const std::vector<double>& u, int x, int y) {
  double sum = 0.0;
  int n = 0;
  for (int k = 0; k < 4; ++k) {
    const int xx = x + kDx[k], yy = y + kDy[k];
    if (!g.inside(xx, yy)) continue;
    sum += u[g.at(xx, yy)];
    ++n;
  }
  return sum - n * u[g.at(x, y)];
}

}  // namespace

std::string_view to_string(InpaintMode m) {
  return m == InpaintMode::transport ? "transport" : "harmonic";
}

std::optional<InpaintMode> parse_inpaint_mode(std::string_view text) {
  if (text == "transport") return InpaintMode::transport;
  if (text == "harmonic") return InpaintMode::harmonic;
  return std::nullopt;
}

void InpaintOptions::validate() const {
  if (!(dt > 0.0 && dt <= 0.25)) throw Error(ErrorKind::config, "inpainting dt must be in (0, 0.25]");
  if (!(tol > 0.0)) throw Error(ErrorKind::config, "inpainting tol must be positive");
  if (max_iters < 1) throw Error(ErrorKind::config, "inpainting max_iters must be >= 1");
}

ChannelFill inpaint_channel(int width, int height, const std::vector<double>& values,
                            const BinaryMask& mask, const InpaintOptions& options) {
  options.validate();
  const Grid g{width, height};
  if (mask.width() != width || mask.height() != height ||
      values.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorKind::dimension_mismatch, "occlusion mask does not match the frame");
  ChannelFill out;
  out.values = values;
  out.converged = true;
  std::vector<std::size_t> holes;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) holes.push_back(i);
  if (holes.empty()) return out;
  if (holes.size() == mask.size())
    throw Error(ErrorKind::insufficient_boundary, "occlusion mask covers the whole frame");

  auto& u = out.values;
  double ring_lo = std::numeric_limits<double>::infinity(), ring_hi = -ring_lo;
  for (std::size_t i : holes) {
    const int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
    for (int k = 0; k < 4; ++k) {
      const int xx = x + kDx[k], yy = y + kDy[k];
      if (g.inside(xx, yy) && !mask.at(xx, yy)) {
        ring_lo = std::min(ring_lo, values[g.at(xx, yy)]);
        ring_hi = std::max(ring_hi, values[g.at(xx, yy)]);
      }
    }
  }

  // Onion-peel initialization.
  std::vector<std::uint8_t> known(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) known[i] = !mask[i];
  std::vector<std::size_t> pending = holes;
  while (!pending.empty()) {
    std::vector<std::pair<std::size_t, double>> layer;
    std::vector<std::size_t> rest;
    for (std::size_t i : pending) {
      const int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
      double sum = 0.0;
      int n = 0;
      for (int k = 0; k < 4; ++k) {
        const int xx = x + kDx[k], yy = y + kDy[k];
        if (g.inside(xx, yy) && known[g.at(xx, yy)]) {
          sum += u[g.at(xx, yy)];
          ++n;
        }
      }
      if (n > 0) layer.emplace_back(i, sum / n);
      else rest.push_back(i);
    }
    for (const auto& [i, v] : layer) {
      u[i] = v;
      known[i] = 1;
    }
    pending = std::move(rest);
  }

  const double inv_range = ring_hi > ring_lo ? 1.0 / (ring_hi - ring_lo) : 0.0;
  std::vector<double> next(holes.size());
  out.converged = false;
  for (int it = 0; it < options.max_iters; ++it) {
    double max_change = 0.0;
    for (std::size_t h = 0; h < holes.size(); ++h) {
      const std::size_t i = holes[h];
      const int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
      double v;
      if (options.mode == InpaintMode::harmonic) {
        double sum = 0.0;
        int n = 0;
        for (int k = 0; k < 4; ++k) {
          const int xx = x + kDx[k], yy = y + kDy[k];
          if (!g.inside(xx, yy)) continue;
          sum += u[g.at(xx, yy)];
          ++n;
        }
        v = sum / n;
      } else {
        // Smoothness (the Laplacian) is carried along isophotes: its
        // gradient is projected onto the isophote direction (-Iy, Ix).
        auto lap = [&](int xx, int yy) {
          return laplacian(g, u, std::clamp(xx, 0, width - 1), std::clamp(yy, 0, height - 1));
        };
        const double lx = (lap(x + 1, y) - lap(x - 1, y)) / 2.0;
        const double ly = (lap(x, y + 1) - lap(x, y - 1)) / 2.0;
        const double ix = (sample(g, u, x + 1, y) - sample(g, u, x - 1, y)) / 2.0;
        const double iy = (sample(g, u, x, y + 1) - sample(g, u, x, y - 1)) / 2.0;
        const double norm = std::sqrt(ix * ix + iy * iy);
        double transport = 0.0;
        if (norm > 1e-12) {
          const double beta = (lx * -iy + ly * ix) / norm;
          // Upwind slope-limited gradient magnitude.
          const double c = u[i];
          const double bxm = c - sample(g, u, x - 1, y), bxp = sample(g, u, x + 1, y) - c;
          const double bym = c - sample(g, u, x, y - 1), byp = sample(g, u, x, y + 1) - c;
          double grad;
          if (beta > 0.0)
            grad = std::sqrt(std::pow(std::min(bxm, 0.0), 2) + std::pow(std::max(bxp, 0.0), 2) +
                             std::pow(std::min(bym, 0.0), 2) + std::pow(std::max(byp, 0.0), 2));
          else
            grad = std::sqrt(std::pow(std::max(bxm, 0.0), 2) + std::pow(std::min(bxp, 0.0), 2) +
                             std::pow(std::max(bym, 0.0), 2) + std::pow(std::min(byp, 0.0), 2));
          transport = beta * grad;
        }
        // The transport term is quadratic in intensity; scaling it by the
        // ring range keeps the step size independent of channel units.
        v = u[i] + options.dt * (transport * inv_range + laplacian(g, u, x, y));
        v = std::clamp(v, ring_lo, ring_hi);
      }
      max_change = std::max(max_change, std::abs(v - u[i]));
      next[h] = v;
    }
    for (std::size_t h = 0; h < holes.size(); ++h) u[holes[h]] = next[h];
    out.iterations = it + 1;
    if (max_change < options.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Frame inpaint(const Frame& frame, const BinaryMask& occlusion, const InpaintOptions& options,
              Warnings* warnings) {
  if (occlusion.width() != frame.width() || occlusion.height() != frame.height())
    throw Error(ErrorKind::dimension_mismatch, "occlusion mask does not match the frame");
  if (occlusion.count() == 0) return frame;
  const int w = frame.width(), h = frame.height();
  bool converged = true;
  int iterations = 0;
  Frame out = frame;
  if (frame.kind() == FrameKind::infrared) {
    const auto t = frame.temperature();
    auto fill = inpaint_channel(w, h, std::vector<double>(t.begin(), t.end()), occlusion, options);
    converged = fill.converged;
    iterations = fill.iterations;
    out = Frame::infrared(w, h, std::move(fill.values), frame.index(), frame.timestamp_s());
  } else {
    const auto px = frame.rgb();
    std::vector<Rgb> rgb(px.begin(), px.end());
    for (int c = 0; c < 3; ++c) {
      std::vector<double> ch(rgb.size());
      for (std::size_t i = 0; i < rgb.size(); ++i) ch[i] = c == 0 ? rgb[i].r : c == 1 ? rgb[i].g : rgb[i].b;
      const auto fill = inpaint_channel(w, h, ch, occlusion, options);
      converged = converged && fill.converged;
      iterations = std::max(iterations, fill.iterations);
      for (std::size_t i = 0; i < rgb.size(); ++i) {
        if (!occlusion[i]) continue;
        const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(fill.values[i]), 0L, 255L));
        (c == 0 ? rgb[i].r : c == 1 ? rgb[i].g : rgb[i].b) = v;
      }
    }
    out = Frame::visual(w, h, std::move(rgb), frame.index(), frame.timestamp_s());
  }
  if (!converged && warnings)
    warnings->add("inpainting of frame " + std::to_string(frame.index()) + " stopped after " +
                  std::to_string(iterations) + " iterations without converging");
  return out;
}

BinaryMask auto_occlusion(const Frame& frame, const ColorThresholds& thresholds) {
  return segment_visual(frame, thresholds);
}

}  // namespace fdv
