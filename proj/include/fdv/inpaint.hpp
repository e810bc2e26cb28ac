#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fdv/error.hpp"
#include "fdv/imagery.hpp"
#include "fdv/segmentation.hpp"

namespace fdv {

enum class InpaintMode {
  transport,  // isophote transport of smoothness plus diffusion
  harmonic,   // Laplace relaxation
};

std::string_view to_string(InpaintMode m);
std::optional<InpaintMode> parse_inpaint_mode(std::string_view text);

struct InpaintOptions {
  InpaintMode mode = InpaintMode::transport;
  double dt = 0.1;
  double tol = 1e-4;  // max per-pixel change, channel units
  int max_iters = 5000;

  void validate() const;
};

struct ChannelFill {
  std::vector<double> values;
  int iterations = 0;
  bool converged = false;
};

// Fills masked entries of one row-major scalar channel. Masked pixels are
// initialized by peeling the hole from its rim inward, each pixel taking
// the mean of its already-known 4-neighbors, then relaxed. Unmasked values
// are returned unchanged. Results stay within the value range of the
// unmasked pixels 4-adjacent to the hole. Throws insufficient_boundary when
// every pixel is masked.
ChannelFill inpaint_channel(int width, int height, const std::vector<double>& values,
                            const BinaryMask& mask, const InpaintOptions& options);

// Visual frames are filled per channel and rounded to 8 bits; infrared
// frames are filled on temperature. Unmasked pixels are copied bit for bit.
// Non-convergence keeps the last iterate and adds a warning.
Frame inpaint(const Frame& frame, const BinaryMask& occlusion, const InpaintOptions& options = {},
              Warnings* warnings = nullptr);

// Occluders are the pixels accepted by the thresholds.
BinaryMask auto_occlusion(const Frame& frame, const ColorThresholds& thresholds);

}  // namespace fdv
