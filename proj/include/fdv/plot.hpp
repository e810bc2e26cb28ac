#pragma once

#include <filesystem>
#include <functional>
#include <span>

#include "fdv/imagery.hpp"

namespace fdv {

struct PlotOptions {
  int width = 640;
  int height = 480;
  int bins = 0;          // <= 0: default_bins
  bool semilog = false;  // log10 density axis
};

// Density histogram bars (gray) with the fitted pdf overlaid (red). No text
// is rendered; axes are drawn as black lines at the left and bottom.
RgbImage render_fit_plot(std::span<const double> values, const std::function<double(double)>& pdf,
                         const PlotOptions& options = {});

void write_fit_plot(const std::filesystem::path& path, std::span<const double> values,
                    const std::function<double(double)>& pdf, const PlotOptions& options = {});

}  // namespace fdv
