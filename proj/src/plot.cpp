#include "fdv/plot.hpp"

#include <algorithm>
#include <cmath>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"
#include "fdv/stats.hpp"

namespace fdv {

RgbImage render_fit_plot(std::span<const double> values, const std::function<double(double)>& pdf,
                         const PlotOptions& options) {
  if (options.width < 32 || options.height < 32)
    throw Error(ErrorKind::config, "plot must be at least 32x32");
  const int bins = options.bins > 0 ? options.bins : default_bins(values);
  const auto h = density_histogram(values, bins);
  RgbImage img(options.width, options.height, Rgb{255, 255, 255});
  const int margin = 10;
  const int x0 = margin, x1 = options.width - margin, y0 = options.height - margin, y1 = margin;

  double top = *std::max_element(h.density.begin(), h.density.end());
  const double hi_x = h.lo + h.width * bins;
  for (int px = x0; px < x1; ++px) top = std::max(top, pdf(h.lo + (px - x0 + 0.5) / (x1 - x0) * (hi_x - h.lo)));
  double floor_v = top * 1e-4;
  for (double d : h.density)
    if (d > 0.0) floor_v = std::min(floor_v, d);
  auto to_y = [&](double d) {
    double f;
    if (options.semilog) {
      if (!(d > 0.0)) return y0;
      f = (std::log10(d) - std::log10(floor_v)) / (std::log10(top) - std::log10(floor_v));
    } else {
      f = d / top;
    }
    f = std::clamp(f, 0.0, 1.0);
    return y0 - static_cast<int>(std::lround(f * (y0 - y1)));
  };

  for (int b = 0; b < bins; ++b) {
    const int bx0 = x0 + (x1 - x0) * b / bins;
    const int bx1 = x0 + (x1 - x0) * (b + 1) / bins;
    const int by = to_y(h.density[b]);
    for (int y = by; y < y0; ++y)
      for (int x = bx0; x < bx1; ++x) img.at(x, y) = Rgb{180, 180, 180};
  }
  int prev = -1;
  for (int px = x0; px < x1; ++px) {
    const int py = to_y(pdf(h.lo + (px - x0 + 0.5) / (x1 - x0) * (hi_x - h.lo)));
    const int a = prev < 0 ? py : std::min(prev, py), b = prev < 0 ? py : std::max(prev, py);
    for (int y = std::max(a, y1); y <= std::min(b, y0); ++y) img.at(px, y) = Rgb{220, 30, 30};
    prev = py;
  }
  for (int x = x0; x <= x1; ++x) img.at(x, y0) = Rgb{0, 0, 0};
  for (int y = y1; y <= y0; ++y) img.at(x0, y) = Rgb{0, 0, 0};
  return img;
}

void write_fit_plot(const std::filesystem::path& path, std::span<const double> values,
                    const std::function<double(double)>& pdf, const PlotOptions& options) {
  write_png(path, render_fit_plot(values, pdf, options));
}

}  // namespace fdv
