#include "fdv/imagery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"

namespace fdv {

RgbImage::RgbImage(int w, int h, Rgb fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

namespace {

void check_dimensions(int width, int height, std::size_t count) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::dimension_mismatch, "frame dimensions must be positive");
  }
  if (count != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::dimension_mismatch,
                "pixel count " + std::to_string(count) + " != " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

}  // namespace

Frame Frame::visual(int width, int height, std::vector<Rgb> pixels, std::size_t index,
                    double timestamp_s) {
  check_dimensions(width, height, pixels.size());
  Frame f;
  f.kind_ = FrameKind::visual;
  f.width_ = width;
  f.height_ = height;
  f.rgb_ = std::move(pixels);
  f.index_ = index;
  f.timestamp_s_ = timestamp_s;
  return f;
}

Frame Frame::visual(RgbImage image, std::size_t index, double timestamp_s) {
  return visual(image.width, image.height, std::move(image.pixels), index, timestamp_s);
}

Frame Frame::infrared(int width, int height, std::vector<double> temperature, std::size_t index,
                      double timestamp_s) {
  check_dimensions(width, height, temperature.size());
  for (double t : temperature) {
    if (!std::isfinite(t)) throw Error(ErrorKind::domain, "non-finite temperature value");
  }
  Frame f;
  f.kind_ = FrameKind::infrared;
  f.width_ = width;
  f.height_ = height;
  f.temperature_ = std::move(temperature);
  f.index_ = index;
  f.timestamp_s_ = timestamp_s;
  return f;
}

RgbImage Frame::to_rgb_image() const {
  RgbImage img(width_, height_);
  if (kind_ == FrameKind::visual) {
    img.pixels = rgb_;
    return img;
  }
  // Temperature grids are rendered as gray, linearly stretched over the frame's range.
  const auto [lo, hi] = std::minmax_element(temperature_.begin(), temperature_.end());
  const double span = *hi - *lo;
  for (std::size_t i = 0; i < temperature_.size(); ++i) {
    const double t = span > 0 ? (temperature_[i] - *lo) / span : 0.0;
    const auto g = static_cast<std::uint8_t>(std::lround(t * 255.0));
    img.pixels[i] = {g, g, g};
  }
  return img;
}

void SequenceMeta::validate() const {
  if (!(frame_rate_hz > 0)) throw Error(ErrorKind::config, "frame_rate_hz must be > 0");
  if (!(sample_rate_hz > 0) || sample_rate_hz > frame_rate_hz) {
    throw Error(ErrorKind::config, "sample_rate_hz must satisfy 0 < f_s <= frame_rate_hz");
  }
  frame_stride(frame_rate_hz, sample_rate_hz);
  if (!(resolution_px_per_cm > 0)) throw Error(ErrorKind::config, "resolution_px_per_cm must be > 0");
  if (fov_px <= 0) throw Error(ErrorKind::config, "fov_px must be a positive integer");
  if (roi && (roi->x < 0 || roi->y < 0 || roi->empty())) {
    throw Error(ErrorKind::config, "roi must have non-negative origin and positive size");
  }
}

HsvPixel rgb_to_hsv(Rgb p) {
  const int r = p.r, g = p.g, b = p.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const double delta = mx - mn;
  HsvPixel out;
  out.v = mx / 255.0;
  out.s = mx == 0 ? 0.0 : delta / mx;
  if (delta == 0) {
    out.h = 0.0;
    return out;
  }
  double h;
  if (mx == r) {
    h = 60.0 * ((g - b) / delta);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(const HsvPixel& p) {
  const double c = p.v * p.s;
  const double hp = std::fmod(p.h, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  switch (static_cast<int>(hp)) {
    case 0: r1 = c; g1 = x; break;
    case 1: r1 = x; g1 = c; break;
    case 2: g1 = c; b1 = x; break;
    case 3: g1 = x; b1 = c; break;
    case 4: r1 = x; b1 = c; break;
    default: r1 = c; b1 = x; break;
  }
  const double m = p.v - c;
  auto to8 = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
  };
  return {to8(r1 + m), to8(g1 + m), to8(b1 + m)};
}

std::size_t frame_stride(double frame_rate_hz, double sample_rate_hz) {
  if (!(frame_rate_hz > 0) || !(sample_rate_hz > 0)) {
    throw Error(ErrorKind::config, "frame and sample rates must be positive");
  }
  const double ratio = frame_rate_hz / sample_rate_hz;
  const double stride = std::round(ratio);
  if (stride < 1 || std::fabs(ratio - stride) >= 1e-9) {
    throw Error(ErrorKind::config, "sample rate " + format_double(sample_rate_hz) +
                                       " Hz does not give an integer stride of " +
                                       format_double(frame_rate_hz) + " Hz");
  }
  return static_cast<std::size_t>(stride);
}

std::vector<Frame> subsample(std::span<const Frame> frames, std::size_t stride) {
  if (stride == 0) throw Error(ErrorKind::config, "stride must be >= 1");
  std::vector<Frame> out;
  out.reserve(frames.size() / stride + 1);
  for (std::size_t i = 0; i < frames.size(); i += stride) out.push_back(frames[i]);
  return out;
}

Frame crop(const Frame& frame, const Rect& roi) {
  if (roi.x < 0 || roi.y < 0 || roi.empty() || roi.right() > frame.width() ||
      roi.bottom() > frame.height()) {
    throw Error(ErrorKind::bounds, "roi (" + std::to_string(roi.x) + "," + std::to_string(roi.y) +
                                       "," + std::to_string(roi.width) + "x" +
                                       std::to_string(roi.height) + ") exceeds frame " +
                                       std::to_string(frame.width()) + "x" +
                                       std::to_string(frame.height()));
  }
  const std::size_t n = static_cast<std::size_t>(roi.width) * roi.height;
  if (frame.kind() == FrameKind::visual) {
    std::vector<Rgb> px;
    px.reserve(n);
    for (int y = roi.y; y < roi.bottom(); ++y)
      for (int x = roi.x; x < roi.right(); ++x) px.push_back(frame.rgb_at(x, y));
    return Frame::visual(roi.width, roi.height, std::move(px), frame.index(), frame.timestamp_s());
  }
  std::vector<double> t;
  t.reserve(n);
  for (int y = roi.y; y < roi.bottom(); ++y)
    for (int x = roi.x; x < roi.right(); ++x) t.push_back(frame.temperature_at(x, y));
  return Frame::infrared(roi.width, roi.height, std::move(t), frame.index(), frame.timestamp_s());
}

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorKind::load, "input directory not found: " + directory.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    const auto ext = entry.path().extension().string();
    if (name.rfind("frame_", 0) == 0 && (ext == ".png" || ext == ".csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

std::vector<Frame> load_sequence(const std::filesystem::path& directory, const SequenceMeta& meta) {
  meta.validate();
  const auto files = list_frame_files(directory);
  if (files.empty()) throw Error(ErrorKind::empty_input, "no frame files in " + directory.string());

  const bool visual = files.front().extension() == ".png";
  for (const auto& f : files) {
    if ((f.extension() == ".png") != visual) {
      throw Error(ErrorKind::load, "mixed png/csv frames in " + directory.string());
    }
  }

  const std::size_t stride = frame_stride(meta.frame_rate_hz, meta.sample_rate_hz);
  std::vector<Frame> frames;
  int width = -1, height = -1;
  for (std::size_t native = 0, sample = 0; native < files.size(); native += stride, ++sample) {
    const auto& path = files[native];
    const double t = static_cast<double>(sample) / meta.sample_rate_hz;
    Frame frame;
    try {
      if (visual) {
        frame = Frame::visual(read_png(path), native, t);
      } else {
        auto grid = read_csv_grid(path);
        frame = Frame::infrared(grid.width, grid.height, std::move(grid.values), native, t);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::load) throw;
      throw Error(ErrorKind::load, path.string() + ": " + e.what());
    }
    if (width < 0) {
      width = frame.width();
      height = frame.height();
    } else if (frame.width() != width || frame.height() != height) {
      throw Error(ErrorKind::dimension_mismatch,
                  path.string() + " is " + std::to_string(frame.width()) + "x" +
                      std::to_string(frame.height()) + ", expected " + std::to_string(width) +
                      "x" + std::to_string(height));
    }
    frames.push_back(meta.roi ? crop(frame, *meta.roi) : std::move(frame));
  }
  return frames;
}

}  // namespace fdv
