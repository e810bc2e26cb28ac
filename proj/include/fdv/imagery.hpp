#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "fdv/geometry.hpp"

namespace fdv {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill = {});

  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

enum class FrameKind { visual, infrared };

// One timestamped image. Visual frames carry RGB pixels, infrared frames a
// scalar temperature grid; exactly one of the two buffers is populated.
class Frame {
 public:
  Frame() = default;

  static Frame visual(int width, int height, std::vector<Rgb> pixels,
                      std::size_t index = 0, double timestamp_s = 0.0);
  static Frame visual(RgbImage image, std::size_t index = 0, double timestamp_s = 0.0);
  static Frame infrared(int width, int height, std::vector<double> temperature,
                        std::size_t index = 0, double timestamp_s = 0.0);

  FrameKind kind() const { return kind_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t index() const { return index_; }
  double timestamp_s() const { return timestamp_s_; }
  void set_time(std::size_t index, double timestamp_s) {
    index_ = index;
    timestamp_s_ = timestamp_s;
  }

  std::span<const Rgb> rgb() const { return rgb_; }
  std::span<Rgb> rgb() { return rgb_; }
  std::span<const double> temperature() const { return temperature_; }
  std::span<double> temperature() { return temperature_; }

  const Rgb& rgb_at(int x, int y) const { return rgb_[offset(x, y)]; }
  double temperature_at(int x, int y) const { return temperature_[offset(x, y)]; }

  RgbImage to_rgb_image() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t offset(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  std::size_t index_ = 0;
  double timestamp_s_ = 0.0;
  FrameKind kind_ = FrameKind::visual;
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> rgb_;
  std::vector<double> temperature_;
};

struct SequenceMeta {
  double frame_rate_hz = 30.0;        // native capture rate f
  double sample_rate_hz = 1.0;        // f_s, 0 < f_s <= f
  double resolution_px_per_cm = 1.0;  // RES
  int fov_px = 1;                     // pixel extent along the primary spread direction
  std::optional<Rect> roi;            // unset = full frame

  void validate() const;
};

struct HsvPixel {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

// Hexcone conversion. Achromatic pixels get h = 0.
HsvPixel rgb_to_hsv(Rgb p);
// Inverse of rgb_to_hsv, rounded to the nearest 8-bit value per channel.
Rgb hsv_to_rgb(const HsvPixel& p);

// Integral sampling stride round(f / f_s). Throws config error when f / f_s
// is not an integer to within 1e-9.
std::size_t frame_stride(double frame_rate_hz, double sample_rate_hz);

// Keeps every stride-th frame starting with the first.
std::vector<Frame> subsample(std::span<const Frame> frames, std::size_t stride);

Frame crop(const Frame& frame, const Rect& roi);

// Loads frame_%06d.png (visual) or frame_%06d.csv (infrared) files from a
// directory in lexicographic order, keeping every stride-th file. Frame
// indices are native positions; timestamps are sample_number / f_s. Crops
// to meta.roi when set.
std::vector<Frame> load_sequence(const std::filesystem::path& directory, const SequenceMeta& meta);

// Sorted frame file paths (png or csv) in a directory.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& directory);

}  // namespace fdv
