#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdv/geometry.hpp"
#include "fdv/imagery.hpp"

namespace fdv {

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[offset(x, y)] != 0; }
  void set(int x, int y, bool value = true) { bits_[offset(x, y)] = value ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  std::size_t count() const;
  bool same_shape(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  // Set pixels in row-major order.
  PointSet points() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t offset(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);

// Per-channel closed RGB box and an HSV box whose hue interval wraps through
// 360 -> 0 when hue_lo > hue_hi.
struct ColorThresholds {
  std::array<int, 3> rgb_lo{0, 0, 0};
  std::array<int, 3> rgb_hi{255, 255, 255};
  std::array<double, 3> hsv_lo{0.0, 0.0, 0.0};
  std::array<double, 3> hsv_hi{360.0, 1.0, 1.0};

  void validate() const;
  bool rgb_accepts(Rgb p) const;
  bool hsv_accepts(const HsvPixel& p) const;
  bool accepts(Rgb p) const { return rgb_accepts(p) && hsv_accepts(rgb_to_hsv(p)); }

  static ColorThresholds full_range() { return {}; }
};

// Label codes shared with exported label grids: undisturbed 0, burning 1,
// burned and cooling 2, smoke 3.
enum class PixelClass : std::uint8_t {
  undisturbed = 0,
  burning = 1,
  burned_cooling = 2,
  smoke = 3,
};

enum class ThermalLabel { burning, burned_cooling, preheated };

std::string_view to_string(ThermalLabel label);
std::optional<ThermalLabel> parse_thermal_label(std::string_view text);

struct ThermalBand {
  ThermalLabel label;
  double t_lo;
  double t_hi;  // exclusive
};

// Ordered, pairwise-disjoint temperature bands. Construction validates.
class ThermalBands {
 public:
  ThermalBands() = default;
  explicit ThermalBands(std::vector<ThermalBand> bands);

  const std::vector<ThermalBand>& bands() const { return bands_; }
  const ThermalBand* find(ThermalLabel label) const;

 private:
  std::vector<ThermalBand> bands_;
};

BinaryMask rgb_mask(const Frame& frame, const ColorThresholds& th);
BinaryMask hsv_mask(const Frame& frame, const ColorThresholds& th);
// RGB test AND HSV test per pixel.
BinaryMask segment_visual(const Frame& frame, const ColorThresholds& th);
BinaryMask segment_infrared(const Frame& frame, const ThermalBands& bands, ThermalLabel target);

// Source image with masked pixels blended half-way toward `tint`.
RgbImage render_overlay(const Frame& frame, const BinaryMask& mask, Rgb tint = {255, 0, 255});
RgbImage render_overlay(const RgbImage& image, const BinaryMask& mask, Rgb tint = {255, 0, 255});

void calibrate_preview(const Frame& frame, const ColorThresholds& th,
                       const std::filesystem::path& out_path);
void calibrate_preview(const Frame& frame, const ThermalBands& bands, ThermalLabel target,
                       const std::filesystem::path& out_path);

}  // namespace fdv
