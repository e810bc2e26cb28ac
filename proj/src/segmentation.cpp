#include "fdv/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"

namespace fdv {

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PointSet BinaryMask::points() const {
  PointSet pts;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (bits_[offset(x, y)]) pts.push_back({x, y});
  return pts;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorKind::dimension_mismatch, "mask shapes differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.bits()[i] = a.bits()[i] & b.bits()[i];
  return out;
}

void ColorThresholds::validate() const {
  for (int c = 0; c < 3; ++c) {
    if (rgb_lo[c] < 0 || rgb_hi[c] > 255 || rgb_lo[c] > rgb_hi[c]) {
      throw Error(ErrorKind::config, "rgb bounds must satisfy 0 <= lo <= hi <= 255");
    }
  }
  if (hsv_lo[0] < 0 || hsv_lo[0] > 360 || hsv_hi[0] < 0 || hsv_hi[0] > 360) {
    throw Error(ErrorKind::config, "hue bounds must lie in [0, 360]");
  }
  for (int c = 1; c < 3; ++c) {
    if (hsv_lo[c] < 0 || hsv_hi[c] > 1 || hsv_lo[c] > hsv_hi[c]) {
      throw Error(ErrorKind::config, "saturation/value bounds must satisfy 0 <= lo <= hi <= 1");
    }
  }
}

bool ColorThresholds::rgb_accepts(Rgb p) const {
  return p.r >= rgb_lo[0] && p.r <= rgb_hi[0] && p.g >= rgb_lo[1] && p.g <= rgb_hi[1] &&
         p.b >= rgb_lo[2] && p.b <= rgb_hi[2];
}

bool ColorThresholds::hsv_accepts(const HsvPixel& p) const {
  const bool hue_ok = hsv_lo[0] <= hsv_hi[0] ? (p.h >= hsv_lo[0] && p.h <= hsv_hi[0])
                                             : (p.h >= hsv_lo[0] || p.h <= hsv_hi[0]);
  return hue_ok && p.s >= hsv_lo[1] && p.s <= hsv_hi[1] && p.v >= hsv_lo[2] && p.v <= hsv_hi[2];
}

std::string_view to_string(ThermalLabel label) {
  switch (label) {
    case ThermalLabel::burning: return "burning";
    case ThermalLabel::burned_cooling: return "burned_cooling";
    case ThermalLabel::preheated: return "preheated";
  }
  return "unknown";
}

std::optional<ThermalLabel> parse_thermal_label(std::string_view text) {
  if (text == "burning") return ThermalLabel::burning;
  if (text == "burned_cooling") return ThermalLabel::burned_cooling;
  if (text == "preheated") return ThermalLabel::preheated;
  return std::nullopt;
}

ThermalBands::ThermalBands(std::vector<ThermalBand> bands) : bands_(std::move(bands)) {
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const auto& b = bands_[i];
    if (!(b.t_lo < b.t_hi)) throw Error(ErrorKind::config, "thermal band requires t_lo < t_hi");
    if (i > 0 && bands_[i - 1].t_hi > b.t_lo) {
      throw Error(ErrorKind::config, "thermal bands must be ascending and non-overlapping");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (bands_[j].label == b.label) {
        throw Error(ErrorKind::config, "duplicate thermal band label " + std::string(to_string(b.label)));
      }
    }
  }
}

const ThermalBand* ThermalBands::find(ThermalLabel label) const {
  for (const auto& b : bands_)
    if (b.label == label) return &b;
  return nullptr;
}

namespace {

void require_kind(const Frame& frame, FrameKind kind) {
  if (frame.kind() != kind) {
    throw Error(ErrorKind::kind_mismatch, kind == FrameKind::visual
                                              ? "visual segmentation needs a visual frame"
                                              : "thermal segmentation needs an infrared frame");
  }
}

template <typename Pred>
BinaryMask map_visual(const Frame& frame, Pred pred) {
  require_kind(frame, FrameKind::visual);
  BinaryMask m(frame.width(), frame.height());
  const auto px = frame.rgb();
  for (std::size_t i = 0; i < px.size(); ++i) m.bits()[i] = pred(px[i]) ? 1 : 0;
  return m;
}

}  // namespace

BinaryMask rgb_mask(const Frame& frame, const ColorThresholds& th) {
  return map_visual(frame, [&](Rgb p) { return th.rgb_accepts(p); });
}

BinaryMask hsv_mask(const Frame& frame, const ColorThresholds& th) {
  return map_visual(frame, [&](Rgb p) { return th.hsv_accepts(rgb_to_hsv(p)); });
}

BinaryMask segment_visual(const Frame& frame, const ColorThresholds& th) {
  return map_visual(frame, [&](Rgb p) { return th.accepts(p); });
}

BinaryMask segment_infrared(const Frame& frame, const ThermalBands& bands, ThermalLabel target) {
  require_kind(frame, FrameKind::infrared);
  const ThermalBand* band = bands.find(target);
  if (!band) {
    throw Error(ErrorKind::config, "no thermal band carries label " + std::string(to_string(target)));
  }
  BinaryMask m(frame.width(), frame.height());
  const auto t = frame.temperature();
  for (std::size_t i = 0; i < t.size(); ++i) m.bits()[i] = (t[i] >= band->t_lo && t[i] < band->t_hi) ? 1 : 0;
  return m;
}

RgbImage render_overlay(const RgbImage& image, const BinaryMask& mask, Rgb tint) {
  if (mask.width() != image.width || mask.height() != image.height) {
    throw Error(ErrorKind::dimension_mismatch, "overlay mask does not match image");
  }
  RgbImage out = image;
  auto blend = [](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>((int{a} + int{b} + 1) / 2);
  };
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    if (!mask[i]) continue;
    auto& p = out.pixels[i];
    p = {blend(p.r, tint.r), blend(p.g, tint.g), blend(p.b, tint.b)};
  }
  return out;
}

RgbImage render_overlay(const Frame& frame, const BinaryMask& mask, Rgb tint) {
  return render_overlay(frame.to_rgb_image(), mask, tint);
}

void calibrate_preview(const Frame& frame, const ColorThresholds& th,
                       const std::filesystem::path& out_path) {
  write_png(out_path, render_overlay(frame, segment_visual(frame, th)));
}

void calibrate_preview(const Frame& frame, const ThermalBands& bands, ThermalLabel target,
                       const std::filesystem::path& out_path) {
  write_png(out_path, render_overlay(frame, segment_infrared(frame, bands, target)));
}

}  // namespace fdv
