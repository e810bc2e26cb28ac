#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "fdv/geometry.hpp"
#include "fdv/imagery.hpp"
#include "fdv/segmentation.hpp"

namespace fdv {

enum class ScenarioKind { expanding_disk, translating_front, ring_fire, two_flanks, advected_plume };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);

// Palette. Each class color falls inside exactly one class of the default
// segmentation thresholds; background and trees fall inside none.
namespace palette {
inline constexpr Rgb fire{255, 140, 0};
inline constexpr Rgb background{40, 140, 40};
inline constexpr Rgb burned{60, 50, 45};
inline constexpr Rgb trees{20, 60, 20};
inline constexpr std::uint8_t smoke_lo = 155;  // plume gray levels span [smoke_lo, smoke_hi]
inline constexpr std::uint8_t smoke_hi = 190;
}  // namespace palette

struct Scenario {
  ScenarioKind kind = ScenarioKind::expanding_disk;
  int width = 256;
  int height = 256;
  int frames = 20;
  std::uint64_t seed = 1;
  double noise = 0.0;         // salt probability per pixel per frame
  std::vector<Rect> occlusions;  // painted in tree color over everything

  double speed = 2.0;         // px/frame along the front normal
  int burn_duration = 0;      // frames a pixel burns; 0 = never burns out

  // expanding_disk, ring_fire; plume start position
  std::optional<double> cx, cy;  // default: frame center (plume: lower-left corner)
  double r0 = 10.0;

  // translating_front: leading edge x at frame 0, moving toward +x
  double x0 = 10.0;

  // two_flanks: minimum gap between the leading edges at the last frame and
  // the bow of each flank (x offset at the top and bottom rows)
  double gap = 60.0;
  double bow = 12.0;

  // advected_plume: blob velocity, px/frame; w is upward
  double plume_u = 0.29 * 8.0;
  double plume_w = 1.0 * 8.0;
  double plume_sigma = 35.0;

  // Dimensions, frame count and geometry checks. Throws scenario errors.
  void validate() const;
  static Scenario defaults(ScenarioKind kind);
};

struct GroundTruth {
  std::vector<BinaryMask> burning;  // per frame
  std::vector<BinaryMask> burned;
  std::vector<BinaryMask> smoke;
  std::vector<PointSet> boundary;   // tracked-class pixels with a 4-neighbor outside
  std::vector<std::vector<double>> normal_speed;  // px/frame, parallel to boundary
  std::vector<int> burn_frames;     // per pixel, frames spent burning
};

struct SynthOutput {
  std::vector<Frame> frames;
  GroundTruth truth;
};

// Frame t gets index t and timestamp t / sample_rate_hz.
SynthOutput render(const Scenario& scenario, double sample_rate_hz = 1.0);

// Writes frames/frame_%06d.png plus truth/boundary_t%06d.csv (x,y,normal_speed)
// and truth/burn_frames.csv under out_dir.
void write_synth(const SynthOutput& output, const std::filesystem::path& out_dir);

}  // namespace fdv
