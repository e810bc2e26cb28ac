#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fdv/geometry.hpp"
#include "fdv/segmentation.hpp"
#include "fdv/stats.hpp"
#include "json.hpp"

namespace fdv {

// Per-pixel codes 0..3, see PixelClass.
struct LabelGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

struct ClassMasks {
  std::optional<BinaryMask> burning;
  std::optional<BinaryMask> burned_cooling;
  std::optional<BinaryMask> smoke;
};

// Precedence burning > burned_cooling > smoke > undisturbed. Throws
// dimension_mismatch when present masks disagree in size and empty_input
// when none is present.
LabelGrid compose_labels(const ClassMasks& masks);

// Longest run of consecutive label-1 frames divided by f_s, for every pixel
// that burned at least once, in row-major order.
std::vector<double> burn_time_per_pixel(const std::vector<LabelGrid>& labels, double sample_rate_hz);

struct VelocityRecord {
  std::size_t t = 0;
  int region = 0;
  Point src;
  double vx = 0.0, vy = 0.0, longitudinal = 0.0, transverse = 0.0;

  friend bool operator==(const VelocityRecord&, const VelocityRecord&) = default;
};

struct DatasetBundle {
  std::optional<std::vector<LabelGrid>> labels;
  std::optional<std::vector<std::vector<PointSet>>> boundaries;  // [t][region]
  std::optional<std::vector<VelocityRecord>> velocity;
  std::optional<nlohmann::json> fits;  // array of fit objects
  nlohmann::json manifest = nlohmann::json::object();

  friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

nlohmann::json fit_to_json(const FitResult& fit);

// Canonical hash of a JSON document (keys sorted, compact dump).
std::string config_hash(const nlohmann::json& config);

// Writes the bundle into a staging directory next to out_dir, manifest last,
// then moves it into place. An existing out_dir is replaced only when it is
// empty or holds a manifest.json from an earlier run. Returns the manifest
// path.
std::filesystem::path write_bundle(const DatasetBundle& bundle, const std::filesystem::path& out_dir);

DatasetBundle read_bundle(const std::filesystem::path& dir);

}  // namespace fdv
