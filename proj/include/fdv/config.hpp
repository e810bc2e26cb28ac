#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdv/cleaning.hpp"
#include "fdv/imagery.hpp"
#include "fdv/inpaint.hpp"
#include "fdv/mcmc.hpp"
#include "fdv/segmentation.hpp"
#include "fdv/stats.hpp"
#include "json.hpp"

namespace fdv {

enum class Modality { visual, infrared };

// Visual class thresholds. `refine`, when present, is a second threshold set
// that a pixel must also pass (a narrower reselection after inspecting the
// first mask).
struct ClassThresholds {
  ColorThresholds primary;
  std::optional<ColorThresholds> refine;

  bool accepts(Rgb p) const { return primary.accepts(p) && (!refine || refine->accepts(p)); }
};

enum class FitQuantity {
  positive_longitudinal,  // "L+"
  speed,                  // velocity magnitude
  burn_time,              // seconds per pixel in the burning class
};

std::string_view to_string(FitQuantity q);
std::optional<FitQuantity> parse_fit_quantity(std::string_view text);

struct FitSpec {
  FitQuantity quantity = FitQuantity::positive_longitudinal;
  Family family = Family::exponential;
  std::vector<FitMethod> methods{FitMethod::moment_matching, FitMethod::mcmc};
  int bins = 0;  // 0: Freedman-Diaconis
  McmcConfig mcmc;  // seed is taken from the pipeline seed
};

struct PipelineConfig {
  std::filesystem::path frames_dir = "frames";
  std::optional<std::filesystem::path> occlusion_mask;  // PNG, nonzero = fill

  SequenceMeta sequence;
  std::optional<int> fov_px;  // unset: frame width

  Modality modality = Modality::visual;
  std::optional<ClassThresholds> burning, burned_cooling, smoke;
  ThermalBands thermal;
  std::string track_class = "burning";

  bool cleaning_enabled = true;
  CleaningSchedule cleaning = CleaningSchedule::defaults();

  bool clustering_enabled = true;
  double eps = 20.0;
  int min_pts = 10;

  double alpha = 1.0 / 3.0;

  bool tracking_enabled = true;
  std::optional<double> max_dist_px;  // unset: fov / 2, the Nyquist limit per frame pair
  double axis_deg = 0.0;

  std::vector<FitSpec> fits;

  bool inpainting_enabled = false;
  InpaintOptions inpainting;
  std::optional<ColorThresholds> auto_occlusion;

  bool export_labels = true;
  bool export_boundaries = true;
  bool export_velocity = true;
  bool export_fits = true;
  bool export_plots = false;
  bool plot_semilog = true;

  std::uint64_t seed = 42;

  // Relative paths resolve against this directory. Not serialized.
  std::filesystem::path base_dir;
  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }

  static PipelineConfig defaults();

  // Checks every field against its module's preconditions without touching
  // the filesystem.
  void validate() const;
};

// Parses a JSON document; unknown keys and out-of-range values are config
// errors. base_dir is stored for resolving relative paths.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
// Full document including every default. Paths are written as given.
nlohmann::json config_to_json(const PipelineConfig& config);

nlohmann::json thresholds_to_json(const ColorThresholds& t);
ColorThresholds thresholds_from_json(const nlohmann::json& j);

}  // namespace fdv
