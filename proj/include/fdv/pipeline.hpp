#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fdv/config.hpp"
#include "fdv/export.hpp"
#include "fdv/imagery.hpp"
#include "fdv/sampling.hpp"
#include "fdv/tracking.hpp"

namespace fdv {

inline constexpr const char* kVersion = "0.1.0";

struct FrameResult {
  ClassMasks masks;             // cleaned class masks
  std::vector<PointSet> regions;     // tracked-class regions with a boundary
  std::vector<PointSet> boundaries;  // parallel to regions
};

struct FitRecord {
  FitQuantity quantity;
  FitResult fit;
  std::size_t n = 0;
};

struct VelocitySummary {
  std::size_t n = 0;
  double mean_vx = 0.0;
  double mean_up = 0.0;  // mean of -vy: image y grows downward
  double mean_speed = 0.0;
  double inclination_deg = 0.0;  // atan2(mean_up, mean_vx)
};

struct PipelineResult {
  std::vector<Frame> frames;  // after inpainting
  std::vector<FrameResult> per_frame;
  std::optional<TrackResult> track;
  std::optional<VelocitySummary> velocity_summary;
  std::vector<FitRecord> fits;
  std::vector<LabelGrid> labels;
  double max_dist_px = 0.0;
  Warnings warnings;
};

// Pixel extent used for the Nyquist bound: configured fov_px or frame width.
int effective_fov(const PipelineConfig& config, const Frame& first);

// Inpaint, segment, clean, split, extract boundaries, track and fit, all in
// memory. `frames` are sampled frames in order. Errors carry the stage name
// and frame index.
PipelineResult process_sequence(const PipelineConfig& config, std::vector<Frame> frames,
                                unsigned threads = 1, const std::optional<BinaryMask>& occlusion = {});

DatasetBundle make_bundle(const PipelineConfig& config, const PipelineResult& result,
                          const nlohmann::json& inputs);

// Human-readable run summary.
std::string format_report(const PipelineConfig& config, const PipelineResult& result);

struct RunOutput {
  PipelineResult result;
  std::filesystem::path manifest;
  std::string report;
};

// Loads frames from config.frames_dir, processes them and writes the bundle
// (plus plots when enabled) to out_dir. No partial bundle is left on error.
RunOutput run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                       unsigned threads = 1);

// Tracks the native-rate sequence at each candidate rate and reports the
// observed maximum speed against the Nyquist bound.
SamplingReport advise(const PipelineConfig& config, const std::vector<Frame>& native_frames,
                      const std::vector<double>& rates_hz, unsigned threads = 1,
                      Warnings* warnings = nullptr);
SamplingReport advise(const PipelineConfig& config, const std::vector<double>& rates_hz,
                      unsigned threads = 1, Warnings* warnings = nullptr);

nlohmann::json sampling_report_to_json(const SamplingReport& report);

}  // namespace fdv
