#include "fdv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdv/boundary.hpp"
#include "fdv/clustering.hpp"
#include "fdv/image_io.hpp"
#include "fdv/mcmc.hpp"
#include "fdv/parallel.hpp"
#include "fdv/plot.hpp"

namespace fdv {
namespace fs = std::filesystem;
namespace {

template <typename Fn>
auto in_stage(const std::string& stage, std::optional<std::size_t> frame, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string where = "stage " + stage;
    if (frame) where += " (frame " + std::to_string(*frame) + ")";
    throw Error(e.kind(), where + ": " + e.what());
  }
}

BinaryMask class_mask(const Frame& frame, const ClassThresholds& c) {
  auto m = segment_visual(frame, c.primary);
  if (c.refine) m = mask_and(m, segment_visual(frame, *c.refine));
  return m;
}

struct Segmented {
  ClassMasks masks;
  BinaryMask tracked;
};

Segmented segment_frame(const PipelineConfig& cfg, const Frame& frame) {
  Segmented s;
  auto clean_if = [&](BinaryMask m) { return cfg.cleaning_enabled ? clean(m, cfg.cleaning) : m; };
  if (cfg.modality == Modality::visual) {
    if (frame.kind() != FrameKind::visual)
      throw Error(ErrorKind::kind_mismatch, "visual configuration applied to an infrared frame");
    if (cfg.burning) s.masks.burning = clean_if(class_mask(frame, *cfg.burning));
    if (cfg.burned_cooling) s.masks.burned_cooling = clean_if(class_mask(frame, *cfg.burned_cooling));
    if (cfg.smoke) s.masks.smoke = clean_if(class_mask(frame, *cfg.smoke));
    s.tracked = cfg.track_class == "burning" ? *s.masks.burning
                : cfg.track_class == "smoke" ? *s.masks.smoke
                                             : *s.masks.burned_cooling;
  } else {
    if (frame.kind() != FrameKind::infrared)
      throw Error(ErrorKind::kind_mismatch, "infrared configuration applied to a visual frame");
    if (cfg.thermal.find(ThermalLabel::burning))
      s.masks.burning = clean_if(segment_infrared(frame, cfg.thermal, ThermalLabel::burning));
    if (cfg.thermal.find(ThermalLabel::burned_cooling))
      s.masks.burned_cooling = clean_if(segment_infrared(frame, cfg.thermal, ThermalLabel::burned_cooling));
    const auto label = *parse_thermal_label(cfg.track_class);
    if (label == ThermalLabel::burning) s.tracked = *s.masks.burning;
    else if (label == ThermalLabel::burned_cooling) s.tracked = *s.masks.burned_cooling;
    else s.tracked = clean_if(segment_infrared(frame, cfg.thermal, label));
    if (!s.masks.burning && !s.masks.burned_cooling) s.masks.burning = BinaryMask(frame.width(), frame.height());
  }
  return s;
}

std::vector<double> fit_values(FitQuantity q, const PipelineResult& r, double sample_rate_hz) {
  std::vector<double> v;
  switch (q) {
    case FitQuantity::positive_longitudinal:
      if (r.track)
        for (const auto& s : r.track->samples)
          if (s.v.longitudinal > 0.0) v.push_back(s.v.longitudinal);
      break;
    case FitQuantity::speed:
      if (r.track)
        for (const auto& s : r.track->samples)
          if (s.v.magnitude > 0.0) v.push_back(s.v.magnitude);
      break;
    case FitQuantity::burn_time:
      v = burn_time_per_pixel(r.labels, sample_rate_hz);
      break;
  }
  return v;
}

std::string plot_name(const FitRecord& f) {
  std::string q(to_string(f.quantity));
  if (q == "L+") q = "Lplus";
  return q + "_" + std::string(to_string(f.fit.family)) + "_" + std::string(to_string(f.fit.method)) + ".png";
}

}  // namespace

int effective_fov(const PipelineConfig& config, const Frame& first) {
  return config.fov_px ? *config.fov_px : first.width();
}

PipelineResult process_sequence(const PipelineConfig& cfg, std::vector<Frame> frames, unsigned threads,
                                const std::optional<BinaryMask>& occlusion) {
  cfg.validate();
  if (frames.empty()) throw Error(ErrorKind::empty_input, "no frames to process");
  PipelineResult r;
  const std::size_t n = frames.size();

  if (cfg.inpainting_enabled) {
    std::vector<Warnings> w(n);
    parallel_for(n, threads, [&](std::size_t i) {
      in_stage("inpaint", frames[i].index(), [&] {
        const BinaryMask mask = occlusion ? *occlusion : auto_occlusion(frames[i], *cfg.auto_occlusion);
        frames[i] = inpaint(frames[i], mask, cfg.inpainting, &w[i]);
      });
    });
    for (const auto& x : w) r.warnings.append(x);
  }

  r.per_frame.resize(n);
  r.labels.resize(n);
  std::vector<Warnings> w(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto index = frames[i].index();
    auto seg = in_stage("segment", index, [&] { return segment_frame(cfg, frames[i]); });
    auto& out = r.per_frame[i];
    const auto regions = in_stage("cluster", index, [&] {
      if (cfg.clustering_enabled) return split_regions(seg.tracked, cfg.eps, cfg.min_pts);
      std::vector<PointSet> all;
      if (seg.tracked.count() > 0) all.push_back(seg.tracked.points());
      return all;
    });
    in_stage("boundary", index, [&] {
      for (std::size_t k = 0; k < regions.size(); ++k) {
        Warnings rw;
        auto b = region_boundary(regions[k], cfg.alpha, &rw);
        for (const auto& m : rw.items)
          w[i].add("frame " + std::to_string(index) + " region " + std::to_string(k) + ": " + m);
        if (!b) continue;
        out.regions.push_back(regions[k]);
        out.boundaries.push_back(std::move(b->boundary_points));
      }
    });
    r.labels[i] = in_stage("export", index, [&] { return compose_labels(seg.masks); });
    out.masks = std::move(seg.masks);
  });
  for (const auto& x : w) r.warnings.append(x);

  const double fov = effective_fov(cfg, frames.front());
  r.max_dist_px = cfg.max_dist_px ? *cfg.max_dist_px : fov / 2.0;
  if (cfg.tracking_enabled) {
    std::vector<std::vector<PointSet>> boundaries;
    for (const auto& f : r.per_frame) boundaries.push_back(f.boundaries);
    r.track = in_stage("track", std::nullopt, [&] {
      return track_sequence(boundaries, cfg.sequence.resolution_px_per_cm, cfg.sequence.sample_rate_hz,
                            cfg.axis_deg, r.max_dist_px, threads, &r.warnings);
    });
    VelocitySummary vs;
    vs.n = r.track->samples.size();
    for (const auto& s : r.track->samples) {
      vs.mean_vx += s.v.vx;
      vs.mean_up -= s.v.vy;
      vs.mean_speed += s.v.magnitude;
    }
    if (vs.n > 0) {
      vs.mean_vx /= vs.n;
      vs.mean_up /= vs.n;
      vs.mean_speed /= vs.n;
      vs.inclination_deg = inclination_deg(vs.mean_vx, vs.mean_up);
    }
    r.velocity_summary = vs;
  }

  for (std::size_t fi = 0; fi < cfg.fits.size(); ++fi) {
    const auto& fit_spec = cfg.fits[fi];
    const auto values = fit_values(fit_spec.quantity, r, cfg.sequence.sample_rate_hz);
    for (auto method : fit_spec.methods) {
      const std::string stage = "fit " + std::string(to_string(fit_spec.quantity)) + " " +
                                std::string(to_string(fit_spec.family)) + " " + std::string(to_string(method));
      auto fit = in_stage(stage, std::nullopt, [&] {
        if (method == FitMethod::moment_matching) return moment_match(values, fit_spec.family, fit_spec.bins, &r.warnings);
        McmcConfig m = fit_spec.mcmc;
        m.seed = splitmix64(cfg.seed + fi);
        return mcmc_fit(values, fit_spec.family, m, fit_spec.bins, threads, &r.warnings);
      });
      r.fits.push_back({fit_spec.quantity, std::move(fit), values.size()});
    }
  }
  r.frames = std::move(frames);
  return r;
}

DatasetBundle make_bundle(const PipelineConfig& cfg, const PipelineResult& r, const nlohmann::json& inputs) {
  DatasetBundle b;
  if (cfg.export_labels) b.labels = r.labels;
  if (cfg.export_boundaries) {
    b.boundaries.emplace();
    for (const auto& f : r.per_frame) b.boundaries->push_back(f.boundaries);
  }
  if (cfg.export_velocity && r.track) {
    b.velocity.emplace();
    for (const auto& s : r.track->samples)
      b.velocity->push_back({s.t, s.region, s.src, s.v.vx, s.v.vy, s.v.longitudinal, s.v.transverse});
  }
  if (cfg.export_fits) {
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : r.fits) {
      auto j = fit_to_json(f.fit);
      j["quantity"] = std::string(to_string(f.quantity));
      j["n"] = f.n;
      fits.push_back(j);
    }
    nlohmann::json doc = {{"fits", fits}};
    if (r.velocity_summary) {
      const auto& v = *r.velocity_summary;
      doc["velocity_summary"] = {{"n", v.n},
                                 {"mean_vx", v.mean_vx},
                                 {"mean_up", v.mean_up},
                                 {"mean_speed", v.mean_speed},
                                 {"inclination_deg", v.inclination_deg}};
    }
    b.fits = doc;
  }
  const auto config_json = config_to_json(cfg);
  nlohmann::json indices = nlohmann::json::array();
  for (const auto& f : r.frames) indices.push_back(f.index());
  b.manifest = {{"software", "fdv"},
                {"version", kVersion},
                {"config", config_json},
                {"config_hash", config_hash(config_json)},
                {"seed", cfg.seed},
                {"inputs", inputs},
                {"resolution_px_per_cm", cfg.sequence.resolution_px_per_cm},
                {"sample_rate_hz", cfg.sequence.sample_rate_hz},
                {"timesteps", r.frames.size()},
                {"frame_indices", indices},
                {"max_dist_px", r.max_dist_px},
                {"warnings", r.warnings.items}};
  return b;
}

std::string format_report(const PipelineConfig& cfg, const PipelineResult& r) {
  std::ostringstream o;
  o << "frames: " << r.frames.size() << " (f_s = " << cfg.sequence.sample_rate_hz << " Hz)\n";
  std::size_t rmin = SIZE_MAX, rmax = 0, rsum = 0, bsum = 0;
  for (const auto& f : r.per_frame) {
    rmin = std::min(rmin, f.regions.size());
    rmax = std::max(rmax, f.regions.size());
    rsum += f.regions.size();
    for (const auto& b : f.boundaries) bsum += b.size();
  }
  if (r.per_frame.empty()) rmin = 0;
  o << "regions per frame: min " << rmin << ", max " << rmax << ", total " << rsum << "\n";
  o << "boundary points: " << bsum << "\n";
  if (r.track) {
    std::size_t src = 0, matched = 0;
    for (const auto& p : r.track->pairs) {
      src += p.src_points;
      matched += p.matched;
    }
    o << "tracking: " << matched << " of " << src << " boundary points matched (max_dist " << r.max_dist_px
      << " px)\n";
    if (r.velocity_summary && r.velocity_summary->n > 0) {
      const auto& v = *r.velocity_summary;
      o << "velocity: mean speed " << v.mean_speed << " cm/s, mean (vx, up) = (" << v.mean_vx << ", " << v.mean_up
        << ") cm/s, inclination " << v.inclination_deg << " deg\n";
    }
  }
  for (const auto& f : r.fits) {
    o << "fit " << to_string(f.quantity) << " " << to_string(f.fit.family) << " " << to_string(f.fit.method)
      << ": n=" << f.n << " lambda=" << f.fit.lambda;
    if (f.fit.family == Family::erlang) o << " k=" << f.fit.k;
    if (f.fit.lambda_interval) o << " 95% [" << f.fit.lambda_interval->lo << ", " << f.fit.lambda_interval->hi << "]";
    if (f.fit.nrmse) o << " nrmse=" << *f.fit.nrmse;
    o << "\n";
  }
  for (const auto& w : r.warnings.items) o << "warning: " << w << "\n";
  return o.str();
}

RunOutput run_pipeline(const PipelineConfig& cfg, const fs::path& out_dir, unsigned threads) {
  cfg.validate();
  const auto dir = cfg.resolve(cfg.frames_dir);
  auto frames = in_stage("load", std::nullopt, [&] { return load_sequence(dir, cfg.sequence); });

  nlohmann::json inputs = nlohmann::json::array();
  {
    const auto files = list_frame_files(dir);
    const auto stride = frame_stride(cfg.sequence.frame_rate_hz, cfg.sequence.sample_rate_hz);
    for (std::size_t i = 0; i < files.size(); i += stride)
      inputs.push_back({{"file", files[i].filename().string()}, {"fnv1a64", hex64(fnv1a64(read_text_file(files[i])))}});
  }

  std::optional<BinaryMask> occlusion;
  if (cfg.inpainting_enabled && cfg.occlusion_mask) {
    const auto path = cfg.resolve(*cfg.occlusion_mask);
    occlusion = in_stage("load", std::nullopt, [&] {
      const auto img = read_png(path);
      BinaryMask m(img.width, img.height);
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          const auto& p = img.at(x, y);
          m.set(x, y, p.r || p.g || p.b);
        }
      if (cfg.sequence.roi) {
        const auto roi = *cfg.sequence.roi;
        if (roi.right() > m.width() || roi.bottom() > m.height())
          throw Error(ErrorKind::bounds, "roi exceeds the occlusion mask");
        BinaryMask c(roi.width, roi.height);
        for (int y = 0; y < roi.height; ++y)
          for (int x = 0; x < roi.width; ++x) c.set(x, y, m.at(roi.x + x, roi.y + y));
        m = std::move(c);
      }
      if (m.width() != frames.front().width() || m.height() != frames.front().height())
        throw Error(ErrorKind::dimension_mismatch, path.string() + ": occlusion mask size differs from the frames");
      return m;
    });
    inputs.push_back({{"file", path.filename().string()}, {"fnv1a64", hex64(fnv1a64(read_text_file(path)))}});
  }

  RunOutput out;
  out.result = process_sequence(cfg, std::move(frames), threads, occlusion);
  const auto bundle = make_bundle(cfg, out.result, inputs);
  out.manifest = in_stage("export", std::nullopt, [&] { return write_bundle(bundle, out_dir); });
  if (cfg.export_plots) {
    try {
      fs::create_directories(out_dir / "plots");
      for (const auto& f : out.result.fits) {
        const auto values = fit_values(f.quantity, out.result, cfg.sequence.sample_rate_hz);
        PlotOptions po;
        po.semilog = cfg.plot_semilog;
        const auto fit = f.fit;
        write_fit_plot(out_dir / "plots" / plot_name(f), values, [fit](double x) { return fit_pdf(fit, x); }, po);
      }
    } catch (const Error& e) {
      std::error_code ec;
      fs::remove_all(out_dir, ec);
      throw Error(e.kind(), std::string("stage export: ") + e.what());
    }
  }
  out.report = format_report(cfg, out.result);
  return out;
}

SamplingReport advise(const PipelineConfig& config, const std::vector<Frame>& native,
                      const std::vector<double>& rates_hz, unsigned threads, Warnings* warnings) {
  if (native.empty()) throw Error(ErrorKind::empty_input, "no frames to analyse");
  std::vector<double> u_obs(rates_hz.size(), 0.0);
  for (std::size_t i = 0; i < rates_hz.size(); ++i) {
    if (rates_hz[i] == 0.0) continue;
    PipelineConfig c = config;
    c.sequence.sample_rate_hz = rates_hz[i];
    c.tracking_enabled = true;
    c.fits.clear();
    const auto stride = frame_stride(c.sequence.frame_rate_hz, rates_hz[i]);
    auto sub = subsample(native, stride);
    for (std::size_t k = 0; k < sub.size(); ++k) sub[k].set_time(sub[k].index(), k / rates_hz[i]);
    const auto r = process_sequence(c, std::move(sub), threads);
    if (warnings) warnings->append(r.warnings);
    for (const auto& s : r.track->samples) u_obs[i] = std::max(u_obs[i], s.v.magnitude);
  }
  SequenceMeta meta = config.sequence;
  meta.fov_px = effective_fov(config, native.front());
  return sampling_advisor(meta, rates_hz, u_obs, warnings);
}

SamplingReport advise(const PipelineConfig& config, const std::vector<double>& rates_hz, unsigned threads,
                      Warnings* warnings) {
  config.validate();
  SequenceMeta native_meta = config.sequence;
  native_meta.sample_rate_hz = native_meta.frame_rate_hz;
  const auto frames = in_stage("load", std::nullopt,
                               [&] { return load_sequence(config.resolve(config.frames_dir), native_meta); });
  return advise(config, frames, rates_hz, threads, warnings);
}

nlohmann::json sampling_report_to_json(const SamplingReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"f_hz", r.f_hz}, {"u_max", r.u_max}, {"u_obs", r.u_obs}, {"ratio", r.ratio},
                    {"degenerate", r.degenerate}, {"saturated", r.saturated}});
  return {{"rows", rows},
          {"recommended_f_hz", report.recommended_f_hz ? nlohmann::json(*report.recommended_f_hz) : nlohmann::json(nullptr)}};
}

}  // namespace fdv
