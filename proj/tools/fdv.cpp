#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdv/error.hpp"
#include "fdv/export.hpp"
#include "fdv/image_io.hpp"
#include "fdv/inpaint.hpp"
#include "fdv/mcmc.hpp"
#include "fdv/pipeline.hpp"
#include "fdv/plot.hpp"
#include "fdv/segmentation.hpp"
#include "fdv/stats.hpp"
#include "fdv/synth.hpp"

namespace fs = std::filesystem;
using namespace fdv;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

PipelineConfig load(const Common& c) {
  auto cfg = c.config.empty() ? PipelineConfig::defaults() : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

void require_out(const Common& c, const char* what) {
  if (c.out.empty()) throw Error(ErrorKind::config, std::string("--out is required: ") + what);
}

void dump_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path, j.dump(2) + "\n");
}

// One or more numbers per line, comma or whitespace separated. A first line
// that does not parse is treated as a header.
std::vector<double> read_values(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<double> values;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    for (auto& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        if (line_no == 1 && values.empty()) break;
        throw Error(ErrorKind::load, path.string() + ":" + std::to_string(line_no) + ": not a number: " + tok);
      }
      values.push_back(v);
    }
  }
  return values;
}

BinaryMask mask_from_png(const fs::path& path) {
  const auto img = read_png(path);
  BinaryMask m(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const auto& p = img.at(x, y);
      m.set(x, y, p.r || p.g || p.b);
    }
  return m;
}

int cmd_config_init(const Common& c) {
  const fs::path out = c.out.empty() ? fs::path("config.json") : fs::path(c.out);
  auto cfg = PipelineConfig::defaults();
  if (c.seed) cfg.seed = *c.seed;
  dump_json(out, config_to_json(cfg));
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

struct SynthArgs {
  std::string scenario = "expanding_disk";
  std::optional<int> frames, width, height, burn_duration;
  std::optional<double> noise, speed;
  double rate_hz = 1.0;
};

int cmd_synth(const Common& c, const SynthArgs& a) {
  require_out(c, "synth output directory");
  const auto kind = parse_scenario_kind(a.scenario);
  if (!kind) throw Error(ErrorKind::config, "unknown scenario: " + a.scenario);
  auto s = Scenario::defaults(*kind);
  if (a.frames) s.frames = *a.frames;
  if (a.width) s.width = *a.width;
  if (a.height) s.height = *a.height;
  if (a.burn_duration) s.burn_duration = *a.burn_duration;
  if (a.noise) s.noise = *a.noise;
  if (a.speed) s.speed = *a.speed;
  if (c.seed) s.seed = *c.seed;
  if (!(a.rate_hz > 0.0)) throw Error(ErrorKind::config, "--rate must be positive");
  s.validate();

  const fs::path out(c.out);
  write_synth(render(s, a.rate_hz), out);

  auto cfg = PipelineConfig::defaults();
  cfg.frames_dir = "frames";
  cfg.sequence.frame_rate_hz = cfg.sequence.sample_rate_hz = a.rate_hz;
  if (*kind == ScenarioKind::advected_plume) {
    cfg.track_class = "smoke";
    cfg.axis_deg = 90.0;
  }
  dump_json(out / "config.json", config_to_json(cfg));
  std::cout << "scenario " << to_string(*kind) << ": " << s.frames << " frames " << s.width << "x" << s.height
            << " written to " << out.string() << "\n";
  return 0;
}

struct CalibrateArgs {
  std::size_t frame = 0;
  std::string cls;
};

int cmd_calibrate(const Common& c, const CalibrateArgs& a) {
  require_out(c, "preview PNG path");
  const auto cfg = load(c);
  auto meta = cfg.sequence;
  meta.sample_rate_hz = meta.frame_rate_hz;
  const auto files = list_frame_files(cfg.resolve(cfg.frames_dir));
  if (a.frame >= files.size())
    throw Error(ErrorKind::bounds, "frame " + std::to_string(a.frame) + " out of range (" +
                                       std::to_string(files.size()) + " frames)");
  const auto frames = load_sequence(cfg.resolve(cfg.frames_dir), meta);
  const auto& frame = frames.at(a.frame);
  const std::string cls = a.cls.empty() ? cfg.track_class : a.cls;
  const fs::path out(c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  std::size_t count = 0;
  if (cfg.modality == Modality::infrared) {
    const auto label = parse_thermal_label(cls);
    if (!label) throw Error(ErrorKind::config, "unknown thermal class: " + cls);
    calibrate_preview(frame, cfg.thermal, *label, out);
    count = segment_infrared(frame, cfg.thermal, *label).count();
  } else {
    const std::optional<ClassThresholds>* th = nullptr;
    if (cls == "burning") th = &cfg.burning;
    else if (cls == "burned_cooling") th = &cfg.burned_cooling;
    else if (cls == "smoke") th = &cfg.smoke;
    else throw Error(ErrorKind::config, "unknown visual class: " + cls);
    if (!*th) throw Error(ErrorKind::config, "class " + cls + " has no thresholds");
    auto mask = segment_visual(frame, (*th)->primary);
    if ((*th)->refine) mask = mask_and(mask, segment_visual(frame, *(*th)->refine));
    write_png(out, render_overlay(frame, mask));
    count = mask.count();
  }
  std::cout << "frame " << a.frame << " class " << cls << ": " << count << " of " << frame.width() * frame.height()
            << " pixels selected; preview " << out.string() << "\n";
  return 0;
}

int cmd_run(const Common& c) {
  require_out(c, "bundle directory");
  const auto cfg = load(c);
  const auto out = run_pipeline(cfg, c.out, c.threads);
  std::cout << out.report << "bundle: " << fs::path(c.out).string() << "\n";
  return 0;
}

int cmd_advise(const Common& c, const std::vector<double>& rates) {
  const auto cfg = load(c);
  Warnings w;
  const auto rep = advise(cfg, rates, c.threads, &w);
  if (!c.out.empty()) dump_json(c.out, sampling_report_to_json(rep));
  std::printf("%8s %12s %12s %10s %s\n", "f_hz", "u_max", "u_obs", "ratio", "");
  for (const auto& r : rep.rows)
    std::printf("%8g %12.4g %12.4g %10.4g %s\n", r.f_hz, r.u_max, r.u_obs, r.ratio,
                r.degenerate ? "degenerate" : (r.saturated ? "saturated" : ""));
  if (rep.recommended_f_hz) std::printf("recommended f_s: %g Hz\n", *rep.recommended_f_hz);
  else std::printf("recommended f_s: none\n");
  for (const auto& m : w.items) std::cout << "warning: " << m << "\n";
  return 0;
}

struct FitArgs {
  std::string input;
  std::string family = "exponential";
  std::string method = "mcmc";
  int bins = 0;
  std::string plot;
  bool semilog = false;
};

int cmd_fit(const Common& c, const FitArgs& a) {
  const auto family = parse_family(a.family);
  if (!family) throw Error(ErrorKind::config, "unknown family: " + a.family);
  const auto method = parse_method(a.method);
  if (!method) throw Error(ErrorKind::config, "unknown method: " + a.method);
  if (a.bins < 0) throw Error(ErrorKind::config, "--bins must be >= 0");
  auto cfg = load(c);
  const auto values = read_values(a.input);
  Warnings w;
  FitResult fit;
  if (*method == FitMethod::mcmc) {
    McmcConfig mc;
    for (const auto& f : cfg.fits)
      if (f.family == *family) mc = f.mcmc;
    mc.seed = cfg.seed;
    fit = mcmc_fit(values, *family, mc, a.bins, c.threads, &w);
  } else {
    fit = moment_match(values, *family, a.bins, &w);
  }
  if (!c.out.empty()) dump_json(c.out, fit_to_json(fit));
  if (!a.plot.empty()) {
    PlotOptions po;
    po.bins = a.bins;
    po.semilog = a.semilog;
    write_fit_plot(a.plot, values, [fit](double x) { return fit_pdf(fit, x); }, po);
  }
  std::cout << "n=" << values.size() << " " << to_string(fit.family) << " " << to_string(fit.method)
            << " lambda=" << fit.lambda;
  if (fit.family == Family::erlang) std::cout << " k=" << fit.k;
  if (fit.lambda_interval) std::cout << " 95% [" << fit.lambda_interval->lo << ", " << fit.lambda_interval->hi << "]";
  if (fit.nrmse) std::cout << " nrmse=" << *fit.nrmse;
  if (fit.diagnostics) std::cout << " rhat=" << fit.diagnostics->rhat;
  std::cout << "\n";
  for (const auto& m : w.items) std::cout << "warning: " << m << "\n";
  return 0;
}

struct InpaintArgs {
  std::string input;
  std::string mask;
  std::string mode;
};

int cmd_inpaint(const Common& c, const InpaintArgs& a) {
  require_out(c, "output PNG path");
  auto cfg = load(c);
  const auto frame = Frame::visual(read_png(a.input));
  BinaryMask mask;
  if (!a.mask.empty()) {
    mask = mask_from_png(a.mask);
  } else if (cfg.auto_occlusion) {
    mask = auto_occlusion(frame, *cfg.auto_occlusion);
  } else {
    throw Error(ErrorKind::config, "inpaint needs --mask or inpainting.auto_thresholds in the config");
  }
  auto opts = cfg.inpainting;
  if (!a.mode.empty()) {
    const auto m = parse_inpaint_mode(a.mode);
    if (!m) throw Error(ErrorKind::config, "unknown inpaint mode: " + a.mode);
    opts.mode = *m;
  }
  opts.validate();
  Warnings w;
  const auto filled = inpaint(frame, mask, opts, &w);
  const fs::path out(c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  RgbImage img(filled.width(), filled.height());
  img.pixels.assign(filled.rgb().begin(), filled.rgb().end());
  write_png(out, img);
  std::cout << "filled " << mask.count() << " pixels (" << to_string(opts.mode) << "); wrote " << out.string()
            << "\n";
  for (const auto& m : w.items) std::cout << "warning: " << m << "\n";
  return 0;
}

int cmd_export(const Common& c, const std::string& bundle_dir) {
  require_out(c, "destination bundle directory");
  const auto bundle = read_bundle(bundle_dir);
  write_bundle(bundle, c.out);
  std::cout << "copied bundle " << bundle_dir << " to " << c.out << "\n";
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool config = true, bool threads = true) {
  if (config) sub->add_option("--config", c.config, "pipeline config JSON");
  sub->add_option("--out", c.out, "output path");
  sub->add_option("--seed", c.seed, "random seed override");
  if (threads) sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fire front detection, tracking and velocity statistics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common c;

  auto* config = app.add_subcommand("config", "config file utilities");
  config->require_subcommand(1);
  auto* init = config->add_subcommand("init", "write the default config");
  add_common(init, c, false, false);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "render a synthetic scenario with ground truth");
  add_common(synth, c, false, false);
  synth->add_option("--scenario", sa.scenario, "expanding_disk|translating_front|ring_fire|two_flanks|advected_plume");
  synth->add_option("--frames", sa.frames);
  synth->add_option("--width", sa.width);
  synth->add_option("--height", sa.height);
  synth->add_option("--noise", sa.noise, "salt noise probability per pixel");
  synth->add_option("--speed", sa.speed, "front speed, px/frame");
  synth->add_option("--burn-duration", sa.burn_duration, "frames a pixel burns, 0 = forever");
  synth->add_option("--rate", sa.rate_hz, "frame rate written to the generated config, Hz");

  CalibrateArgs ca;
  auto* calibrate = app.add_subcommand("calibrate", "write a threshold overlay preview for one frame");
  add_common(calibrate, c, true, false);
  calibrate->add_option("--frame", ca.frame, "native frame index");
  calibrate->add_option("--class", ca.cls, "class to preview (default: track class)");

  auto* run = app.add_subcommand("run", "run the full pipeline and write a dataset bundle");
  add_common(run, c);

  std::vector<double> rates;
  auto* adv = app.add_subcommand("advise", "report measurable vs observed speed per sampling rate");
  add_common(adv, c);
  adv->add_option("--rates", rates, "candidate sampling rates, Hz")->required()->delimiter(',');

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "fit a distribution to values from a CSV file");
  add_common(fit, c);
  fit->add_option("--input", fa.input, "CSV of values")->required();
  fit->add_option("--family", fa.family, "exponential|erlang");
  fit->add_option("--method", fa.method, "moment_matching|mcmc");
  fit->add_option("--bins", fa.bins, "histogram bins for nrmse, 0 = automatic");
  fit->add_option("--plot", fa.plot, "write a histogram + pdf PNG");
  fit->add_flag("--semilog", fa.semilog, "log density axis in the plot");

  InpaintArgs ia;
  auto* inp = app.add_subcommand("inpaint", "fill occluded pixels of one PNG frame");
  add_common(inp, c, true, false);
  inp->add_option("--input", ia.input, "frame PNG")->required();
  inp->add_option("--mask", ia.mask, "occlusion PNG, nonzero = fill");
  inp->add_option("--mode", ia.mode, "transport|harmonic");

  std::string bundle_dir;
  auto* exp = app.add_subcommand("export", "validate a bundle and rewrite it to --out");
  add_common(exp, c, false, false);
  exp->add_option("--bundle", bundle_dir, "existing bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*init) return cmd_config_init(c);
    if (*synth) return cmd_synth(c, sa);
    if (*calibrate) return cmd_calibrate(c, ca);
    if (*run) return cmd_run(c);
    if (*adv) return cmd_advise(c, rates);
    if (*fit) return cmd_fit(c, fa);
    if (*inp) return cmd_inpaint(c, ia);
    if (*exp) return cmd_export(c, bundle_dir);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return exit_code(ErrorCategory::io);
  }
  return 2;
}
