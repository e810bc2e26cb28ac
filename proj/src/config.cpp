#include "fdv/config.hpp"

#include <cmath>
#include <set>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"

namespace fdv {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::config, where + ": " + what);
}

// Object reader that rejects keys it was never asked about.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) bad(where_, "expected an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) bad(where_, "unknown key '" + k + "'");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) bad(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(path(key), "must be finite");
    return d;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) bad(path(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) bad(path(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) bad(path(key), "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename T, std::size_t N>
std::array<T, N> array_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != N) bad(where, "expected an array of " + std::to_string(N) + " numbers");
  std::array<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) bad(where, "expected numbers");
    if constexpr (std::is_integral_v<T>) {
      if (!v[i].is_number_integer()) bad(where, "expected integers");
    }
    out[i] = v[i].get<T>();
  }
  return out;
}

ColorThresholds thresholds_at(const json& j, const std::string& where) {
  Section s(j, where);
  ColorThresholds t;
  if (s.has("rgb_lo")) t.rgb_lo = array_of<int, 3>(s.raw("rgb_lo"), s.path("rgb_lo"));
  if (s.has("rgb_hi")) t.rgb_hi = array_of<int, 3>(s.raw("rgb_hi"), s.path("rgb_hi"));
  if (s.has("hsv_lo")) t.hsv_lo = array_of<double, 3>(s.raw("hsv_lo"), s.path("hsv_lo"));
  if (s.has("hsv_hi")) t.hsv_hi = array_of<double, 3>(s.raw("hsv_hi"), s.path("hsv_hi"));
  try {
    t.validate();
  } catch (const Error& e) {
    bad(where, e.what());
  }
  return t;
}

ClassThresholds class_at(const json& j, const std::string& where) {
  ClassThresholds c;
  json primary = j;
  if (primary.is_object() && primary.contains("refine")) {
    if (!primary["refine"].is_null()) c.refine = thresholds_at(primary["refine"], where + ".refine");
    primary.erase("refine");
  }
  c.primary = thresholds_at(primary, where);
  return c;
}

json class_to_json(const ClassThresholds& c) {
  auto j = thresholds_to_json(c.primary);
  j["refine"] = c.refine ? thresholds_to_json(*c.refine) : json(nullptr);
  return j;
}

ClassThresholds make_class(std::array<int, 3> lo, std::array<int, 3> hi, std::array<double, 3> hlo,
                           std::array<double, 3> hhi) {
  ClassThresholds c;
  c.primary.rgb_lo = lo;
  c.primary.rgb_hi = hi;
  c.primary.hsv_lo = hlo;
  c.primary.hsv_hi = hhi;
  return c;
}

}  // namespace

std::string_view to_string(FitQuantity q) {
  switch (q) {
    case FitQuantity::positive_longitudinal: return "L+";
    case FitQuantity::speed: return "speed";
    case FitQuantity::burn_time: return "burn_time";
  }
  return "";
}

std::optional<FitQuantity> parse_fit_quantity(std::string_view text) {
  for (auto q : {FitQuantity::positive_longitudinal, FitQuantity::speed, FitQuantity::burn_time})
    if (to_string(q) == text) return q;
  return std::nullopt;
}

json thresholds_to_json(const ColorThresholds& t) {
  return {{"rgb_lo", t.rgb_lo}, {"rgb_hi", t.rgb_hi}, {"hsv_lo", t.hsv_lo}, {"hsv_hi", t.hsv_hi}};
}

ColorThresholds thresholds_from_json(const json& j) { return thresholds_at(j, "thresholds"); }

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  c.burning = make_class({200, 60, 0}, {255, 200, 80}, {0, 0.6, 0.7}, {60, 1, 1});
  c.burned_cooling = make_class({30, 30, 25}, {90, 80, 70}, {0, 0.1, 0.1}, {60, 0.5, 0.4});
  c.smoke = make_class({120, 120, 120}, {200, 200, 200}, {0, 0, 0.45}, {360, 0.15, 0.85});
  c.thermal = ThermalBands({{ThermalLabel::preheated, 60, 300},
                            {ThermalLabel::burned_cooling, 300, 500},
                            {ThermalLabel::burning, 500, 2000}});
  FitSpec lp;
  lp.quantity = FitQuantity::positive_longitudinal;
  lp.family = Family::exponential;
  c.fits.push_back(lp);
  return c;
}

void PipelineConfig::validate() const {
  sequence.validate();
  if (fov_px && *fov_px <= 0) bad("sequence.fov_px", "must be a positive integer");
  if (modality == Modality::visual) {
    const std::optional<ClassThresholds>* cls = nullptr;
    if (track_class == "burning") cls = &burning;
    else if (track_class == "burned_cooling") cls = &burned_cooling;
    else if (track_class == "smoke") cls = &smoke;
    else bad("segmentation.track_class", "must be burning, burned_cooling or smoke for visual input");
    if (!cls->has_value()) bad("segmentation.track_class", "class '" + track_class + "' has no thresholds");
    for (const auto* c : {&burning, &burned_cooling, &smoke})
      if (c->has_value()) {
        (*c)->primary.validate();
        if ((*c)->refine) (*c)->refine->validate();
      }
  } else {
    const auto label = parse_thermal_label(track_class);
    if (!label) bad("segmentation.track_class", "unknown thermal label '" + track_class + "'");
    if (!thermal.find(*label)) bad("segmentation.track_class", "no thermal band for '" + track_class + "'");
  }
  if (!(eps > 0.0)) bad("clustering.eps", "must be positive");
  if (min_pts < 1) bad("clustering.min_pts", "must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad("boundary.alpha", "must be >= 0");
  if (max_dist_px && !(*max_dist_px > 0.0)) bad("tracking.max_dist_px", "must be positive");
  if (!std::isfinite(axis_deg)) bad("tracking.axis_deg", "must be finite");
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    const std::string where = "fits[" + std::to_string(i) + "]";
    if (f.methods.empty()) bad(where + ".methods", "must not be empty");
    if (f.bins < 0 || f.bins == 1) bad(where + ".bins", "must be 0 (automatic) or >= 2");
    if ((f.quantity != FitQuantity::burn_time) && !tracking_enabled)
      bad(where + ".quantity", "velocity fits need tracking enabled");
    try {
      f.mcmc.validate();
    } catch (const Error& e) {
      bad(where + ".mcmc", e.what());
    }
  }
  inpainting.validate();
  if (inpainting_enabled) {
    if (!occlusion_mask && !auto_occlusion)
      bad("inpainting", "needs input.occlusion_mask or inpainting.auto_thresholds");
    if (modality == Modality::infrared && !occlusion_mask)
      bad("inpainting.auto_thresholds", "automatic occlusion needs visual input");
  }
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  PipelineConfig c = PipelineConfig::defaults();
  c.base_dir = base_dir;
  Section root(j, "config");
  if (root.has("input")) {
    Section s(root.raw("input"), "input");
    c.frames_dir = s.string("frames_dir", c.frames_dir.string());
    if (s.has("occlusion_mask")) c.occlusion_mask = s.string("occlusion_mask", "");
  }
  if (root.has("sequence")) {
    Section s(root.raw("sequence"), "sequence");
    c.sequence.frame_rate_hz = s.number("frame_rate_hz", c.sequence.frame_rate_hz);
    c.sequence.sample_rate_hz = s.number("sample_rate_hz", c.sequence.sample_rate_hz);
    c.sequence.resolution_px_per_cm = s.number("resolution_px_per_cm", c.sequence.resolution_px_per_cm);
    if (s.has("fov_px")) c.fov_px = static_cast<int>(s.integer("fov_px", 0));
    if (s.has("roi")) {
      Section r(s.raw("roi"), "sequence.roi");
      c.sequence.roi = Rect{static_cast<int>(r.integer("x", 0)), static_cast<int>(r.integer("y", 0)),
                            static_cast<int>(r.integer("width", 0)), static_cast<int>(r.integer("height", 0))};
    }
  }
  if (root.has("segmentation")) {
    Section s(root.raw("segmentation"), "segmentation");
    const auto mod = s.string("modality", "visual");
    if (mod == "visual") c.modality = Modality::visual;
    else if (mod == "infrared") c.modality = Modality::infrared;
    else bad("segmentation.modality", "must be visual or infrared");
    c.track_class = s.string("track_class", c.track_class);
    if (s.has("visual")) {
      Section v(s.raw("visual"), "segmentation.visual");
      c.burning.reset();
      c.burned_cooling.reset();
      c.smoke.reset();
      if (v.has("burning")) c.burning = class_at(v.raw("burning"), "segmentation.visual.burning");
      if (v.has("burned_cooling"))
        c.burned_cooling = class_at(v.raw("burned_cooling"), "segmentation.visual.burned_cooling");
      if (v.has("smoke")) c.smoke = class_at(v.raw("smoke"), "segmentation.visual.smoke");
    }
    if (s.has("thermal")) {
      const auto& arr = s.raw("thermal");
      if (!arr.is_array()) bad("segmentation.thermal", "expected an array of bands");
      std::vector<ThermalBand> bands;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "segmentation.thermal[" + std::to_string(i) + "]";
        Section b(arr[i], where);
        const auto label = parse_thermal_label(b.string("label", ""));
        if (!label) bad(where + ".label", "must be burning, burned_cooling or preheated");
        bands.push_back({*label, b.number("t_lo", 0), b.number("t_hi", 0)});
      }
      try {
        c.thermal = ThermalBands(std::move(bands));
      } catch (const Error& e) {
        bad("segmentation.thermal", e.what());
      }
    }
  }
  if (root.has("cleaning")) {
    Section s(root.raw("cleaning"), "cleaning");
    c.cleaning_enabled = s.boolean("enabled", true);
    if (s.has("levels")) {
      const auto& arr = s.raw("levels");
      if (!arr.is_array()) bad("cleaning.levels", "expected an array");
      std::vector<CleaningLevel> levels;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section l(arr[i], "cleaning.levels[" + std::to_string(i) + "]");
        levels.push_back({static_cast<int>(l.integer("radius_px", 0)), static_cast<int>(l.integer("min_neighbors", 0))});
      }
      try {
        c.cleaning = CleaningSchedule(std::move(levels));
      } catch (const Error& e) {
        bad("cleaning.levels", e.what());
      }
    }
  }
  if (root.has("clustering")) {
    Section s(root.raw("clustering"), "clustering");
    c.clustering_enabled = s.boolean("enabled", true);
    c.eps = s.number("eps", c.eps);
    c.min_pts = static_cast<int>(s.integer("min_pts", c.min_pts));
  }
  if (root.has("boundary")) {
    Section s(root.raw("boundary"), "boundary");
    c.alpha = s.number("alpha", c.alpha);
  }
  if (root.has("tracking")) {
    Section s(root.raw("tracking"), "tracking");
    c.tracking_enabled = s.boolean("enabled", true);
    if (s.has("max_dist_px")) c.max_dist_px = s.number("max_dist_px", 0);
    c.axis_deg = s.number("axis_deg", c.axis_deg);
  }
  if (root.has("fits")) {
    const auto& arr = root.raw("fits");
    if (!arr.is_array()) bad("fits", "expected an array");
    c.fits.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "fits[" + std::to_string(i) + "]";
      Section s(arr[i], where);
      FitSpec f;
      const auto q = parse_fit_quantity(s.string("quantity", "L+"));
      if (!q) bad(where + ".quantity", "must be L+, speed or burn_time");
      f.quantity = *q;
      const auto fam = parse_family(s.string("family", "exponential"));
      if (!fam) bad(where + ".family", "must be exponential or erlang");
      f.family = *fam;
      if (s.has("methods")) {
        const auto& m = s.raw("methods");
        if (!m.is_array()) bad(where + ".methods", "expected an array");
        f.methods.clear();
        for (const auto& e : m) {
          const auto meth = e.is_string() ? parse_method(e.get<std::string>()) : std::nullopt;
          if (!meth) bad(where + ".methods", "entries must be moment_matching or mcmc");
          f.methods.push_back(*meth);
        }
      }
      f.bins = static_cast<int>(s.integer("bins", 0));
      if (s.has("mcmc")) {
        Section m(s.raw("mcmc"), where + ".mcmc");
        f.mcmc.chains = static_cast<int>(m.integer("chains", f.mcmc.chains));
        f.mcmc.iterations = static_cast<int>(m.integer("iterations", f.mcmc.iterations));
        f.mcmc.burn_in_fraction = m.number("burn_in_fraction", f.mcmc.burn_in_fraction);
        f.mcmc.target_acceptance = m.number("target_acceptance", f.mcmc.target_acceptance);
        f.mcmc.k_max = static_cast<int>(m.integer("k_max", f.mcmc.k_max));
        f.mcmc.rhat_threshold = m.number("rhat_threshold", f.mcmc.rhat_threshold);
      }
      c.fits.push_back(f);
    }
  }
  if (root.has("inpainting")) {
    Section s(root.raw("inpainting"), "inpainting");
    c.inpainting_enabled = s.boolean("enabled", false);
    const auto mode = parse_inpaint_mode(s.string("mode", "transport"));
    if (!mode) bad("inpainting.mode", "must be transport or harmonic");
    c.inpainting.mode = *mode;
    c.inpainting.dt = s.number("dt", c.inpainting.dt);
    c.inpainting.tol = s.number("tol", c.inpainting.tol);
    c.inpainting.max_iters = static_cast<int>(s.integer("max_iters", c.inpainting.max_iters));
    if (s.has("auto_thresholds")) c.auto_occlusion = thresholds_at(s.raw("auto_thresholds"), "inpainting.auto_thresholds");
  }
  if (root.has("export")) {
    Section s(root.raw("export"), "export");
    c.export_labels = s.boolean("labels", true);
    c.export_boundaries = s.boolean("boundaries", true);
    c.export_velocity = s.boolean("velocity", true);
    c.export_fits = s.boolean("fits", true);
    c.export_plots = s.boolean("plots", false);
    c.plot_semilog = s.boolean("semilog", true);
  }
  if (root.has("seed")) {
    const auto& v = root.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      bad("config.seed", "must be a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  try {
    c.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["input"] = {{"frames_dir", c.frames_dir.string()},
                {"occlusion_mask", c.occlusion_mask ? json(c.occlusion_mask->string()) : json(nullptr)}};
  j["sequence"] = {{"frame_rate_hz", c.sequence.frame_rate_hz},
                   {"sample_rate_hz", c.sequence.sample_rate_hz},
                   {"resolution_px_per_cm", c.sequence.resolution_px_per_cm},
                   {"fov_px", c.fov_px ? json(*c.fov_px) : json(nullptr)},
                   {"roi", c.sequence.roi ? json{{"x", c.sequence.roi->x},
                                                  {"y", c.sequence.roi->y},
                                                  {"width", c.sequence.roi->width},
                                                  {"height", c.sequence.roi->height}}
                                          : json(nullptr)}};
  json visual = json::object();
  if (c.burning) visual["burning"] = class_to_json(*c.burning);
  if (c.burned_cooling) visual["burned_cooling"] = class_to_json(*c.burned_cooling);
  if (c.smoke) visual["smoke"] = class_to_json(*c.smoke);
  json thermal = json::array();
  for (const auto& b : c.thermal.bands())
    thermal.push_back({{"label", std::string(to_string(b.label))}, {"t_lo", b.t_lo}, {"t_hi", b.t_hi}});
  j["segmentation"] = {{"modality", c.modality == Modality::visual ? "visual" : "infrared"},
                       {"track_class", c.track_class},
                       {"visual", visual},
                       {"thermal", thermal}};
  json levels = json::array();
  for (const auto& l : c.cleaning.levels())
    levels.push_back({{"radius_px", l.radius_px}, {"min_neighbors", l.min_neighbors}});
  j["cleaning"] = {{"enabled", c.cleaning_enabled}, {"levels", levels}};
  j["clustering"] = {{"enabled", c.clustering_enabled}, {"eps", c.eps}, {"min_pts", c.min_pts}};
  j["boundary"] = {{"alpha", c.alpha}};
  j["tracking"] = {{"enabled", c.tracking_enabled},
                   {"max_dist_px", c.max_dist_px ? json(*c.max_dist_px) : json(nullptr)},
                   {"axis_deg", c.axis_deg}};
  json fits = json::array();
  for (const auto& f : c.fits) {
    json methods = json::array();
    for (auto m : f.methods) methods.push_back(std::string(to_string(m)));
    fits.push_back({{"quantity", std::string(to_string(f.quantity))},
                    {"family", std::string(to_string(f.family))},
                    {"methods", methods},
                    {"bins", f.bins},
                    {"mcmc", {{"chains", f.mcmc.chains},
                              {"iterations", f.mcmc.iterations},
                              {"burn_in_fraction", f.mcmc.burn_in_fraction},
                              {"target_acceptance", f.mcmc.target_acceptance},
                              {"k_max", f.mcmc.k_max},
                              {"rhat_threshold", f.mcmc.rhat_threshold}}}});
  }
  j["fits"] = fits;
  j["inpainting"] = {{"enabled", c.inpainting_enabled},
                     {"mode", std::string(to_string(c.inpainting.mode))},
                     {"dt", c.inpainting.dt},
                     {"tol", c.inpainting.tol},
                     {"max_iters", c.inpainting.max_iters},
                     {"auto_thresholds", c.auto_occlusion ? thresholds_to_json(*c.auto_occlusion) : json(nullptr)}};
  j["export"] = {{"labels", c.export_labels}, {"boundaries", c.export_boundaries},
                 {"velocity", c.export_velocity}, {"fits", c.export_fits},
                 {"plots", c.export_plots}, {"semilog", c.plot_semilog}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace fdv
