#include "fdv/export.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"

namespace fdv {
namespace fs = std::filesystem;
namespace {

std::string step_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%06zu.csv", t);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

template <typename T>
T parse_num(std::string_view s, const fs::path& path) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(ErrorKind::load, path.string() + ": bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> fields(std::string_view line, std::size_t n, const fs::path& path) {
  auto f = split(line, ',');
  if (f.size() != n) throw Error(ErrorKind::load, path.string() + ": expected " + std::to_string(n) + " fields");
  return f;
}

}  // namespace

LabelGrid compose_labels(const ClassMasks& masks) {
  const BinaryMask* ref = nullptr;
  for (const auto* m : {&masks.burning, &masks.burned_cooling, &masks.smoke}) {
    if (!m->has_value()) continue;
    if (ref && !ref->same_shape(**m))
      throw Error(ErrorKind::dimension_mismatch, "class masks differ in size");
    if (!ref) ref = &**m;
  }
  if (!ref) throw Error(ErrorKind::empty_input, "no class masks to compose");
  LabelGrid g{ref->width(), ref->height(), std::vector<std::uint8_t>(ref->size(), 0)};
  // Lowest precedence first; later writes win.
  const std::pair<const std::optional<BinaryMask>*, PixelClass> order[] = {
      {&masks.smoke, PixelClass::smoke},
      {&masks.burned_cooling, PixelClass::burned_cooling},
      {&masks.burning, PixelClass::burning}};
  for (const auto& [m, code] : order) {
    if (!m->has_value()) continue;
    for (std::size_t i = 0; i < g.labels.size(); ++i)
      if ((**m)[i]) g.labels[i] = static_cast<std::uint8_t>(code);
  }
  return g;
}

std::vector<double> burn_time_per_pixel(const std::vector<LabelGrid>& labels, double sample_rate_hz) {
  if (labels.empty()) throw Error(ErrorKind::empty_input, "burn time needs at least one frame");
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorKind::config, "sample rate must be positive");
  const auto n = labels[0].labels.size();
  // Longest run of consecutive burning frames per pixel.
  std::vector<int> run(n, 0), count(n, 0);
  for (const auto& g : labels) {
    if (g.labels.size() != n) throw Error(ErrorKind::dimension_mismatch, "label grids differ in size");
    for (std::size_t i = 0; i < n; ++i) {
      run[i] = g.labels[i] == static_cast<std::uint8_t>(PixelClass::burning) ? run[i] + 1 : 0;
      count[i] = std::max(count[i], run[i]);
    }
  }
  std::vector<double> out;
  for (int c : count)
    if (c > 0) out.push_back(c / sample_rate_hz);
  return out;
}

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["family"] = std::string(to_string(fit.family));
  j["method"] = std::string(to_string(fit.method));
  j["lambda"] = fit.lambda;
  if (fit.family == Family::erlang) j["k"] = fit.k;
  j["lambda_interval"] = fit.lambda_interval ? nlohmann::json::array({fit.lambda_interval->lo, fit.lambda_interval->hi})
                                             : nlohmann::json(nullptr);
  j["nrmse"] = fit.nrmse ? nlohmann::json(*fit.nrmse) : nlohmann::json(nullptr);
  if (fit.seed) j["seed"] = *fit.seed;
  if (fit.diagnostics) {
    const auto& d = *fit.diagnostics;
    j["diagnostics"] = {{"rhat", d.rhat}, {"acceptance", d.acceptance}, {"step", d.step}, {"draws", d.draws}};
    if (!d.mean_loglik_by_k.empty()) j["diagnostics"]["mean_loglik_by_k"] = d.mean_loglik_by_k;
  }
  return j;
}

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a64(config.dump())); }

fs::path write_bundle(const DatasetBundle& bundle, const fs::path& out_dir) {
  if (bundle.labels && bundle.boundaries && bundle.labels->size() != bundle.boundaries->size())
    throw Error(ErrorKind::config, "label and boundary timestep counts differ");
  std::error_code ec;
  const fs::path target = fs::absolute(out_dir);
  if (fs::exists(target, ec)) {
    if (!fs::is_directory(target, ec))
      throw Error(ErrorKind::io, target.string() + " exists and is not a directory");
    if (!fs::is_empty(target, ec) && !fs::exists(target / "manifest.json", ec))
      throw Error(ErrorKind::io, "refusing to replace " + target.string() + ": not empty and no manifest.json");
  }
  fs::create_directories(target.parent_path(), ec);
  const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".staging");
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + staging.string() + ": " + ec.message());

  try {
    if (bundle.labels) {
      fs::create_directories(staging / "labels");
      for (std::size_t t = 0; t < bundle.labels->size(); ++t) {
        const auto& g = (*bundle.labels)[t];
        std::string s;
        s.reserve(g.labels.size() * 2);
        for (int y = 0; y < g.height; ++y) {
          for (int x = 0; x < g.width; ++x) {
            if (x) s += ',';
            s += static_cast<char>('0' + g.at(x, y));
          }
          s += '\n';
        }
        write_text_file(staging / "labels" / step_name(t), s);
      }
    }
    if (bundle.boundaries) {
      fs::create_directories(staging / "boundaries");
      for (std::size_t t = 0; t < bundle.boundaries->size(); ++t) {
        std::ostringstream s;
        s << "region_id,x,y\n";
        const auto& regions = (*bundle.boundaries)[t];
        for (std::size_t r = 0; r < regions.size(); ++r)
          for (const auto& p : regions[r]) s << r << ',' << p.x << ',' << p.y << '\n';
        write_text_file(staging / "boundaries" / step_name(t), s.str());
      }
    }
    if (bundle.velocity) {
      std::string s = "t,region,sx,sy,vx,vy,longitudinal,transverse\n";
      for (const auto& v : *bundle.velocity) {
        s += std::to_string(v.t) + ',' + std::to_string(v.region) + ',' + std::to_string(v.src.x) + ',' +
             std::to_string(v.src.y) + ',' + format_double(v.vx) + ',' + format_double(v.vy) + ',' +
             format_double(v.longitudinal) + ',' + format_double(v.transverse) + '\n';
      }
      write_text_file(staging / "velocity.csv", s);
    }
    if (bundle.fits) write_text_file(staging / "fits.json", bundle.fits->dump(2) + "\n");
    write_text_file(staging / "manifest.json", bundle.manifest.dump(2) + "\n");
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }

  fs::remove_all(target, ec);
  if (ec) throw Error(ErrorKind::io, "cannot remove " + target.string() + ": " + ec.message());
  fs::rename(staging, target, ec);
  if (ec) {
    fs::remove_all(staging, ec);
    throw Error(ErrorKind::io, "cannot move bundle into " + target.string());
  }
  return target / "manifest.json";
}

DatasetBundle read_bundle(const fs::path& dir) {
  DatasetBundle b;
  const auto manifest_path = dir / "manifest.json";
  try {
    b.manifest = nlohmann::json::parse(read_text_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::load, manifest_path.string() + ": " + e.what());
  }
  std::error_code ec;
  auto steps = [&](const fs::path& sub) {
    std::vector<fs::path> files;
    for (std::size_t t = 0;; ++t) {
      const auto p = dir / sub / step_name(t);
      if (!fs::exists(p, ec)) break;
      files.push_back(p);
    }
    return files;
  };
  if (fs::is_directory(dir / "labels", ec)) {
    b.labels.emplace();
    for (const auto& p : steps("labels")) {
      LabelGrid g;
      const auto text = read_text_file(p);
      for (auto line : lines_of(text)) {
        const auto f = split(line, ',');
        if (g.height == 0) g.width = static_cast<int>(f.size());
        if (static_cast<int>(f.size()) != g.width) throw Error(ErrorKind::load, p.string() + ": ragged rows");
        for (auto v : f) {
          const int code = parse_num<int>(v, p);
          if (code < 0 || code > 3) throw Error(ErrorKind::load, p.string() + ": label out of range");
          g.labels.push_back(static_cast<std::uint8_t>(code));
        }
        ++g.height;
      }
      b.labels->push_back(std::move(g));
    }
  }
  if (fs::is_directory(dir / "boundaries", ec)) {
    b.boundaries.emplace();
    for (const auto& p : steps("boundaries")) {
      const auto text = read_text_file(p);
      const auto lines = lines_of(text);
      std::vector<PointSet> regions;
      for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields(lines[i], 3, p);
        const auto r = parse_num<std::size_t>(f[0], p);
        if (r >= regions.size()) regions.resize(r + 1);
        regions[r].push_back({parse_num<int>(f[1], p), parse_num<int>(f[2], p)});
      }
      b.boundaries->push_back(std::move(regions));
    }
  }
  if (fs::exists(dir / "velocity.csv", ec)) {
    const auto p = dir / "velocity.csv";
    const auto text = read_text_file(p);
    const auto lines = lines_of(text);
    b.velocity.emplace();
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = fields(lines[i], 8, p);
      VelocityRecord v;
      v.t = parse_num<std::size_t>(f[0], p);
      v.region = parse_num<int>(f[1], p);
      v.src = {parse_num<int>(f[2], p), parse_num<int>(f[3], p)};
      v.vx = parse_num<double>(f[4], p);
      v.vy = parse_num<double>(f[5], p);
      v.longitudinal = parse_num<double>(f[6], p);
      v.transverse = parse_num<double>(f[7], p);
      b.velocity->push_back(v);
    }
  }
  if (fs::exists(dir / "fits.json", ec)) {
    try {
      b.fits = nlohmann::json::parse(read_text_file(dir / "fits.json"));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::load, (dir / "fits.json").string() + ": " + e.what());
    }
  }
  return b;
}

}  // namespace fdv
