#include "fdv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fdv/error.hpp"
#include "fdv/image_io.hpp"

namespace fdv {
namespace {

constexpr int kNever = std::numeric_limits<int>::max();

// Radius of the g >= 1/2 core of the plume blob.
double plume_radius(const Scenario& s) { return s.plume_sigma * std::sqrt(2.0 * std::log(2.0)); }

// The plume starts in the lower-left corner by default.
double center_x(const Scenario& s) {
  if (s.cx) return *s.cx;
  return s.kind == ScenarioKind::advected_plume ? plume_radius(s) + 2.0 : (s.width - 1) / 2.0;
}

double center_y(const Scenario& s) {
  if (s.cy) return *s.cy;
  return s.kind == ScenarioKind::advected_plume ? s.height - 1 - plume_radius(s) - 2.0 : (s.height - 1) / 2.0;
}

// Left flank leading edge at row y, frame t; the right flank mirrors it.
double flank_lead(const Scenario& s, double y, int t) {
  const double half = (s.height - 1) / 2.0;
  const double rel = half > 0 ? (y - half) / half : 0.0;
  const double start = (s.width - 1) / 2.0 - s.gap / 2.0 - s.speed * (s.frames - 1) - s.bow;
  return start + s.speed * t + s.bow * (1.0 - rel * rel);
}

// Whether the front has reached pixel (x, y) by frame t.
bool reached(const Scenario& s, int x, int y, int t) {
  switch (s.kind) {
    case ScenarioKind::expanding_disk:
    case ScenarioKind::ring_fire: {
      const double r = s.r0 + s.speed * t;
      const double dx = x - center_x(s), dy = y - center_y(s);
      return dx * dx + dy * dy <= r * r;
    }
    case ScenarioKind::translating_front:
      return x <= s.x0 + s.speed * t;
    case ScenarioKind::two_flanks: {
      const double lead = flank_lead(s, y, t);
      return x <= lead || (s.width - 1 - x) <= lead;
    }
    case ScenarioKind::advected_plume:
      return false;
  }
  return false;
}

double flank_normal_speed(const Scenario& s, double y) {
  const double half = (s.height - 1) / 2.0;
  const double slope = half > 0 ? -2.0 * s.bow * (y - half) / (half * half) : 0.0;
  return s.speed / std::sqrt(1.0 + slope * slope);
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::expanding_disk: return "expanding_disk";
    case ScenarioKind::translating_front: return "translating_front";
    case ScenarioKind::ring_fire: return "ring_fire";
    case ScenarioKind::two_flanks: return "two_flanks";
    case ScenarioKind::advected_plume: return "advected_plume";
  }
  return "";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
  for (auto k : {ScenarioKind::expanding_disk, ScenarioKind::translating_front, ScenarioKind::ring_fire,
                 ScenarioKind::two_flanks, ScenarioKind::advected_plume})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

Scenario Scenario::defaults(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::expanding_disk:
      break;
    case ScenarioKind::translating_front:
      s.burn_duration = 6;
      break;
    case ScenarioKind::ring_fire:
      s.burn_duration = 8;
      s.frames = 30;
      s.width = s.height = 200;
      s.r0 = 5.0;
      break;
    case ScenarioKind::two_flanks:
      s.width = 268;
      s.height = 163;
      s.burn_duration = 10;
      s.speed = 1.5;
      break;
    case ScenarioKind::advected_plume:
      s.width = s.height = 480;
      s.frames = 16;
      break;
  }
  return s;
}

void Scenario::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::scenario, m); };
  if (width < 8 || height < 8) fail("scenario frames must be at least 8x8");
  if (frames < 1) fail("scenario needs at least one frame");
  if (!(speed >= 0.0) || !std::isfinite(speed)) fail("speed must be >= 0");
  if (burn_duration < 0) fail("burn_duration must be >= 0");
  if (!(noise >= 0.0 && noise <= 1.0)) fail("noise must be in [0, 1]");
  for (const auto& r : occlusions)
    if (r.empty() || r.x < 0 || r.y < 0 || r.right() > width || r.bottom() > height)
      fail("occlusion rectangle outside the frame");
  const double last = frames - 1;
  switch (kind) {
    case ScenarioKind::expanding_disk:
    case ScenarioKind::ring_fire: {
      if (!(r0 >= 0.0)) fail("r0 must be >= 0");
      const double r = r0 + speed * last, x = center_x(*this), y = center_y(*this);
      if (x - r < 0 || y - r < 0 || x + r > width - 1 || y + r > height - 1)
        fail("disk leaves the frame before the last frame");
      break;
    }
    case ScenarioKind::translating_front:
      if (x0 < 0 || x0 + speed * last > width - 1) fail("front leaves the frame before the last frame");
      break;
    case ScenarioKind::two_flanks:
      if (!(gap > 0.0) || !(bow >= 0.0)) fail("gap must be > 0 and bow >= 0");
      if (flank_lead(*this, 0, 0) < 0) fail("flanks do not fit: reduce speed, gap, bow or frames");
      break;
    case ScenarioKind::advected_plume: {
      if (!(plume_sigma > 0.0)) fail("plume_sigma must be positive");
      const double r = plume_radius(*this);
      for (double t : {0.0, last}) {
        const double x = center_x(*this) + plume_u * t, y = center_y(*this) - plume_w * t;
        if (x - r < 0 || y - r < 0 || x + r > width - 1 || y + r > height - 1)
          fail("plume leaves the frame");
      }
      break;
    }
  }
}

SynthOutput render(const Scenario& s, double sample_rate_hz) {
  s.validate();
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorKind::scenario, "sample rate must be positive");
  const int w = s.width, h = s.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  std::vector<int> ignition(n, kNever);
  if (s.kind != ScenarioKind::advected_plume)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int t = 0; t < s.frames; ++t)
          if (reached(s, x, y, t)) {
            ignition[static_cast<std::size_t>(y) * w + x] = t;
            break;
          }

  SynthOutput out;
  auto& truth = out.truth;
  truth.burn_frames.assign(n, 0);
  std::mt19937_64 rng(s.seed);

  for (int t = 0; t < s.frames; ++t) {
    BinaryMask burning(w, h), burned(w, h), smoke(w, h);
    std::vector<Rgb> px(n, palette::background);
    for (std::size_t i = 0; i < n; ++i) {
      const int ti = ignition[i];
      if (ti == kNever || t < ti) continue;
      if (s.burn_duration == 0 || t < ti + s.burn_duration) {
        burning.bits()[i] = 1;
        px[i] = palette::fire;
        ++truth.burn_frames[i];
      } else {
        burned.bits()[i] = 1;
        px[i] = palette::burned;
      }
    }
    if (s.kind == ScenarioKind::advected_plume) {
      const double bx = center_x(s) + s.plume_u * t, by = center_y(s) - s.plume_w * t;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double d2 = (x - bx) * (x - bx) + (y - by) * (y - by);
          const double g = std::exp(-d2 / (2.0 * s.plume_sigma * s.plume_sigma));
          if (g < 0.5) continue;
          const auto level = static_cast<std::uint8_t>(
              std::lround(palette::smoke_lo + (palette::smoke_hi - palette::smoke_lo) * (2.0 * g - 1.0)));
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          px[i] = {level, level, level};
          smoke.bits()[i] = 1;
        }
    }
    for (const auto& r : s.occlusions)
      for (int y = r.y; y < r.bottom(); ++y)
        for (int x = r.x; x < r.right(); ++x) px[static_cast<std::size_t>(y) * w + x] = palette::trees;
    if (s.noise > 0.0) {
      for (auto& p : px)
        if ((rng() >> 11) * 0x1.0p-53 < s.noise) p = palette::fire;
    }

    const BinaryMask& tracked = s.kind == ScenarioKind::advected_plume ? smoke : burning;
    PointSet boundary;
    std::vector<double> speed;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!tracked.at(x, y)) continue;
        const bool edge = x == 0 || y == 0 || x == w - 1 || y == h - 1 || !tracked.at(x - 1, y) ||
                          !tracked.at(x + 1, y) || !tracked.at(x, y - 1) || !tracked.at(x, y + 1);
        if (!edge) continue;
        boundary.push_back({x, y});
        switch (s.kind) {
          case ScenarioKind::two_flanks:
            speed.push_back(flank_normal_speed(s, y));
            break;
          case ScenarioKind::advected_plume: {
            const double bx = center_x(s) + s.plume_u * t, by = center_y(s) - s.plume_w * t;
            const double nx = x - bx, ny = y - by, norm = std::hypot(nx, ny);
            speed.push_back(norm > 0 ? std::abs(s.plume_u * nx - s.plume_w * ny) / norm : 0.0);
            break;
          }
          default:
            speed.push_back(s.speed);
        }
      }
    truth.boundary.push_back(std::move(boundary));
    truth.normal_speed.push_back(std::move(speed));
    truth.burning.push_back(std::move(burning));
    truth.burned.push_back(std::move(burned));
    truth.smoke.push_back(std::move(smoke));
    out.frames.push_back(Frame::visual(w, h, std::move(px), static_cast<std::size_t>(t), t / sample_rate_hz));
  }
  return out;
}

void write_synth(const SynthOutput& output, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "frames", ec);
  fs::create_directories(out_dir / "truth", ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + out_dir.string() + ": " + ec.message());
  char name[64];
  for (std::size_t t = 0; t < output.frames.size(); ++t) {
    std::snprintf(name, sizeof name, "frame_%06zu.png", t);
    write_png(out_dir / "frames" / name, output.frames[t].to_rgb_image());
    std::ostringstream csv;
    csv << "x,y,normal_speed\n";
    const auto& b = output.truth.boundary[t];
    for (std::size_t i = 0; i < b.size(); ++i)
      csv << b[i].x << ',' << b[i].y << ',' << format_double(output.truth.normal_speed[t][i]) << '\n';
    std::snprintf(name, sizeof name, "boundary_t%06zu.csv", t);
    write_text_file(out_dir / "truth" / name, csv.str());
  }
  if (!output.frames.empty()) {
    ScalarGrid grid{output.frames[0].width(), output.frames[0].height(), {}};
    grid.values.assign(output.truth.burn_frames.begin(), output.truth.burn_frames.end());
    write_csv_grid(out_dir / "truth" / "burn_frames.csv", grid);
  }
}

}  // namespace fdv
