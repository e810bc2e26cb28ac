#include "fdv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace fdv {

std::string_view to_string(Family f) {
  return f == Family::exponential ? "exponential" : "erlang";
}

std::string_view to_string(FitMethod m) {
  return m == FitMethod::moment_matching ? "moment_matching" : "mcmc";
}

std::optional<Family> parse_family(std::string_view text) {
  if (text == "exponential") return Family::exponential;
  if (text == "erlang") return Family::erlang;
  return std::nullopt;
}

std::optional<FitMethod> parse_method(std::string_view text) {
  if (text == "moment_matching") return FitMethod::moment_matching;
  if (text == "mcmc") return FitMethod::mcmc;
  return std::nullopt;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "summary of an empty sample");
  if (values.size() < 2)
    throw Error(ErrorKind::degenerate, "standard deviation needs at least 2 values");
  Summary s;
  s.n = values.size();
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (s.n - 1));
  return s;
}

double inclination_deg(double mean_horizontal, double mean_vertical) {
  return std::atan2(mean_vertical, mean_horizontal) * 180.0 / std::numbers::pi;
}

double exponential_pdf(double lambda, double x) {
  return x < 0.0 ? 0.0 : lambda * std::exp(-lambda * x);
}

double erlang_pdf(int k, double lambda, double x) {
  if (x < 0.0) return 0.0;
  if (k == 1) return exponential_pdf(lambda, x);
  if (x == 0.0) return 0.0;
  return std::exp(k * std::log(lambda) + (k - 1) * std::log(x) - lambda * x - std::lgamma(k));
}

double fit_pdf(const FitResult& fit, double x) {
  return fit.family == Family::exponential ? exponential_pdf(fit.lambda, x)
                                           : erlang_pdf(fit.k, fit.lambda, x);
}

Histogram density_histogram(std::span<const double> values, int bins) {
  if (bins < 2) throw Error(ErrorKind::config, "histogram needs at least 2 bins");
  if (values.empty()) throw Error(ErrorKind::empty_input, "histogram of an empty sample");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!(*mx > *mn)) throw Error(ErrorKind::normalization, "sample has zero range");
  Histogram h;
  h.lo = *mn;
  h.width = (*mx - *mn) / bins;
  h.density.assign(bins, 0.0);
  for (double v : values) {
    auto i = static_cast<long>((v - h.lo) / h.width);
    i = std::clamp<long>(i, 0, bins - 1);
    h.density[i] += 1.0;
  }
  for (auto& d : h.density) d /= values.size() * h.width;
  return h;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::empty_input, "quantile of an empty sample");
  const double pos = q * (sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - i;
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

int default_bins(std::span<const double> values) {
  constexpr int kMin = 10, kMax = 1000;
  if (values.size() < 2) return kMin;
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  const double range = s.back() - s.front();
  if (!(iqr > 0.0) || !(range > 0.0)) return kMin;
  const double h = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
  const double bins = std::ceil(range / h);
  return static_cast<int>(std::clamp(bins, double{kMin}, double{kMax}));
}

double nrmse(std::span<const double> values, const std::function<double(double)>& pdf, int bins) {
  if (bins <= 0) bins = default_bins(values);
  const auto h = density_histogram(values, bins);
  const auto [dmin, dmax] = std::minmax_element(h.density.begin(), h.density.end());
  const double range = *dmax - *dmin;
  if (!(range > 0.0)) throw Error(ErrorKind::normalization, "histogram has zero density range");
  double ss = 0.0;
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    const double e = pdf(h.center(i)) - h.density[i];
    ss += e * e;
  }
  return std::sqrt(ss / h.density.size()) / range;
}

double nrmse(std::span<const double> values, const FitResult& fit, int bins) {
  return nrmse(values, [&](double x) { return fit_pdf(fit, x); }, bins);
}

void check_fit_input(std::span<const double> values, Family family) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "cannot fit an empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "sample contains non-finite values");
  if (family == Family::exponential) {
    for (double v : values)
      if (!(v > 0.0)) throw Error(ErrorKind::domain, "exponential fit needs positive samples");
    return;
  }
  for (double v : values)
    if (v < 0.0) throw Error(ErrorKind::domain, "erlang fit needs nonnegative samples");
  if (values.size() < 2) throw Error(ErrorKind::degenerate, "erlang fit needs at least 2 samples");
  const auto s = summarize(values);
  if (!(s.mean > 0.0)) throw Error(ErrorKind::domain, "erlang fit needs a positive mean");
  if (!(s.sd > 0.0)) throw Error(ErrorKind::degenerate, "erlang fit needs nonzero variance");
}

FitResult moment_match(std::span<const double> values, Family family, int bins, Warnings* warnings) {
  check_fit_input(values, family);
  FitResult r;
  r.family = family;
  r.method = FitMethod::moment_matching;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (family == Family::exponential) {
    r.lambda = 1.0 / mean;
  } else {
    const auto s = summarize(values);
    r.k = std::max(1, static_cast<int>(std::lround(s.mean * s.mean / (s.sd * s.sd))));
    r.lambda = r.k / s.mean;
  }
  try {
    r.nrmse = nrmse(values, r, bins);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::normalization) throw;
    if (warnings) warnings->add(std::string("nrmse not computed: ") + e.what());
  }
  return r;
}

}  // namespace fdv
