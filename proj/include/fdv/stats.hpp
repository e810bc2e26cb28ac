#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdv/error.hpp"

namespace fdv {

enum class Family { exponential, erlang };
enum class FitMethod { moment_matching, mcmc };

std::string_view to_string(Family f);
std::string_view to_string(FitMethod m);
std::optional<Family> parse_family(std::string_view text);
std::optional<FitMethod> parse_method(std::string_view text);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct McmcDiagnostics {
  double rhat = 0.0;                     // split-R-hat of log(lambda), selected k
  std::vector<double> acceptance;        // post burn-in, per chain
  std::vector<double> step;              // adapted proposal sd, per chain
  std::vector<double> mean_loglik_by_k;  // Erlang sweep; index 0 is k = 1
  std::size_t draws = 0;                 // pooled post burn-in draws
};

struct FitResult {
  Family family = Family::exponential;
  FitMethod method = FitMethod::moment_matching;
  double lambda = 0.0;  // rate, 1/unit
  int k = 1;            // Erlang shape; 1 for exponential
  std::optional<Interval> lambda_interval;  // central 95%, MCMC only
  std::optional<double> nrmse;              // absent when the histogram is degenerate
  std::optional<std::uint64_t> seed;        // MCMC only
  std::optional<McmcDiagnostics> diagnostics;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

// Throws empty_input for no values and degenerate for a single value (the
// sample standard deviation is undefined).
Summary summarize(std::span<const double> values);

// Angle of (mean_h, mean_v) above the horizontal, degrees.
double inclination_deg(double mean_horizontal, double mean_vertical);

double exponential_pdf(double lambda, double x);
double erlang_pdf(int k, double lambda, double x);
double fit_pdf(const FitResult& fit, double x);

struct Histogram {
  double lo = 0.0;
  double width = 0.0;
  std::vector<double> density;  // count / (n * width)

  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width; }
};

// Equal-width bins spanning [min, max]; the last bin is closed. Throws
// normalization error when max == min.
Histogram density_histogram(std::span<const double> values, int bins);

// Freedman-Diaconis bin count, clamped to [10, 1000].
int default_bins(std::span<const double> values);

// Type-7 (linear interpolation) quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

// RMSE between pdf at bin centers and histogram densities, divided by the
// histogram's density range. bins <= 0 selects default_bins.
double nrmse(std::span<const double> values, const std::function<double(double)>& pdf, int bins = 0);
double nrmse(std::span<const double> values, const FitResult& fit, int bins = 0);

// Exponential: lambda = 1/mean. Erlang: k = max(1, round(mean^2/var)),
// lambda = k/mean. nrmse left empty (with a warning) when not computable.
FitResult moment_match(std::span<const double> values, Family family, int bins = 0,
                       Warnings* warnings = nullptr);

// Domain checks shared by both estimators.
void check_fit_input(std::span<const double> values, Family family);

}  // namespace fdv
