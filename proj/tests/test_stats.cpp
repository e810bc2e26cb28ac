#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fdv/error.hpp"
#include "fdv/mcmc.hpp"
#include "fdv/sampling.hpp"
#include "fdv/stats.hpp"

namespace fdv {
namespace {

std::vector<double> exponential_sample(std::uint64_t seed, double lambda, int n) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> d(lambda);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<double> erlang_sample(std::uint64_t seed, int k, double lambda, int n) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> d(lambda);
  std::vector<double> v(n, 0.0);
  for (auto& x : v)
    for (int i = 0; i < k; ++i) x += d(rng);
  return v;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

TEST(Summarize, Basics) {
  const std::vector<double> v{1, 2, 3};
  const auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.sd, 1.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 3.0);
  EXPECT_EQ(s.n, 3u);
  EXPECT_THROW(summarize(std::vector<double>{}), Error);
  EXPECT_THROW(summarize(std::vector<double>{4.0}), Error);
}

TEST(Summarize, PlumeInclination) {
  EXPECT_NEAR(inclination_deg(7.60e-2, 2.23e-2), 16.3, 0.1);
  EXPECT_NEAR(inclination_deg(1.0, 1.0), 45.0, 1e-12);
}

TEST(MomentMatch, ExponentialSpotValue) {
  const std::vector<double> v{4.68, 6.68};
  const auto r = moment_match(v, Family::exponential);
  EXPECT_NEAR(r.lambda, 0.176, 0.0005);
  EXPECT_FALSE(r.lambda_interval);
}

TEST(MomentMatch, ExponentialEqualsMle) {
  const auto v = exponential_sample(1, 0.7, 5000);
  EXPECT_EQ(moment_match(v, Family::exponential).lambda, 1.0 / mean_of(v));
}

TEST(MomentMatch, ConstantExponential) {
  Warnings w;
  const std::vector<double> v(20, 4.0);
  const auto r = moment_match(v, Family::exponential, 0, &w);
  EXPECT_EQ(r.lambda, 0.25);
  EXPECT_FALSE(r.nrmse);
  EXPECT_FALSE(w.empty());
}

TEST(MomentMatch, ErlangBurnTimeValues) {
  const double a = 11.1 / std::sqrt(2.0);
  const std::vector<double> v{18.5 - a, 18.5 + a};
  const auto r = moment_match(v, Family::erlang);
  EXPECT_EQ(r.k, 3);
  EXPECT_NEAR(r.lambda, 3.0 / 18.5, 1e-12);
  EXPECT_NEAR(r.lambda, 0.162, 0.0005);
}

TEST(MomentMatch, DomainErrors) {
  try {
    moment_match(std::vector<double>{1.0, 0.0, 2.0}, Family::exponential);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
  try {
    moment_match(std::vector<double>(5, 3.0), Family::erlang);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

TEST(Pdf, ErlangShapeOneIsExponential) {
  for (double lambda : {0.01, 0.25, 1.0, 7.5})
    for (double x = 0.0; x < 50.0; x += 0.37) EXPECT_NEAR(erlang_pdf(1, lambda, x), exponential_pdf(lambda, x), 1e-12);
}

TEST(Pdf, ErlangIntegratesToOne) {
  for (int k : {2, 3, 7}) {
    double s = 0.0;
    const double h = 1e-3;
    for (double x = h / 2; x < 200.0; x += h) s += erlang_pdf(k, 0.5, x) * h;
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

TEST(Nrmse, ZeroForHistogramShapedDensity) {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(i / 100.0);
  for (int j = 1; j <= 300; ++j) v.push_back(1.0 + j / 300.0);
  const auto step = [](double x) { return x < 1.0 ? 0.25 : 0.75; };
  EXPECT_NEAR(nrmse(v, step, 2), 0.0, 1e-12);
}

TEST(Nrmse, OrderInvariantAndLocallyOptimal) {
  auto v = exponential_sample(3, 0.25, 10000);
  const auto fit = moment_match(v, Family::exponential);
  const double base = nrmse(v, fit);
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(4));
  EXPECT_EQ(nrmse(shuffled, fit), base);
  for (double factor : {0.9, 1.1, 2.0}) {
    auto p = fit;
    p.lambda *= factor;
    EXPECT_GT(nrmse(v, p), base) << factor;
  }
}

TEST(Nrmse, Errors) {
  EXPECT_THROW(nrmse(std::vector<double>{1, 2, 3}, [](double) { return 1.0; }, 1), Error);
  try {
    nrmse(std::vector<double>{2, 2, 2}, [](double) { return 1.0; }, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::normalization);
  }
}

TEST(Bins, FreedmanDiaconisFloor) {
  EXPECT_EQ(default_bins(std::vector<double>{1, 2, 3}), 10);
  const auto v = exponential_sample(5, 1.0, 100000);
  const int b = default_bins(v);
  EXPECT_GT(b, 10);
  EXPECT_LE(b, 1000);
}

TEST(Mcmc, ExponentialPosterior) {
  const auto v = exponential_sample(7, 0.25, 10000);
  const auto r = mcmc_fit(v, Family::exponential);
  const double mle = 1.0 / mean_of(v);
  EXPECT_LT(std::abs(r.lambda - mle) / mle, 0.05);
  ASSERT_TRUE(r.lambda_interval);
  EXPECT_LT(r.lambda_interval->lo, r.lambda);
  EXPECT_GT(r.lambda_interval->hi, r.lambda);
  ASSERT_TRUE(r.diagnostics);
  EXPECT_LE(r.diagnostics->rhat, 1.05);
  EXPECT_EQ(r.diagnostics->draws, 40000u);
  for (double a : r.diagnostics->acceptance) EXPECT_NEAR(a, 0.35, 0.1);
  EXPECT_TRUE(r.nrmse);
  EXPECT_EQ(r.method, FitMethod::mcmc);
}

TEST(Mcmc, LargeSampleApproachesMle) {
  const auto v = exponential_sample(8, 0.25, 100000);
  const auto r = mcmc_fit(v, Family::exponential);
  const double mle = 1.0 / mean_of(v);
  EXPECT_LT(std::abs(r.lambda - mle) / mle, 0.01);
}

TEST(Mcmc, IntervalCoverageOverRepetitions) {
  int covered = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto v = exponential_sample(100 + rep, 0.25, 10000);
    McmcConfig cfg;
    cfg.seed = 1000 + rep;
    const auto r = mcmc_fit(v, Family::exponential, cfg);
    covered += r.lambda_interval->lo <= 0.25 && 0.25 <= r.lambda_interval->hi;
  }
  // Binomial(10, 0.95): P(X <= 7) is about 1%.
  EXPECT_GE(covered, 8);
}

TEST(Mcmc, ErlangRecoversShape) {
  const auto v = erlang_sample(9, 3, 0.162, 10000);
  const auto r = mcmc_fit(v, Family::erlang);
  EXPECT_EQ(r.k, 3);
  EXPECT_NEAR(r.lambda, 0.162, 0.162 * 0.05);
  EXPECT_EQ(r.diagnostics->mean_loglik_by_k.size(), 50u);
}

TEST(Mcmc, ReproducibleAndThreadIndependent) {
  const auto v = erlang_sample(10, 2, 1.0, 2000);
  McmcConfig cfg;
  cfg.k_max = 6;
  cfg.seed = 77;
  const auto a = mcmc_fit(v, Family::erlang, cfg, 0, 1);
  const auto b = mcmc_fit(v, Family::erlang, cfg, 0, 4);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.lambda_interval->lo, b.lambda_interval->lo);
  cfg.seed = 78;
  EXPECT_NE(mcmc_fit(v, Family::erlang, cfg).lambda, a.lambda);
}

TEST(Mcmc, DegenerateInputs) {
  Warnings w;
  const std::vector<double> constant(50, 2.0);
  const auto r = mcmc_fit(constant, Family::exponential, {}, 0, 1, &w);
  EXPECT_FALSE(r.nrmse);
  EXPECT_FALSE(w.empty());
  EXPECT_THROW(mcmc_fit(constant, Family::erlang), Error);
}

TEST(Mcmc, ConfigValidation) {
  McmcConfig cfg;
  cfg.iterations = 10000;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.chains = 1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.burn_in_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_NO_THROW(McmcConfig{}.validate());
}

TEST(Mcmc, SplitRhatDetectsDisagreement) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::vector<double>> same(4), apart(4);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 2000; ++i) {
      const double z = n(rng);
      same[c].push_back(z);
      apart[c].push_back(z + c);
    }
  EXPECT_LT(split_rhat(same), 1.01);
  EXPECT_GT(split_rhat(apart), 1.5);
}

TEST(Sampling, TableValues) {
  SequenceMeta meta;
  meta.frame_rate_hz = 30;
  meta.fov_px = 253;
  meta.resolution_px_per_cm = 1.27;
  const std::vector<double> rates{1, 2, 5};
  const std::vector<double> obs{33.3, 90.5, 226.2};
  const auto rep = sampling_advisor(meta, rates, obs);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_NEAR(rep.rows[0].u_max, 99.6, 0.05);
  EXPECT_NEAR(rep.rows[1].u_max, 199.2, 0.05);
  EXPECT_NEAR(rep.rows[2].u_max, 498.0, 0.05);
  EXPECT_NEAR(rep.rows[0].ratio, 0.33, 0.005);
  EXPECT_NEAR(rep.rows[1].ratio, 0.45, 0.005);
  EXPECT_FALSE(rep.rows[0].saturated);
  EXPECT_TRUE(rep.rows[1].saturated);
  ASSERT_TRUE(rep.recommended_f_hz);
  EXPECT_EQ(*rep.recommended_f_hz, 2.0);
}

TEST(Sampling, LinearInRateAndFovInverseInRes) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int i = 0; i < 200; ++i) {
    const double f = u(rng), fov = u(rng) * 100, res = u(rng);
    const double base = nyquist_u_max(f, fov, res);
    EXPECT_NEAR(nyquist_u_max(2 * f, fov, res), 2 * base, 1e-9 * base);
    EXPECT_NEAR(nyquist_u_max(f, 3 * fov, res), 3 * base, 1e-9 * base);
    EXPECT_NEAR(nyquist_u_max(f, fov, 2 * res), base / 2, 1e-9 * base);
  }
}

TEST(Sampling, DegenerateAndSingleRate) {
  SequenceMeta meta;
  meta.fov_px = 100;
  Warnings w;
  const std::vector<double> rates{0, 3};
  const std::vector<double> obs{0, 10};
  const auto rep = sampling_advisor(meta, rates, obs, &w);
  EXPECT_TRUE(rep.rows[0].degenerate);
  EXPECT_EQ(rep.rows[0].u_max, 0.0);
  EXPECT_FALSE(rep.recommended_f_hz);
  EXPECT_FALSE(w.empty());
  const std::vector<double> one{5}, one_obs{1};
  EXPECT_FALSE(sampling_advisor(meta, one, one_obs).recommended_f_hz);
  const std::vector<double> bad{7}, bad_obs{1};
  EXPECT_THROW(sampling_advisor(meta, bad, bad_obs), Error);
}

}  // namespace
}  // namespace fdv
