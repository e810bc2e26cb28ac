#include "fdv/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "fdv/parallel.hpp"

namespace fdv {
namespace {

// mt19937_64 output is fully specified by the standard; the distributions
// are not, so uniform and normal variates are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Sufficient {
  double n = 0, sum = 0, sum_log = 0;
};

// Log-likelihood up to terms that do not depend on lambda, plus the k terms.
double loglik(const Sufficient& s, int k, double log_lambda) {
  return s.n * k * log_lambda - std::exp(log_lambda) * s.sum + (k - 1) * s.sum_log -
         s.n * std::lgamma(k);
}

struct ChainOut {
  std::vector<double> theta;  // retained log(lambda)
  double mean_loglik = 0.0;
  double acceptance = 0.0;
  double step = 0.0;
};

ChainOut run_chain(const Sufficient& s, int k, double theta0, double step0, const McmcConfig& cfg,
                   std::uint64_t seed) {
  Rng rng(seed);
  const int burn = cfg.iterations - cfg.retained();
  double theta = theta0, ll = loglik(s, k, theta), step = step0;
  ChainOut out;
  out.theta.reserve(cfg.retained());
  int batch_accept = 0, batch_n = 0;
  long accepted = 0;
  double ll_sum = 0.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const double prop = theta + step * rng.normal();
    const double ll_prop = loglik(s, k, prop);
    const bool accept = std::log(rng.uniform_open()) < ll_prop - ll;
    if (accept) {
      theta = prop;
      ll = ll_prop;
    }
    if (it < burn) {
      batch_accept += accept;
      if (++batch_n == 50) {
        step *= std::exp(2.0 * (static_cast<double>(batch_accept) / batch_n - cfg.target_acceptance));
        batch_accept = batch_n = 0;
      }
    } else {
      out.theta.push_back(theta);
      accepted += accept;
      ll_sum += ll;
    }
  }
  out.mean_loglik = ll_sum / cfg.retained();
  out.acceptance = static_cast<double>(accepted) / cfg.retained();
  out.step = step;
  return out;
}

}  // namespace

void McmcConfig::validate(int min_post_burn_in) const {
  if (chains < 2) throw Error(ErrorKind::config, "mcmc needs at least 2 chains");
  if (iterations < 2) throw Error(ErrorKind::config, "mcmc needs at least 2 iterations");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw Error(ErrorKind::config, "burn_in_fraction must be in [0, 1)");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw Error(ErrorKind::config, "target_acceptance must be in (0, 1)");
  if (k_max < 1) throw Error(ErrorKind::config, "k_max must be >= 1");
  if (!(rhat_threshold > 1.0)) throw Error(ErrorKind::config, "rhat_threshold must exceed 1");
  if (retained() < std::max(min_post_burn_in, 2))
    throw Error(ErrorKind::config, "mcmc needs at least " + std::to_string(min_post_burn_in) +
                                       " post burn-in iterations per chain");
}

int McmcConfig::retained() const {
  return iterations - static_cast<int>(std::floor(iterations * burn_in_fraction));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  std::vector<std::span<const double>> halves;
  for (const auto& c : chains) {
    const std::size_t h = c.size() / 2;
    halves.emplace_back(c.data(), h);
    halves.emplace_back(c.data() + (c.size() - h), h);
  }
  const std::size_t m = halves.size(), n = halves.front().size();
  if (m < 2 || n < 2) throw Error(ErrorKind::config, "split-rhat needs longer chains");
  std::vector<double> means(m), vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = std::accumulate(halves[j].begin(), halves[j].end(), 0.0) / n;
    double ss = 0.0;
    for (double v : halves[j]) ss += (v - means[j]) * (v - means[j]);
    vars[j] = ss / (n - 1);
  }
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= static_cast<double>(n) / (m - 1);
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / m;
  if (!(w > 0.0)) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

FitResult mcmc_fit(std::span<const double> values, Family family, const McmcConfig& config,
                   int bins, unsigned threads, Warnings* warnings) {
  config.validate();
  check_fit_input(values, family);
  Sufficient s;
  s.n = static_cast<double>(values.size());
  for (double v : values) {
    s.sum += v;
    if (family == Family::erlang) s.sum_log += std::log(v);
  }
  if (family == Family::erlang)
    for (double v : values)
      if (!(v > 0.0)) throw Error(ErrorKind::domain, "erlang likelihood needs positive samples");

  const int k_count = family == Family::exponential ? 1 : config.k_max;
  const std::size_t jobs = static_cast<std::size_t>(k_count) * config.chains;
  std::vector<ChainOut> outs(jobs);
  parallel_for(jobs, threads, [&](std::size_t job) {
    const int k = static_cast<int>(job / config.chains) + 1;
    const int c = static_cast<int>(job % config.chains);
    const std::uint64_t seed = splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(k) << 32 | c));
    // Over-dispersed starts around the maximum-likelihood value.
    Rng init(splitmix64(seed));
    const double mle = std::log(k * s.n / s.sum);
    const double sd = 1.0 / std::sqrt(k * s.n);
    outs[job] = run_chain(s, k, mle + 3.0 * sd * init.normal(), 2.4 * sd, config, seed);
  });

  McmcDiagnostics diag;
  int best_k = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_count; ++k) {
    double ll = 0.0;
    for (int c = 0; c < config.chains; ++c) ll += outs[(k - 1) * config.chains + c].mean_loglik;
    ll /= config.chains;
    if (family == Family::erlang) diag.mean_loglik_by_k.push_back(ll);
    if (ll > best_ll) {
      best_ll = ll;
      best_k = k;
    }
  }

  std::vector<std::vector<double>> chains;
  for (int c = 0; c < config.chains; ++c) {
    auto& o = outs[(best_k - 1) * config.chains + c];
    diag.acceptance.push_back(o.acceptance);
    diag.step.push_back(o.step);
    chains.push_back(std::move(o.theta));
  }
  diag.rhat = split_rhat(chains);
  if (!(diag.rhat <= config.rhat_threshold)) {
    std::ostringstream msg;
    msg << "mcmc did not converge: split-rhat " << diag.rhat << " > " << config.rhat_threshold
        << " (k=" << best_k << ", acceptance";
    for (double a : diag.acceptance) msg << ' ' << a;
    msg << ')';
    throw Error(ErrorKind::convergence, msg.str());
  }

  std::vector<double> lambdas;
  lambdas.reserve(chains.size() * chains.front().size());
  for (const auto& c : chains)
    for (double th : c) lambdas.push_back(std::exp(th));
  diag.draws = lambdas.size();

  FitResult r;
  r.family = family;
  r.method = FitMethod::mcmc;
  r.k = best_k;
  r.lambda = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / lambdas.size();
  std::sort(lambdas.begin(), lambdas.end());
  r.lambda_interval = Interval{quantile_sorted(lambdas, 0.025), quantile_sorted(lambdas, 0.975)};
  r.seed = config.seed;
  r.diagnostics = std::move(diag);
  try {
    r.nrmse = nrmse(values, r, bins);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::normalization) throw;
    if (warnings) warnings->add(std::string("nrmse not computed: ") + e.what());
  }
  return r;
}

}  // namespace fdv
