#pragma once

#include <cstdint>
#include <span>

#include "fdv/stats.hpp"

namespace fdv {

struct McmcConfig {
  int chains = 4;
  int iterations = 20000;  // per chain, including burn-in
  double burn_in_fraction = 0.5;
  double target_acceptance = 0.35;
  int k_max = 50;  // Erlang shapes 1..k_max are swept
  double rhat_threshold = 1.05;
  std::uint64_t seed = 42;

  // Requires >= 2 chains, iterations >= 2 and burn_in_fraction in [0, 1).
  // min_post_burn_in guards the default 10^4 retained draws per chain.
  void validate(int min_post_burn_in = 10000) const;
  int retained() const;
};

// Deterministic 64-bit mixing; used to derive per-chain seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Split-R-hat over chains split in halves.
double split_rhat(const std::vector<std::vector<double>>& chains);

// Random-walk Metropolis on log(lambda) with a flat prior on log(lambda).
// Erlang shapes are swept and the shape with the highest mean posterior
// log-likelihood is kept. Point estimate is the posterior mean of lambda;
// the interval spans the 2.5 and 97.5 percentiles. Throws convergence when
// split-R-hat exceeds the threshold.
FitResult mcmc_fit(std::span<const double> values, Family family, const McmcConfig& config = {},
                   int bins = 0, unsigned threads = 1, Warnings* warnings = nullptr);

}  // namespace fdv
