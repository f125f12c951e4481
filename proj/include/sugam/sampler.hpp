#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sugam/model.hpp"
#include "sugam/types.hpp"

namespace sugam {

struct SamplerOptions {
  Index samples = 1000;  // retained draws, pooled over chains
  Index chains = 2;
  Index thin = 10;
  std::uint64_t seed = 1;
  Index threads = 0;  // 0: one thread per chain up to hardware limit
};

struct PosteriorSamples {
  std::vector<std::string> names;
  Matrix draws;  // samples x parameters, chain 0 rows first
  std::uint64_t seed = 0;
  Index chains = 1;
  Index thin = 1;
  Index burn_in = 0;  // discarded iterations per chain
};

struct Diagnostics {
  std::vector<std::string> names;
  Vector ess;         // per parameter, summed over chains
  Vector split_rhat;  // split-chain convergence ratio
  Vector lag1;        // lag-1 autocorrelation of retained draws
  std::vector<std::string> block_names;
  Vector acceptance;  // post-burn-in acceptance rate per block
  bool diverged = false;
  std::vector<std::string> warnings;
};

struct SampleResult {
  PosteriorSamples samples;
  Diagnostics diagnostics;
};

// Adaptive blockwise random-walk Metropolis within Gibbs. Blocks: the fixed
// block (intercept + coefficients), each iid and RW1 effect block, and one
// scalar block per log tau. Proposal scales adapt toward 20-40% acceptance
// during the first half of each chain (the burn-in), Welford component
// scales precondition the steps, and adaptation freezes at burn-in end.
// Given the same seed and inputs the draws are byte-identical, independent
// of thread count.
SampleResult sample_posterior(const DesignMatrix& design, const IndexVector& labels,
                              const SamplerOptions& options);

struct OracleResult {
  Vector mean;
  Vector sd;
};

// Dense-grid integration of the same log_posterior the sampler uses, for
// models with at most two free parameters and no random terms. 401 nodes
// per axis on [-10, 10]; errors out if more than 1e-6 of the mass sits on
// the grid boundary.
OracleResult quadrature_oracle(const DesignMatrix& design, const IndexVector& labels);

struct MarginalSummary {
  std::vector<std::string> names;
  Vector mean;
  Vector sd;
  Vector q025;
  Vector q975;
};

MarginalSummary summarize_marginals(const PosteriorSamples& samples);

enum class Significance { kPositive, kNegative, kNotSignificant };

std::string significance_name(Significance s);

// Positive if the 2.5% quantile is above zero, negative if the 97.5% is
// below zero, otherwise not significant.
Significance classify_significance(const PosteriorSamples& samples,
                                   const std::string& term);

// posterior.csv: header = parameter names, one row per draw.
std::string serialize_posterior_csv(const PosteriorSamples& samples);
PosteriorSamples parse_posterior_csv(std::string_view text, const std::string& name);
PosteriorSamples read_posterior_csv(const std::string& path);

std::string serialize_diagnostics(const Diagnostics& diag);

}  // namespace sugam
