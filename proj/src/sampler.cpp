#include "sugam/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "sugam/io.hpp"
#include "sugam/rng.hpp"
#include "sugam/stats.hpp"

namespace sugam {

namespace {

constexpr Index kAdaptEvery = 50;     // proposal-scale batch length (burn-in only)
constexpr Index kRefreshEvery = 1000; // full eta/loglik recomputation cadence

struct BlockDef {
  enum class Kind { kFixed, kIid, kRw1, kTauIid, kTauRw1 };
  Kind kind;
  Index start = 0;
  Index size = 0;
  Index term = -1;  // iid/rw1 term the block belongs to
  bool sum_zero = false;
  std::string name;
};

std::vector<BlockDef> make_blocks(const DesignMatrix& design, const ParameterLayout& L) {
  std::vector<BlockDef> blocks;
  blocks.push_back({BlockDef::Kind::kFixed, 0, 1 + L.n_fixed, -1, false, "fixed"});
  for (std::size_t t = 0; t < design.iid.size(); ++t) {
    blocks.push_back({BlockDef::Kind::kIid, L.iid_blocks[t].start, L.iid_blocks[t].size,
                      static_cast<Index>(t), false, design.iid[t].column});
  }
  for (std::size_t t = 0; t < design.rw1.size(); ++t) {
    blocks.push_back({BlockDef::Kind::kRw1, L.rw1_blocks[t].start, L.rw1_blocks[t].size,
                      static_cast<Index>(t), design.rw1[t].sum_to_zero,
                      design.rw1[t].column});
  }
  for (std::size_t t = 0; t < design.iid.size(); ++t) {
    blocks.push_back({BlockDef::Kind::kTauIid,
                      L.tau_at(static_cast<Index>(t)), 1, static_cast<Index>(t), false,
                      "log_tau[" + design.iid[t].column + "]"});
  }
  for (std::size_t t = 0; t < design.rw1.size(); ++t) {
    blocks.push_back({BlockDef::Kind::kTauRw1,
                      L.tau_at(static_cast<Index>(design.iid.size() + t)), 1,
                      static_cast<Index>(t), false,
                      "log_tau[" + design.rw1[t].column + "]"});
  }
  return blocks;
}

double squared_sum(const Vector& params, Index start, Index size) {
  double ss = 0.0;
  for (Index k = 0; k < size; ++k) ss += params[start + k] * params[start + k];
  return ss;
}

double increment_squared_sum(const Vector& params, Index start, Index size) {
  double ss = 0.0;
  for (Index k = 0; k + 1 < size; ++k) {
    const double d = params[start + k + 1] - params[start + k];
    ss += d * d;
  }
  return ss;
}

struct ChainOut {
  Matrix draws;
  std::vector<long long> post_proposed;
  std::vector<long long> post_accepted;
};

ChainOut run_chain(const DesignMatrix& design, const IndexVector& labels,
                   const ParameterLayout& L, const std::vector<BlockDef>& blocks,
                   Index retain, Index thin, std::uint64_t chain_seed) {
  const Index post = retain * thin;
  const Index burn = post;  // 50% of the chain is burn-in
  const Index iters = burn + post;
  Rng rng(chain_seed);

  Vector params = Vector::Zero(L.total);
  Vector eta = linear_predictor(params, design);
  double cur_ll = log_likelihood(eta, labels);
  if (!std::isfinite(cur_ll)) {
    throw InternalError("sampler: non-finite log-posterior at initialization");
  }

  const double coef_var = design.coef_variance;
  const double a = design.tau_shape;
  const double b = design.tau_rate;

  std::vector<double> log_step(blocks.size());
  Index max_block = 1;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    log_step[i] = std::log(2.38 / std::sqrt(static_cast<double>(blocks[i].size)));
    max_block = std::max(max_block, blocks[i].size);
  }
  Vector comp_sd = Vector::Ones(L.total);

  // Welford accumulators over visited states; they feed the per-component
  // proposal scales during burn-in and freeze with everything else after.
  Vector w_mean = Vector::Zero(L.total);
  Vector w_m2 = Vector::Zero(L.total);
  long long w_count = 0;

  std::vector<long long> batch_prop(blocks.size(), 0), batch_acc(blocks.size(), 0);
  std::vector<long long> post_prop(blocks.size(), 0), post_acc(blocks.size(), 0);
  long long adapt_round = 0;

  Vector delta(max_block);
  Vector delta_eta(design.n);

  ChainOut out;
  out.draws.resize(retain, L.total);
  Index row = 0;

  for (Index it = 0; it < iters; ++it) {
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const auto& blk = blocks[bi];
      const double step = std::exp(log_step[bi]);
      for (Index k = 0; k < blk.size; ++k) {
        delta[k] = step * comp_sd[blk.start + k] * rng.normal();
      }
      if (blk.sum_zero) {
        double m = 0.0;
        for (Index k = 0; k < blk.size; ++k) m += delta[k];
        m /= static_cast<double>(blk.size);
        for (Index k = 0; k < blk.size; ++k) delta[k] -= m;
      }

      double log_alpha = 0.0;
      double new_ll = cur_ll;
      bool touches_eta = false;

      switch (blk.kind) {
        case BlockDef::Kind::kFixed: {
          touches_eta = true;
          for (Index i = 0; i < design.n; ++i) {
            double d = delta[0];
            for (Index j = 0; j < L.n_fixed; ++j) d += delta[1 + j] * design.X(i, j);
            delta_eta[i] = d;
          }
          for (Index k = 0; k < blk.size; ++k) {
            const double old_b = params[blk.start + k];
            const double new_b = old_b + delta[k];
            log_alpha += (old_b * old_b - new_b * new_b) / (2.0 * coef_var);
          }
          break;
        }
        case BlockDef::Kind::kIid: {
          touches_eta = true;
          const auto& term = design.iid[static_cast<std::size_t>(blk.term)];
          for (Index i = 0; i < design.n; ++i) delta_eta[i] = delta[term.index[i]];
          const double tau =
              std::exp(params[L.tau_at(blk.term)]);
          for (Index k = 0; k < blk.size; ++k) {
            const double old_u = params[blk.start + k];
            const double new_u = old_u + delta[k];
            log_alpha += 0.5 * tau * (old_u * old_u - new_u * new_u);
          }
          break;
        }
        case BlockDef::Kind::kRw1: {
          touches_eta = true;
          const auto& term = design.rw1[static_cast<std::size_t>(blk.term)];
          for (Index i = 0; i < design.n; ++i) delta_eta[i] = delta[term.index[i]];
          const double tau = std::exp(
              params[L.tau_at(static_cast<Index>(design.iid.size()) + blk.term)]);
          double ss_old = 0.0, ss_new = 0.0;
          for (Index k = 0; k + 1 < blk.size; ++k) {
            const double d_old = params[blk.start + k + 1] - params[blk.start + k];
            const double d_new = d_old + delta[k + 1] - delta[k];
            ss_old += d_old * d_old;
            ss_new += d_new * d_new;
          }
          log_alpha += 0.5 * tau * (ss_old - ss_new);
          break;
        }
        case BlockDef::Kind::kTauIid: {
          const auto& eff = L.iid_blocks[static_cast<std::size_t>(blk.term)];
          const double ss = squared_sum(params, eff.start, eff.size);
          const double K = static_cast<double>(eff.size);
          const double old_t = params[blk.start];
          const double new_t = old_t + delta[0];
          const auto contrib = [&](double theta) {
            const double tau = std::exp(theta);
            return 0.5 * K * theta - 0.5 * tau * ss + a * theta - b * tau;
          };
          log_alpha += contrib(new_t) - contrib(old_t);
          break;
        }
        case BlockDef::Kind::kTauRw1: {
          const auto& eff = L.rw1_blocks[static_cast<std::size_t>(blk.term)];
          const double ss = increment_squared_sum(params, eff.start, eff.size);
          const double Km1 = static_cast<double>(eff.size - 1);
          const double old_t = params[blk.start];
          const double new_t = old_t + delta[0];
          const auto contrib = [&](double theta) {
            const double tau = std::exp(theta);
            return 0.5 * Km1 * theta - 0.5 * tau * ss + a * theta - b * tau;
          };
          log_alpha += contrib(new_t) - contrib(old_t);
          break;
        }
      }

      if (touches_eta) {
        double ll = 0.0;
        for (Index i = 0; i < design.n; ++i) {
          const double e = eta[i] + delta_eta[i];
          ll += static_cast<double>(labels[i]) * e - log1p_exp(e);
        }
        new_ll = ll;
        log_alpha += new_ll - cur_ll;
      }

      const double u = rng.uniform_pos();
      ++batch_prop[bi];
      if (it >= burn) ++post_prop[bi];
      if (std::log(u) < log_alpha) {
        for (Index k = 0; k < blk.size; ++k) params[blk.start + k] += delta[k];
        if (touches_eta) {
          eta += delta_eta.head(design.n);
          cur_ll = new_ll;
        }
        ++batch_acc[bi];
        if (it >= burn) ++post_acc[bi];
      }
    }

    if (it < burn) {
      ++w_count;
      for (Index p = 0; p < L.total; ++p) {
        const double d = params[p] - w_mean[p];
        w_mean[p] += d / static_cast<double>(w_count);
        w_m2[p] += d * (params[p] - w_mean[p]);
      }
      if ((it + 1) % kAdaptEvery == 0) {
        ++adapt_round;
        const double nudge =
            std::min(0.25, 2.0 / std::sqrt(static_cast<double>(adapt_round)));
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
          const double rate = batch_prop[bi] > 0
                                  ? static_cast<double>(batch_acc[bi]) /
                                        static_cast<double>(batch_prop[bi])
                                  : 0.0;
          if (rate < 0.20) {
            log_step[bi] -= nudge;
          } else if (rate > 0.40) {
            log_step[bi] += nudge;
          }
          batch_prop[bi] = 0;
          batch_acc[bi] = 0;
        }
        if (w_count >= 2 * kAdaptEvery) {
          for (Index p = 0; p < L.total; ++p) {
            const double var = w_m2[p] / static_cast<double>(w_count - 1);
            comp_sd[p] = std::max(std::sqrt(var), 1e-3);
          }
        }
      }
    }

    if ((it + 1) % kRefreshEvery == 0) {
      eta = linear_predictor(params, design);
      cur_ll = log_likelihood(eta, labels);
    }

    if (it >= burn && (it - burn) % thin == thin - 1 && row < retain) {
      out.draws.row(row++) = params;
    }
  }

  out.post_proposed = std::move(post_prop);
  out.post_accepted = std::move(post_acc);
  return out;
}

double autocovariance(const double* x, Index n, double mean, Index lag) {
  double s = 0.0;
  for (Index i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
  return s / static_cast<double>(n);
}

// Effective sample size via Geyer's initial positive sequence.
double ess_of(const double* x, Index n) {
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (Index i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);
  const double c0 = autocovariance(x, n, mean, 0);
  if (!(c0 > 0.0)) return static_cast<double>(n);
  double sum_rho = 0.0;
  for (Index lag = 1; lag + 1 < n; lag += 2) {
    const double g = (autocovariance(x, n, mean, lag) +
                      autocovariance(x, n, mean, lag + 1)) /
                     c0;
    if (g <= 0.0) break;
    sum_rho += g;
  }
  const double ess = static_cast<double>(n) / (1.0 + 2.0 * sum_rho);
  return std::max(1.0, std::min(ess, static_cast<double>(n)));
}

double lag1_of(const double* x, Index n) {
  if (n < 3) return 0.0;
  double mean = 0.0;
  for (Index i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);
  const double c0 = autocovariance(x, n, mean, 0);
  if (!(c0 > 0.0)) return 0.0;
  return autocovariance(x, n, mean, 1) / c0;
}

// Split-chain potential scale reduction over halves of every chain.
double split_rhat_of(const std::vector<std::pair<const double*, Index>>& chains) {
  std::vector<double> means, vars;
  Index len = std::numeric_limits<Index>::max();
  for (const auto& [ptr, n] : chains) len = std::min(len, n / 2);
  if (len < 2) return 1.0;
  for (const auto& [ptr, n] : chains) {
    (void)n;
    for (int half = 0; half < 2; ++half) {
      const double* x = ptr + half * len;
      double m = 0.0;
      for (Index i = 0; i < len; ++i) m += x[i];
      m /= static_cast<double>(len);
      double ss = 0.0;
      for (Index i = 0; i < len; ++i) ss += (x[i] - m) * (x[i] - m);
      means.push_back(m);
      vars.push_back(ss / static_cast<double>(len - 1));
    }
  }
  const auto m_count = static_cast<double>(means.size());
  double w = 0.0;
  for (double v : vars) w += v;
  w /= m_count;
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= m_count;
  double bvar = 0.0;
  for (double m : means) bvar += (m - grand) * (m - grand);
  bvar = m_count > 1 ? bvar / (m_count - 1) : 0.0;
  const double n = static_cast<double>(len);
  if (!(w > 0.0)) return bvar > 0.0 ? 1e9 : 1.0;
  const double var_hat = (n - 1.0) / n * w + bvar;
  return std::sqrt(var_hat / w);
}

}  // namespace

SampleResult sample_posterior(const DesignMatrix& design, const IndexVector& labels,
                              const SamplerOptions& options) {
  if (options.samples < 1) throw UserError("sampler: samples must be >= 1");
  if (options.chains < 1) throw UserError("sampler: chains must be >= 1");
  if (options.thin < 1) throw UserError("sampler: thin must be >= 1");
  log_likelihood(Vector::Zero(design.n), labels);  // validates labels up front

  const ParameterLayout L = layout_of(design);
  const std::vector<BlockDef> blocks = make_blocks(design, L);

  std::vector<Index> retain(static_cast<std::size_t>(options.chains));
  for (Index c = 0; c < options.chains; ++c) {
    retain[static_cast<std::size_t>(c)] =
        options.samples / options.chains + (c < options.samples % options.chains ? 1 : 0);
  }

  std::vector<ChainOut> chains(static_cast<std::size_t>(options.chains));
  const auto run_one = [&](Index c) {
    chains[static_cast<std::size_t>(c)] =
        run_chain(design, labels, L, blocks, retain[static_cast<std::size_t>(c)],
                  options.thin, mix_seed(options.seed, static_cast<std::uint64_t>(c) + 1));
  };

  Index hw = static_cast<Index>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const Index workers =
      options.threads > 0 ? std::min(options.threads, options.chains)
                          : std::min(hw, options.chains);
  if (workers <= 1) {
    for (Index c = 0; c < options.chains; ++c) run_one(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<Index> next{0};
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const Index c = next.fetch_add(1);
          if (c >= options.chains) return;
          run_one(c);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  SampleResult result;
  auto& samples = result.samples;
  samples.names = parameter_names(design);
  samples.seed = options.seed;
  samples.chains = options.chains;
  samples.thin = options.thin;
  samples.burn_in = (options.samples / options.chains +
                     (options.samples % options.chains ? 1 : 0)) *
                    options.thin;
  samples.draws.resize(options.samples, L.total);
  Index row = 0;
  for (const auto& chain : chains) {
    for (Index r = 0; r < chain.draws.rows(); ++r) samples.draws.row(row++) = chain.draws.row(r);
  }

  auto& diag = result.diagnostics;
  diag.names = samples.names;
  diag.ess.resize(L.total);
  diag.split_rhat.resize(L.total);
  diag.lag1.resize(L.total);
  std::vector<Vector> cols(static_cast<std::size_t>(options.chains));
  for (Index p = 0; p < L.total; ++p) {
    double ess = 0.0, lag1 = 0.0;
    std::vector<std::pair<const double*, Index>> views;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      cols[c] = chains[c].draws.col(p);
      const Index n = cols[c].size();
      ess += ess_of(cols[c].data(), n);
      lag1 += lag1_of(cols[c].data(), n);
      views.emplace_back(cols[c].data(), n);
    }
    diag.ess[p] = ess;
    diag.lag1[p] = lag1 / static_cast<double>(options.chains);
    diag.split_rhat[p] = split_rhat_of(views);
  }

  diag.block_names.reserve(blocks.size());
  diag.acceptance.resize(static_cast<Index>(blocks.size()));
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    diag.block_names.push_back(blocks[bi].name);
    long long prop = 0, acc = 0;
    for (const auto& chain : chains) {
      prop += chain.post_proposed[bi];
      acc += chain.post_accepted[bi];
    }
    const double rate = prop > 0 ? static_cast<double>(acc) / static_cast<double>(prop) : 0.0;
    diag.acceptance[static_cast<Index>(bi)] = rate;
    if (prop > 0 && rate < 0.01) {
      diag.diverged = true;
      diag.warnings.push_back("block '" + blocks[bi].name +
                              "' acceptance below 1% after adaptation");
    }
  }
  double max_lag1 = 0.0;
  for (Index p = 0; p < L.total; ++p) max_lag1 = std::max(max_lag1, diag.lag1[p]);
  if (max_lag1 > 0.9) {
    diag.warnings.push_back("retained draws have lag-1 autocorrelation above 0.9; "
                            "increase thinning");
  }
  return result;
}

OracleResult quadrature_oracle(const DesignMatrix& design, const IndexVector& labels) {
  if (!design.iid.empty() || !design.rw1.empty()) {
    throw InternalError("quadrature_oracle: random terms are not supported");
  }
  const ParameterLayout L = layout_of(design);
  if (L.total > 2) {
    throw InternalError("quadrature_oracle: at most 2 free parameters");
  }

  constexpr Index kNodes = 401;
  constexpr double kLo = -10.0, kHi = 10.0;
  const auto node = [&](Index k) {
    return kLo + (kHi - kLo) * static_cast<double>(k) / static_cast<double>(kNodes - 1);
  };

  const Index dim = L.total;
  const Index total_nodes = dim == 1 ? kNodes : kNodes * kNodes;
  std::vector<double> logp(static_cast<std::size_t>(total_nodes));
  Vector params(dim);
  double max_logp = -std::numeric_limits<double>::infinity();
  for (Index idx = 0; idx < total_nodes; ++idx) {
    params[0] = node(dim == 1 ? idx : idx / kNodes);
    if (dim == 2) params[1] = node(idx % kNodes);
    const double lp = log_posterior(params, design, labels).value;
    logp[static_cast<std::size_t>(idx)] = lp;
    max_logp = std::max(max_logp, lp);
  }

  double total = 0.0, boundary = 0.0;
  Vector mean = Vector::Zero(dim);
  for (Index idx = 0; idx < total_nodes; ++idx) {
    const Index k0 = dim == 1 ? idx : idx / kNodes;
    const Index k1 = dim == 1 ? 0 : idx % kNodes;
    const double w = std::exp(logp[static_cast<std::size_t>(idx)] - max_logp);
    total += w;
    if (k0 == 0 || k0 == kNodes - 1 || (dim == 2 && (k1 == 0 || k1 == kNodes - 1))) {
      boundary += w;
    }
    mean[0] += w * node(k0);
    if (dim == 2) mean[1] += w * node(k1);
  }
  if (boundary > 1e-6 * total) {
    throw InternalError("quadrature_oracle: posterior mass reaches the grid boundary; "
                        "widen the grid");
  }
  mean /= total;

  Vector var = Vector::Zero(dim);
  for (Index idx = 0; idx < total_nodes; ++idx) {
    const Index k0 = dim == 1 ? idx : idx / kNodes;
    const Index k1 = dim == 1 ? 0 : idx % kNodes;
    const double w = std::exp(logp[static_cast<std::size_t>(idx)] - max_logp);
    const double d0 = node(k0) - mean[0];
    var[0] += w * d0 * d0;
    if (dim == 2) {
      const double d1 = node(k1) - mean[1];
      var[1] += w * d1 * d1;
    }
  }
  var /= total;

  OracleResult out;
  out.mean = mean;
  out.sd = var.array().sqrt();
  return out;
}

MarginalSummary summarize_marginals(const PosteriorSamples& samples) {
  const Index S = samples.draws.rows();
  const Index P = samples.draws.cols();
  if (S < 1) throw InternalError("summarize_marginals: no draws");
  MarginalSummary out;
  out.names = samples.names;
  out.mean.resize(P);
  out.sd.resize(P);
  out.q025.resize(P);
  out.q975.resize(P);
  std::vector<double> col(static_cast<std::size_t>(S));
  for (Index p = 0; p < P; ++p) {
    for (Index s = 0; s < S; ++s) col[static_cast<std::size_t>(s)] = samples.draws(s, p);
    double m = 0.0;
    for (double x : col) m += x;
    m /= static_cast<double>(S);
    double ss = 0.0;
    for (double x : col) ss += (x - m) * (x - m);
    out.mean[p] = m;
    out.sd[p] = S > 1 ? std::sqrt(ss / static_cast<double>(S - 1)) : 0.0;
    const auto qs = interpolated_quantiles(col, {0.025, 0.975});
    out.q025[p] = qs[0];
    out.q975[p] = qs[1];
  }
  return out;
}

std::string significance_name(Significance s) {
  switch (s) {
    case Significance::kPositive: return "positive";
    case Significance::kNegative: return "negative";
    case Significance::kNotSignificant: return "not-significant";
  }
  return "not-significant";
}

Significance classify_significance(const PosteriorSamples& samples,
                                   const std::string& term) {
  const auto it = std::find(samples.names.begin(), samples.names.end(), term);
  if (it == samples.names.end()) {
    throw UserError("classify_significance: unknown term '" + term + "'");
  }
  const Index p = static_cast<Index>(it - samples.names.begin());
  std::vector<double> col(static_cast<std::size_t>(samples.draws.rows()));
  for (Index s = 0; s < samples.draws.rows(); ++s) {
    col[static_cast<std::size_t>(s)] = samples.draws(s, p);
  }
  const auto qs = interpolated_quantiles(std::move(col), {0.025, 0.975});
  if (qs[0] > 0.0) return Significance::kPositive;
  if (qs[1] < 0.0) return Significance::kNegative;
  return Significance::kNotSignificant;
}

std::string serialize_posterior_csv(const PosteriorSamples& samples) {
  std::string out;
  for (std::size_t p = 0; p < samples.names.size(); ++p) {
    if (p > 0) out += ',';
    out += samples.names[p];
  }
  out += '\n';
  for (Index s = 0; s < samples.draws.rows(); ++s) {
    for (Index p = 0; p < samples.draws.cols(); ++p) {
      if (p > 0) out += ',';
      out += format_double(samples.draws(s, p));
    }
    out += '\n';
  }
  return out;
}

PosteriorSamples parse_posterior_csv(std::string_view text, const std::string& name) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw UserError(name + ": need a header and at least one draw");
  PosteriorSamples samples;
  for (auto tok : split_csv_line(lines[0])) {
    if (tok.empty()) throw UserError(name + ": line 1: empty parameter name");
    samples.names.emplace_back(tok);
  }
  const auto P = static_cast<Index>(samples.names.size());
  const auto S = static_cast<Index>(lines.size() - 1);
  samples.draws.resize(S, P);
  for (Index s = 0; s < S; ++s) {
    const std::string ctx = name + ": line " + format_int(s + 2);
    const auto toks = split_csv_line(lines[static_cast<std::size_t>(s) + 1]);
    if (static_cast<Index>(toks.size()) != P) {
      throw UserError(ctx + ": expected " + format_int(P) + " fields, got " +
                      format_int(static_cast<long long>(toks.size())));
    }
    for (Index p = 0; p < P; ++p) {
      samples.draws(s, p) = parse_double(toks[static_cast<std::size_t>(p)], ctx);
    }
  }
  return samples;
}

PosteriorSamples read_posterior_csv(const std::string& path) {
  return parse_posterior_csv(read_text_file(path), path);
}

std::string serialize_diagnostics(const Diagnostics& diag) {
  nlohmann::json doc;
  auto per_param = [&](const Vector& v) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t p = 0; p < diag.names.size(); ++p) {
      obj[diag.names[p]] = v[static_cast<Index>(p)];
    }
    return obj;
  };
  doc["ess"] = per_param(diag.ess);
  doc["split_rhat"] = per_param(diag.split_rhat);
  doc["lag1"] = per_param(diag.lag1);
  auto acc = nlohmann::json::object();
  for (std::size_t b = 0; b < diag.block_names.size(); ++b) {
    acc[diag.block_names[b]] = diag.acceptance[static_cast<Index>(b)];
  }
  doc["acceptance"] = acc;
  doc["diverged"] = diag.diverged;
  doc["warnings"] = diag.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace sugam
