#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sugam/table.hpp"
#include "sugam/types.hpp"

namespace sugam {

// One binned ordinal term with a first-order random-walk prior between
// adjacent bins. Edges may be pinned in the spec; when absent, build_design
// derives `bins` equal-width edges from the calibration column and records
// them so scenario runs bin against the same grid.
struct Rw1Spec {
  std::string column;
  Index bins = 20;
  std::vector<double> edges;  // size bins+1 once resolved
  bool sum_to_zero = true;
};

struct ModelSpec {
  std::vector<std::string> fixed;  // standardized column names
  std::vector<std::string> iid;    // categorical column names
  std::vector<Rw1Spec> rw1;
  double coef_variance = 1000.0;  // Gaussian prior variance for intercept and fixed
  double tau_shape = 1.0;         // Gamma prior on each random-term precision
  double tau_rate = 5e-5;

  void validate() const;
};

// The full susceptibility model: eight fixed effects, geology and bedding
// as iid class effects, slope and relative-slope-position means as RW1
// curves.
ModelSpec default_model_spec();

std::string serialize_model_spec(const ModelSpec& spec);
ModelSpec parse_model_spec(std::string_view text, const std::string& name);
ModelSpec read_model_spec(const std::string& path);

// Term structures resolved against a concrete table: class code sets for
// iid terms, bin edges and per-SU bin indexes for RW1 terms.
struct IidDesign {
  std::string column;
  std::vector<int> classes;  // sorted unique codes seen in calibration
  IndexVector index;         // per SU, position in `classes`
};

struct Rw1Design {
  std::string column;
  Vector edges;       // bins+1, strictly increasing
  bool sum_to_zero = true;
  IndexVector index;  // per SU, bin in [0, bins)

  Index bins() const { return edges.size() - 1; }
};

struct DesignMatrix {
  Index n = 0;
  std::vector<std::string> fixed_names;
  Matrix X;  // n rows, one column per fixed term
  std::vector<IidDesign> iid;
  std::vector<Rw1Design> rw1;
  double coef_variance = 1000.0;
  double tau_shape = 1.0;
  double tau_rate = 5e-5;
};

DesignMatrix build_design(const SlopeUnitTable& table, const ModelSpec& spec);

// Bin lookup shared by calibration and scenario paths: edges[k] <= x <
// edges[k+1]; x at the top edge falls in the last bin; out-of-range x
// clamps to the nearest end bin.
Index bin_of(double x, const Vector& edges);

// Flat parameter vector layout:
//   [intercept | fixed... | iid effects per term | rw1 effects per term |
//    log tau per random term (iid terms first)].
struct ParameterLayout {
  struct Block {
    Index start = 0;
    Index size = 0;
  };

  Index total = 0;
  Index n_fixed = 0;
  std::vector<Block> iid_blocks;
  std::vector<Block> rw1_blocks;
  Index tau_start = 0;
  Index n_tau = 0;

  static constexpr Index kIntercept = 0;
  Index fixed_at(Index j) const { return 1 + j; }
  Index tau_at(Index t) const { return tau_start + t; }
};

ParameterLayout layout_of(const DesignMatrix& design);

// Column names bijective with the layout: intercept, fixed columns,
// "Geo[3]"-style class effects, "Slope_mu[7]"-style bin effects (1-based),
// then "log_tau[term]" per random term.
std::vector<std::string> parameter_names(const DesignMatrix& design);

// The model's linear predictor. The per-SU accumulation order (intercept, fixed
// terms in design order, iid terms, rw1 terms) is part of the contract:
// scenario swaps reproduce reference values bit-for-bit only because both
// paths run through this one loop.
Vector linear_predictor(const Vector& params, const DesignMatrix& design);

struct LogPosterior {
  double value = 0.0;
  Vector gradient;
};

double log_likelihood(const Vector& eta, const IndexVector& labels);

// Bernoulli log-likelihood plus Gaussian priors on intercept/fixed, iid
// Gaussian and RW1 increment priors on random blocks, and Gamma priors on
// each precision expressed through log tau (Jacobian included). Gradient is
// exact for every block.
LogPosterior log_posterior(const Vector& params, const DesignMatrix& design,
                           const IndexVector& labels);

}  // namespace sugam
