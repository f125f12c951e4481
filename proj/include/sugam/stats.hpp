#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sugam/types.hpp"

namespace sugam {

// Quantile by linear interpolation of order statistics: the k-th sorted
// value (0-based) sits at probability k/(n-1). This is the convention every
// credible interval in the project uses, so summaries are comparable across
// modules and pinned test values stay valid.
double interpolated_quantile(std::vector<double> values, double q);

// Same, for several probabilities at once (one sort).
std::vector<double> interpolated_quantiles(std::vector<double> values,
                                           const std::vector<double>& qs);

// The interpolation step alone, for callers that already hold sorted data.
double quantile_of_sorted(const std::vector<double>& sorted, double q);

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator). Requires v.size() >= 2.
double sample_sd(const std::vector<double>& v);

// Sum after sorting. Floating-point addition is not associative, so this is
// the one way we fold cell values into per-unit statistics: any permutation
// of the inputs yields the identical bit pattern.
double sorted_sum(std::vector<double> v);

// log(1 + exp(x)) without overflow; exact enough for x in [-745, 709] and
// saturating correctly outside.
inline double log1p_exp(double x) {
  const double m = x > 0.0 ? x : 0.0;
  return m + std::log1p(std::exp(-std::abs(x)));
}

inline double inverse_logit(double eta) {
  if (eta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-eta));
  }
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace sugam
