#include "sugam/stats.hpp"

#include <algorithm>
#include <cmath>

namespace sugam {

double quantile_of_sorted(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  if (n == 0) throw InternalError("quantile of empty sample");
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double interpolated_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InternalError("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw InternalError("quantile probability outside [0,1]");
  std::sort(values.begin(), values.end());
  return quantile_of_sorted(values, q);
}

std::vector<double> interpolated_quantiles(std::vector<double> values,
                                           const std::vector<double>& qs) {
  if (values.empty()) throw InternalError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (q < 0.0 || q > 1.0) throw InternalError("quantile probability outside [0,1]");
    out.push_back(quantile_of_sorted(values, q));
  }
  return out;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) throw InternalError("sample sd needs at least two values");
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace sugam
