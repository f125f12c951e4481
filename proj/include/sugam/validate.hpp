#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sugam/model.hpp"
#include "sugam/sampler.hpp"
#include "sugam/simulate.hpp"
#include "sugam/table.hpp"
#include "sugam/types.hpp"

namespace sugam {

struct FoldAssignment {
  std::vector<int> fold;  // per SU, in table row order, values in [0, k)
  Index k = 0;
  std::uint64_t seed = 0;
};

// Seeded Fisher-Yates shuffle then round-robin: a partition with fold sizes
// differing by at most one, reproducible per seed.
FoldAssignment make_folds(Index n, Index k, std::uint64_t seed);

struct RocCurve {
  Vector fpr;  // from (0,0) to (1,1), both coordinates non-decreasing
  Vector tpr;
  double auc = 0.0;
};

// AUC via the Mann-Whitney rank statistic with average ranks on ties
// (ties count half); the curve is a threshold sweep over distinct scores.
// Its trapezoid area equals the rank AUC.
RocCurve roc_auc(const Vector& scores, const IndexVector& labels);

struct CvReport {
  FoldAssignment folds;
  std::vector<Index> fold_ids;   // folds with a scored ROC curve
  std::vector<RocCurve> curves;  // parallel to fold_ids
  std::vector<double> auc;       // parallel to fold_ids
  Vector predicted;              // held-out posterior-mean susceptibility per SU
  std::vector<std::string> training_hashes;  // per fold, over sorted training ids
  std::vector<Index> skipped_folds;          // single-class training folds
  std::vector<std::string> warnings;
  double median_auc = 0.0;
  double iqr_auc = 0.0;
  double min_auc = 0.0;
  double max_auc = 0.0;
};

// k-fold cross-validation with a full refit per fold. Standardization and
// RW1 binning come from the whole table (the calibration scale); each fold
// refits every parameter on its 90% and scores the held-out 10% with the
// posterior-mean susceptibility. Held-out predictions assemble into one
// fully-predicted map.
CvReport cross_validate(const SlopeUnitTable& table, const ModelSpec& spec, Index k,
                        std::uint64_t seed, const SamplerOptions& sampler_options);

struct ErrorPlotData {
  Vector mean;      // sorted ascending
  Vector ci_width;  // paired with mean
  double tail_width = 0.0;     // mean ci_width where mean < 0.1 or > 0.9
  double central_width = 0.0;  // mean ci_width where mean in [0.4, 0.6]
  Index tail_count = 0;
  Index central_count = 0;
};

ErrorPlotData error_plot_data(const SusceptibilitySummary& summary);

struct FadBin {
  double lo = 0.0;
  double hi = 0.0;
  Index count = 0;
  double density = 0.0;  // count / (N * linear bin width)
};

struct FadResult {
  std::vector<FadBin> bins;
  double rollover = 0.0;  // NaN if fewer than 20 areas
  Index n = 0;
  double min_area = 0.0;
};

// Frequency-area distribution on log10-spaced bins. Densities integrate to
// one over the linear widths; the rollover is the geometric midpoint of the
// highest-density bin and needs at least 20 areas.
FadResult frequency_area(const std::vector<double>& areas_m2, int bins_per_decade = 20);

// lo,hi,count,density
std::string serialize_fad_csv(const FadResult& fad);

// fpr,tpr point list for one curve.
std::string serialize_roc_csv(const RocCurve& curve);

std::string serialize_cv_report(const CvReport& report);

}  // namespace sugam
