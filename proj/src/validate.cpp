#include "sugam/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "sugam/io.hpp"
#include "sugam/rng.hpp"
#include "sugam/stats.hpp"

namespace sugam {

FoldAssignment make_folds(Index n, Index k, std::uint64_t seed) {
  if (k < 2) throw UserError("make_folds: k must be at least 2");
  if (k > n) throw UserError("make_folds: k (" + format_int(k) + ") exceeds SU count (" +
                             format_int(n) + ")");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(mix_seed(seed, 1000));  // stream decoupled from the chain seeds
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    out.fold[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        static_cast<int>(i % k);
  }
  return out;
}

RocCurve roc_auc(const Vector& scores, const IndexVector& labels) {
  const Index n = scores.size();
  if (labels.size() != n) throw InternalError("roc_auc: score/label size mismatch");
  Index npos = 0;
  for (Index i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InternalError("roc_auc: label " + format_int(labels[i]) + " is not 0/1");
    }
    npos += labels[i];
  }
  const Index nneg = n - npos;
  if (npos == 0 || nneg == 0) {
    throw UserError("roc_auc: both classes must be present");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups, then the Mann-Whitney identity.
  double rank_sum_pos = 0.0;
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j < n && scores[order[static_cast<std::size_t>(j)]] ==
                        scores[order[static_cast<std::size_t>(i)]]) {
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (Index t = i; t < j; ++t) {
      if (labels[order[static_cast<std::size_t>(t)]] == 1) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  RocCurve curve;
  curve.auc = (rank_sum_pos -
               0.5 * static_cast<double>(npos) * static_cast<double>(npos + 1)) /
              (static_cast<double>(npos) * static_cast<double>(nneg));

  // Threshold sweep from the highest score down; one point per distinct
  // score, plus the (0,0) start.
  std::vector<double> fpr{0.0}, tpr{0.0};
  Index tp = 0, fp = 0;
  for (Index i = n; i > 0;) {
    Index j = i;
    while (j > 0 && scores[order[static_cast<std::size_t>(j - 1)]] ==
                        scores[order[static_cast<std::size_t>(i - 1)]]) {
      --j;
    }
    for (Index t = j; t < i; ++t) {
      if (labels[order[static_cast<std::size_t>(t)]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
    }
    fpr.push_back(static_cast<double>(fp) / static_cast<double>(nneg));
    tpr.push_back(static_cast<double>(tp) / static_cast<double>(npos));
    i = j;
  }
  curve.fpr = Eigen::Map<const Vector>(fpr.data(), static_cast<Index>(fpr.size()));
  curve.tpr = Eigen::Map<const Vector>(tpr.data(), static_cast<Index>(tpr.size()));
  return curve;
}

namespace {

DesignMatrix slice_design(const DesignMatrix& design, const std::vector<Index>& rows) {
  DesignMatrix out;
  out.n = static_cast<Index>(rows.size());
  out.fixed_names = design.fixed_names;
  out.coef_variance = design.coef_variance;
  out.tau_shape = design.tau_shape;
  out.tau_rate = design.tau_rate;
  out.X.resize(out.n, design.X.cols());
  for (Index i = 0; i < out.n; ++i) {
    out.X.row(i) = design.X.row(rows[static_cast<std::size_t>(i)]);
  }
  for (const auto& term : design.iid) {
    IidDesign t;
    t.column = term.column;
    t.classes = term.classes;  // keep the global class set: layouts must match
    t.index.resize(out.n);
    for (Index i = 0; i < out.n; ++i) {
      t.index[i] = term.index[rows[static_cast<std::size_t>(i)]];
    }
    out.iid.push_back(std::move(t));
  }
  for (const auto& term : design.rw1) {
    Rw1Design t;
    t.column = term.column;
    t.edges = term.edges;  // calibration binning, not per-fold
    t.sum_to_zero = term.sum_to_zero;
    t.index.resize(out.n);
    for (Index i = 0; i < out.n; ++i) {
      t.index[i] = term.index[rows[static_cast<std::size_t>(i)]];
    }
    out.rw1.push_back(std::move(t));
  }
  return out;
}

}  // namespace

CvReport cross_validate(const SlopeUnitTable& table, const ModelSpec& spec, Index k,
                        std::uint64_t seed, const SamplerOptions& sampler_options) {
  const DesignMatrix design = build_design(table, spec);
  const Index n = design.n;
  CvReport report;
  report.folds = make_folds(n, k, seed);
  report.predicted = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  report.training_hashes.resize(static_cast<std::size_t>(k));

  for (Index f = 0; f < k; ++f) {
    std::vector<Index> train_rows, test_rows;
    for (Index i = 0; i < n; ++i) {
      if (report.folds.fold[static_cast<std::size_t>(i)] == f) {
        test_rows.push_back(i);
      } else {
        train_rows.push_back(i);
      }
    }

    std::string id_list;
    Index train_pos = 0;
    IndexVector train_labels(static_cast<Index>(train_rows.size()));
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      const Index row = train_rows[i];
      train_labels[static_cast<Index>(i)] = table.labels[row];
      train_pos += table.labels[row];
      if (i > 0) id_list += ',';
      id_list += format_int(table.su_ids[static_cast<std::size_t>(row)]);
    }
    report.training_hashes[static_cast<std::size_t>(f)] = fnv1a64_hex(id_list);

    if (train_pos == 0 || train_pos == train_labels.size()) {
      report.skipped_folds.push_back(f);
      report.warnings.push_back("fold " + format_int(f) +
                                ": training split has a single class, skipped");
      continue;
    }

    const DesignMatrix train_design = slice_design(design, train_rows);
    SamplerOptions opts = sampler_options;
    opts.seed = mix_seed(seed, static_cast<std::uint64_t>(101 + f));
    const SampleResult fit = sample_posterior(train_design, train_labels, opts);

    const DesignMatrix test_design = slice_design(design, test_rows);
    const Index S = fit.samples.draws.rows();
    Vector mean_p = Vector::Zero(test_design.n);
    Vector params(fit.samples.draws.cols());
    for (Index s = 0; s < S; ++s) {
      params = fit.samples.draws.row(s);
      const Vector eta = linear_predictor(params, test_design);
      for (Index i = 0; i < test_design.n; ++i) mean_p[i] += inverse_logit(eta[i]);
    }
    mean_p /= static_cast<double>(S);

    IndexVector test_labels(static_cast<Index>(test_rows.size()));
    Index test_pos = 0;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      test_labels[static_cast<Index>(i)] = table.labels[test_rows[i]];
      test_pos += table.labels[test_rows[i]];
      report.predicted[test_rows[i]] = mean_p[static_cast<Index>(i)];
    }

    if (test_pos == 0 || test_pos == test_labels.size()) {
      report.warnings.push_back("fold " + format_int(f) +
                                ": held-out split has a single class, no ROC");
      continue;
    }
    RocCurve curve = roc_auc(mean_p, test_labels);
    report.auc.push_back(curve.auc);
    report.curves.push_back(std::move(curve));
    report.fold_ids.push_back(f);
  }

  if (!report.auc.empty()) {
    report.median_auc = interpolated_quantile(report.auc, 0.5);
    report.iqr_auc = interpolated_quantile(report.auc, 0.75) -
                     interpolated_quantile(report.auc, 0.25);
    report.min_auc = *std::min_element(report.auc.begin(), report.auc.end());
    report.max_auc = *std::max_element(report.auc.begin(), report.auc.end());
  }
  return report;
}

ErrorPlotData error_plot_data(const SusceptibilitySummary& summary) {
  const Index n = summary.mean.size();
  if (n == 0) throw UserError("error_plot_data: empty summary");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return summary.mean[a] < summary.mean[b];
  });
  ErrorPlotData out;
  out.mean.resize(n);
  out.ci_width.resize(n);
  double tail_sum = 0.0, central_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    out.mean[i] = summary.mean[j];
    out.ci_width[i] = summary.ci_width[j];
    if (summary.mean[j] < 0.1 || summary.mean[j] > 0.9) {
      tail_sum += summary.ci_width[j];
      ++out.tail_count;
    }
    if (summary.mean[j] >= 0.4 && summary.mean[j] <= 0.6) {
      central_sum += summary.ci_width[j];
      ++out.central_count;
    }
  }
  out.tail_width = out.tail_count > 0
                       ? tail_sum / static_cast<double>(out.tail_count)
                       : std::numeric_limits<double>::quiet_NaN();
  out.central_width = out.central_count > 0
                          ? central_sum / static_cast<double>(out.central_count)
                          : std::numeric_limits<double>::quiet_NaN();
  return out;
}

FadResult frequency_area(const std::vector<double>& areas_m2, int bins_per_decade) {
  if (areas_m2.empty()) throw UserError("frequency_area: no areas given");
  if (bins_per_decade < 1) throw UserError("frequency_area: bins_per_decade must be >= 1");
  double amin = areas_m2[0], amax = areas_m2[0];
  for (double a : areas_m2) {
    if (!(a > 0.0)) {
      throw UserError("frequency_area: areas must be positive, got " + format_double(a));
    }
    amin = std::min(amin, a);
    amax = std::max(amax, a);
  }
  const double bpd = static_cast<double>(bins_per_decade);
  const double log_min = std::log10(amin);
  const double span = std::log10(amax) - log_min;
  const auto nbins = std::max<Index>(1, static_cast<Index>(std::ceil(span * bpd - 1e-12)));

  FadResult out;
  out.n = static_cast<Index>(areas_m2.size());
  out.min_area = amin;
  out.bins.resize(static_cast<std::size_t>(nbins));
  for (Index b = 0; b < nbins; ++b) {
    out.bins[static_cast<std::size_t>(b)].lo =
        std::pow(10.0, log_min + static_cast<double>(b) / bpd);
    out.bins[static_cast<std::size_t>(b)].hi =
        std::pow(10.0, log_min + static_cast<double>(b + 1) / bpd);
  }
  for (double a : areas_m2) {
    auto b = static_cast<Index>(std::floor((std::log10(a) - log_min) * bpd));
    b = std::clamp<Index>(b, 0, nbins - 1);
    ++out.bins[static_cast<std::size_t>(b)].count;
  }
  for (auto& bin : out.bins) {
    bin.density = static_cast<double>(bin.count) /
                  (static_cast<double>(out.n) * (bin.hi - bin.lo));
  }

  if (out.n >= 20) {
    const auto best = std::max_element(
        out.bins.begin(), out.bins.end(),
        [](const FadBin& a, const FadBin& b) { return a.density < b.density; });
    out.rollover = std::sqrt(best->lo * best->hi);
  } else {
    out.rollover = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::string serialize_fad_csv(const FadResult& fad) {
  std::string out = "lo,hi,count,density\n";
  for (const auto& bin : fad.bins) {
    out += format_double(bin.lo);
    out += ',';
    out += format_double(bin.hi);
    out += ',';
    out += format_int(bin.count);
    out += ',';
    out += format_double(bin.density);
    out += '\n';
  }
  return out;
}

std::string serialize_roc_csv(const RocCurve& curve) {
  std::string out = "fpr,tpr\n";
  for (Index i = 0; i < curve.fpr.size(); ++i) {
    out += format_double(curve.fpr[i]);
    out += ',';
    out += format_double(curve.tpr[i]);
    out += '\n';
  }
  return out;
}

std::string serialize_cv_report(const CvReport& report) {
  nlohmann::json doc;
  auto auc = nlohmann::json::object();
  for (std::size_t i = 0; i < report.fold_ids.size(); ++i) {
    auc["fold_" + format_int(report.fold_ids[i])] = report.auc[i];
  }
  doc["auc_per_fold"] = auc;
  doc["median_auc"] = report.median_auc;
  doc["iqr_auc"] = report.iqr_auc;
  doc["min_auc"] = report.min_auc;
  doc["max_auc"] = report.max_auc;
  doc["folds"] = report.folds.k;
  doc["seed"] = report.folds.seed;
  auto hashes = nlohmann::json::object();
  for (std::size_t f = 0; f < report.training_hashes.size(); ++f) {
    hashes["fold_" + format_int(static_cast<long long>(f))] = report.training_hashes[f];
  }
  doc["training_hashes"] = hashes;
  doc["skipped_folds"] = report.skipped_folds;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace sugam
