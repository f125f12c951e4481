#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "sugam/rng.hpp"
#include "sugam/sampler.hpp"
#include "sugam/synthetic.hpp"
#include "sugam/validate.hpp"
#include "test_helpers.hpp"

using namespace sugam;

TEST_CASE("folds partition the rows with sizes differing by at most one") {
  const FoldAssignment f = make_folds(103, 10, 99);
  REQUIRE(f.fold.size() == 103);
  std::vector<int> sizes(10, 0);
  for (int v : f.fold) {
    REQUIRE(v >= 0);
    REQUIRE(v < 10);
    ++sizes[v];
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  CHECK(*hi - *lo <= 1);
  // deterministic per seed
  const FoldAssignment g = make_folds(103, 10, 99);
  CHECK(g.fold == f.fold);
  const FoldAssignment h = make_folds(103, 10, 100);
  CHECK(h.fold != f.fold);
  CHECK_THROWS_AS(make_folds(5, 1, 1), UserError);
  CHECK_THROWS_AS(make_folds(5, 6, 1), UserError);
}

TEST_CASE("auc on hand-computed rankings") {
  Vector s(4);
  IndexVector y(4);
  s << 0.9, 0.8, 0.3, 0.1;
  y << 1, 1, 0, 0;
  CHECK(roc_auc(s, y).auc == doctest::Approx(1.0).epsilon(1e-15));
  y << 0, 0, 1, 1;
  CHECK(roc_auc(s, y).auc == doctest::Approx(0.0).epsilon(1e-15));
  y << 1, 0, 1, 0;
  // pairs: (0.9>0.8):1, (0.9>0.1):1, (0.3<0.8):0, (0.3>0.1):1 -> 3/4
  CHECK(roc_auc(s, y).auc == doctest::Approx(0.75).epsilon(1e-15));
  // all-tied scores give exactly one half
  Vector t = Vector::Constant(6, 0.4);
  IndexVector yt(6);
  yt << 1, 0, 1, 0, 1, 0;
  CHECK(roc_auc(t, yt).auc == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("auc properties: monotone invariance and label flip") {
  Rng rng(202);
  const Index n = 200;
  Vector s(n);
  IndexVector y(n);
  for (Index i = 0; i < n; ++i) {
    y[i] = rng.uniform() < 0.4 ? 1 : 0;
    s[i] = rng.normal() + (y[i] == 1 ? 0.8 : 0.0);
  }
  const double auc = roc_auc(s, y).auc;
  // strictly increasing transform preserves ranks
  Vector s2 = s;
  for (Index i = 0; i < n; ++i) s2[i] = std::atan(3.0 * s[i]) * 2.0 + 7.0;
  CHECK(roc_auc(s2, y).auc == doctest::Approx(auc).epsilon(1e-15));
  // flipping labels complements the statistic
  IndexVector flipped = y;
  for (Index i = 0; i < n; ++i) flipped[i] = 1 - y[i];
  CHECK(roc_auc(s, flipped).auc == doctest::Approx(1.0 - auc).epsilon(1e-12));
  // the trapezoid area under the returned curve equals the rank statistic
  const RocCurve curve = roc_auc(s, y);
  double area = 0.0;
  for (Index i = 0; i + 1 < curve.fpr.size(); ++i) {
    area += 0.5 * (curve.tpr[i] + curve.tpr[i + 1]) * (curve.fpr[i + 1] - curve.fpr[i]);
  }
  CHECK(area == doctest::Approx(curve.auc).epsilon(1e-12));
  CHECK(curve.fpr[0] == 0.0);
  CHECK(curve.tpr[0] == 0.0);
  CHECK(curve.fpr[curve.fpr.size() - 1] == 1.0);
  CHECK(curve.tpr[curve.tpr.size() - 1] == 1.0);

  IndexVector ones = IndexVector::Constant(n, 1);
  CHECK_THROWS_AS(roc_auc(s, ones), UserError);
}

TEST_CASE("cross-validation on strong signal scores well and fills the map") {
  const SynthData synth = synth_table(400, 41);
  SamplerOptions opts;
  opts.samples = 150;
  opts.chains = 2;
  opts.thin = 2;
  const CvReport report = cross_validate(synth.table, default_model_spec(), 5, 17, opts);
  REQUIRE(report.auc.size() == 5);
  CHECK(report.median_auc > 0.8);
  CHECK(report.skipped_folds.empty());
  CHECK(report.predicted.size() == 400);
  for (Index i = 0; i < 400; ++i) {
    REQUIRE(std::isfinite(report.predicted[i]));
    REQUIRE(report.predicted[i] > 0.0);
    REQUIRE(report.predicted[i] < 1.0);
  }
  CHECK(report.training_hashes.size() == 5);
  for (const auto& h : report.training_hashes) CHECK(h.size() == 16);
  // report is reproducible: same seed, same bytes
  const CvReport again = cross_validate(synth.table, default_model_spec(), 5, 17, opts);
  CHECK(serialize_cv_report(again) == serialize_cv_report(report));
}

TEST_CASE("error plot data sorts means and flags the tails") {
  SusceptibilitySummary s;
  s.su_ids = {1, 2, 3, 4};
  s.mean.resize(4);
  s.q025.resize(4);
  s.q975.resize(4);
  s.ci_width.resize(4);
  s.mean << 0.95, 0.05, 0.5, 0.45;
  s.ci_width << 0.1, 0.2, 0.4, 0.3;
  s.q025 = s.mean.array() - 0.01;
  s.q975 = s.mean.array() + 0.01;
  const ErrorPlotData d = error_plot_data(s);
  CHECK(std::is_sorted(d.mean.data(), d.mean.data() + d.mean.size()));
  CHECK(d.tail_count == 2);     // 0.05 and 0.95
  CHECK(d.central_count == 2);  // 0.5 and 0.45
}

TEST_CASE("frequency-area density integrates to one and finds the mode") {
  // two bins per decade spanning [1, 100): widths 1->sqrt(10)->10->...
  std::vector<double> areas;
  for (int i = 0; i < 30; ++i) areas.push_back(2.0);    // low bin
  for (int i = 0; i < 10; ++i) areas.push_back(50.0);   // high bin
  const FadResult fad = frequency_area(areas, 2);
  REQUIRE(!fad.bins.empty());
  double mass = 0.0;
  for (const FadBin& b : fad.bins) mass += b.density * (b.hi - b.lo);
  CHECK(std::abs(mass - 1.0) < 1e-9);
  CHECK(fad.n == 40);
  CHECK(fad.min_area == 2.0);
  // the dense low bin is the rollover (geometric mid of its bin)
  CHECK(fad.rollover ==
        doctest::Approx(std::sqrt(fad.bins[0].lo * fad.bins[0].hi)).epsilon(1e-12));
  CHECK_THROWS_AS(frequency_area({1.0, -2.0}), UserError);
  CHECK_THROWS_AS(frequency_area({}), UserError);

  // fewer than 20 areas: no rollover estimate
  const FadResult small = frequency_area({1.0, 2.0, 3.0, 10.0});
  CHECK(std::isnan(small.rollover));
}

TEST_CASE("serializers emit stable headers") {
  Vector s(4);
  IndexVector y(4);
  s << 0.9, 0.8, 0.3, 0.1;
  y << 1, 0, 1, 0;
  const std::string roc = serialize_roc_csv(roc_auc(s, y));
  CHECK(roc.rfind("fpr,tpr", 0) == 0);
  const FadResult fad = frequency_area({1.0, 2.0, 3.0, 10.0});
  CHECK(serialize_fad_csv(fad).rfind("lo,hi,count,density", 0) == 0);
}
