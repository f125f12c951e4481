// Acceptance checks for the full pipeline. Each criterion prints one
// PASS/FAIL line; the process exits non-zero if any fail. Tolerances are
// pinned here, next to the checks that use them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "sugam/bedding.hpp"
#include "sugam/grid.hpp"
#include "sugam/io.hpp"
#include "sugam/model.hpp"
#include "sugam/rng.hpp"
#include "sugam/sampler.hpp"
#include "sugam/shakemap.hpp"
#include "sugam/simulate.hpp"
#include "sugam/stats.hpp"
#include "sugam/synthetic.hpp"
#include "sugam/table.hpp"
#include "sugam/validate.hpp"
#include "sugam/zonal.hpp"

using namespace sugam;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& label, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " " << criterion << " " << label << " ("
            << detail << ")\n";
  if (!pass) ++g_failures;
}

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

Index index_of(const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InternalError("missing parameter " + name);
  return it - names.begin();
}

// a one- or two-parameter logistic dataset for the quadrature oracle
struct SmallCase {
  DesignMatrix design;
  IndexVector labels;
  std::string label;
};

SmallCase intercept_case(Index n, Index npos) {
  SlopeUnitTable t;
  t.su_ids.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.su_ids[static_cast<std::size_t>(i)] = int(i) + 1;
  t.labels = IndexVector::Zero(n);
  for (Index i = 0; i < npos; ++i) t.labels[i] = 1;
  t.data.resize(n, 0);
  ModelSpec spec;
  return {build_design(t, spec), t.labels,
          "intercept " + format_int(npos) + "/" + format_int(n)};
}

SmallCase slope_case(Index n, double b0, double b1, std::uint64_t seed) {
  Rng rng(seed);
  SlopeUnitTable t;
  t.su_ids.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.su_ids[static_cast<std::size_t>(i)] = int(i) + 1;
  t.data.resize(n, 0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = rng.normal();
  t.add_column("x_std", standardize(x, "x").values);
  t.labels = IndexVector::Zero(n);
  const Vector xs = t.column("x_std");
  for (Index i = 0; i < n; ++i) {
    t.labels[i] = rng.uniform() < inverse_logit(b0 + b1 * xs[i]) ? 1 : 0;
  }
  ModelSpec spec;
  spec.fixed = {"x_std"};
  return {build_design(t, spec), t.labels, "intercept+slope n=" + format_int(n)};
}

void criterion_1_oracle() {
  Timer timer;
  std::vector<SmallCase> cases;
  cases.push_back(intercept_case(200, 60));
  cases.push_back(intercept_case(120, 30));
  cases.push_back(intercept_case(150, 105));
  cases.push_back(slope_case(150, -0.4, 1.2, 501));
  cases.push_back(slope_case(200, 0.6, -0.9, 502));
  cases.push_back(slope_case(100, -1.0, 0.5, 503));

  double worst = 0.0;
  bool pass = true;
  for (const auto& c : cases) {
    const OracleResult oracle = quadrature_oracle(c.design, c.labels);
    SamplerOptions opts;
    opts.samples = 4000;
    opts.chains = 2;
    opts.thin = 5;
    opts.seed = 99;
    const SampleResult res = sample_posterior(c.design, c.labels, opts);
    const MarginalSummary s = summarize_marginals(res.samples);
    for (Index j = 0; j < oracle.mean.size(); ++j) {
      const double rel_mean = std::abs(s.mean[j] - oracle.mean[j]) /
                              std::abs(oracle.mean[j]);
      const double rel_sd = std::abs(s.sd[j] - oracle.sd[j]) / oracle.sd[j];
      worst = std::max(worst, std::max(rel_mean, rel_sd));
      if (rel_mean > 0.05 || rel_sd > 0.05) pass = false;
    }
  }
  const double sec = timer.seconds();
  if (sec >= 30.0) pass = false;
  report(1, "oracle-equivalence", pass,
         format_int(static_cast<long long>(cases.size())) + " cases, worst rel err " +
             fmt(worst * 100) + "%, " + fmt(sec) + " s (limit 30)");
}

void criterion_2_recovery() {
  Timer timer;
  const double truth = 2.5;

  SamplerOptions opts;
  opts.samples = 500;
  opts.chains = 2;
  opts.thin = 20;
  opts.seed = 7;
  const SynthData primary = synth_table(1234, 1001);
  const SampleResult fit = sample_posterior(primary.design, primary.table.labels, opts);
  const Index pga = index_of(fit.samples.names, "PGA_mu_std");
  const MarginalSummary s = summarize_marginals(fit.samples);
  const double err = std::abs(s.mean[pga] - truth);
  const bool positive =
      classify_significance(fit.samples, "PGA_mu_std") == Significance::kPositive;

  Index covered = 0;
  SamplerOptions rep_opts;
  rep_opts.samples = 400;
  rep_opts.chains = 2;
  rep_opts.thin = 10;
  rep_opts.seed = 7;
  for (int r = 0; r < 20; ++r) {
    const SynthData rep = synth_table(1234, 2001 + static_cast<std::uint64_t>(r));
    const SampleResult rfit = sample_posterior(rep.design, rep.table.labels, rep_opts);
    const MarginalSummary rs = summarize_marginals(rfit.samples);
    const Index rj = index_of(rfit.samples.names, "PGA_mu_std");
    if (rs.q025[rj] <= truth && truth <= rs.q975[rj]) ++covered;
  }

  const double sec = timer.seconds();
  const bool pass = err <= 0.3 && positive && covered >= 16 && sec < 600.0;
  report(2, "synthetic-recovery", pass,
         "beta_PGA err " + fmt(err) + " (<=0.3), positive=" + (positive ? "yes" : "no") +
             ", coverage " + format_int(covered) + "/20 (>=16), " + fmt(sec) +
             " s (limit 600)");
}

void criterion_3_shortcut_recompute() {
  const SynthData synth = synth_table(50, 3003);
  const auto names = parameter_names(synth.design);
  const ParameterLayout layout = layout_of(synth.design);

  Rng rng(31);
  PosteriorSamples fake;
  fake.names = names;
  fake.draws.resize(1000, layout.total);
  for (Index s = 0; s < fake.draws.rows(); ++s) {
    for (Index j = 0; j < fake.draws.cols(); ++j) fake.draws(s, j) = 0.3 * rng.normal();
  }

  Vector pga(50);
  for (Index i = 0; i < 50; ++i) pga[i] = 0.02 + 0.38 * rng.uniform();
  const Standardization cal =
      standardize(synth.table.column("PGA_mu"), "PGA_mu").stats;
  const ScenarioField field =
      make_scenario_field("x", synth.table.su_ids, pga, cal);

  const ScenarioSimulation swapped =
      swap_scenario(fake, synth.design, field, "PGA_mu_std");

  // independent full recomputation through the same pinned predictor
  DesignMatrix manual = synth.design;
  const Index col = index_of(manual.fixed_names, "PGA_mu_std");
  manual.X.col(col) = field.pga_std;
  Index exact = 0;
  for (Index s = 0; s < fake.draws.rows(); ++s) {
    const Vector params = fake.draws.row(s).transpose();
    const Vector eta = linear_predictor(params, manual);
    for (Index i = 0; i < eta.size(); ++i) {
      if (inverse_logit(eta[i]) == swapped.susceptibility(s, i)) ++exact;
    }
  }
  const Index total = fake.draws.rows() * 50;
  report(3, "shortcut-recompute-equivalence", exact == total,
         format_int(exact) + "/" + format_int(total) + " values bitwise equal");
}

void criterion_4_scenario_identity() {
  const SynthData synth = synth_table(150, 4004);
  SamplerOptions opts;
  opts.samples = 200;
  opts.chains = 2;
  opts.thin = 5;
  opts.seed = 12;
  const SampleResult fit = sample_posterior(synth.design, synth.table.labels, opts);
  const ScenarioSimulation ref =
      simulate_reference(fit.samples, synth.design, synth.table.su_ids);
  const Standardization cal =
      standardize(synth.table.column("PGA_mu"), "PGA_mu").stats;
  const ScenarioField same = make_scenario_field(
      "calibration", synth.table.su_ids, synth.table.column("PGA_mu"), cal);
  const ScenarioSimulation swapped =
      swap_scenario(fit.samples, synth.design, same, "PGA_mu_std");
  const bool equal = (swapped.susceptibility.array() == ref.susceptibility.array()).all();
  report(4, "scenario-identity", equal,
         format_int(ref.susceptibility.size()) + " values bit-for-bit");
}

void criterion_5_cv() {
  Timer timer;
  const SynthData synth = synth_table(1200, 3001);
  SamplerOptions opts;
  opts.samples = 500;
  opts.chains = 2;
  opts.thin = 10;
  const CvReport report_true =
      cross_validate(synth.table, default_model_spec(), 10, 55, opts);
  const double spread = report_true.max_auc - report_true.min_auc;

  SlopeUnitTable permuted = synth.table;
  Rng rng(66);
  for (Index i = permuted.labels.size(); i > 1; --i) {
    const Index j = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(i)));
    std::swap(permuted.labels[i - 1], permuted.labels[j]);
  }
  const CvReport report_null =
      cross_validate(permuted, default_model_spec(), 10, 55, opts);

  const double sec = timer.seconds();
  const bool pass = report_true.median_auc > 0.9 && spread < 0.15 &&
                    report_null.median_auc >= 0.45 && report_null.median_auc <= 0.55 &&
                    sec < 900.0;
  report(5, "cv-sanity", pass,
         "median AUC " + fmt(report_true.median_auc) + " (>0.9), spread " + fmt(spread) +
             " (<0.15), permuted median " + fmt(report_null.median_auc) +
             " (in [0.45,0.55]), " + fmt(sec) + " s (limit 900)");
}

void criterion_6_gradient() {
  const SynthData synth = synth_table(60, 6006);
  const ParameterLayout layout = layout_of(synth.design);
  Rng rng(17);
  double worst = 0.0;
  int points = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Vector p(layout.total);
    for (Index i = 0; i < p.size(); ++i) p[i] = 0.5 * rng.normal();
    const LogPosterior lp = log_posterior(p, synth.design, synth.table.labels);
    for (Index j = 0; j < p.size(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
      Vector hi = p, lo = p;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (log_posterior(hi, synth.design, synth.table.labels).value -
                         log_posterior(lo, synth.design, synth.table.labels).value) /
                        (2 * h);
      worst = std::max(worst,
                       std::abs(lp.gradient[j] - fd) / std::max(1.0, std::abs(fd)));
    }
    ++points;
  }
  report(6, "gradient-correctness", worst < 1e-5 && points == 100,
         format_int(points) + " points, worst rel err " + fmt(worst));
}

void criterion_7_rw1_contract() {
  const SynthData synth = synth_table(300, 7007);
  SamplerOptions opts;
  opts.samples = 400;
  opts.chains = 2;
  opts.thin = 5;
  opts.seed = 3;
  const SampleResult fit = sample_posterior(synth.design, synth.table.labels, opts);
  const ParameterLayout layout = layout_of(synth.design);
  double worst_sum = 0.0;
  for (const auto& block : layout.rw1_blocks) {
    for (Index s = 0; s < fit.samples.draws.rows(); ++s) {
      worst_sum = std::max(
          worst_sum,
          std::abs(fit.samples.draws.row(s).segment(block.start, block.size).sum()));
    }
  }

  // shift invariance of the increment penalty, isolated from the likelihood
  Rng rng(19);
  Vector p = Vector::Zero(layout.total);
  for (Index i = 0; i < p.size(); ++i) p[i] = 0.4 * rng.normal();
  Vector shifted = p;
  shifted.segment(layout.rw1_blocks[0].start, layout.rw1_blocks[0].size).array() += 2.5;
  const double prior_a =
      log_posterior(p, synth.design, synth.table.labels).value -
      log_likelihood(linear_predictor(p, synth.design), synth.table.labels);
  const double prior_b =
      log_posterior(shifted, synth.design, synth.table.labels).value -
      log_likelihood(linear_predictor(shifted, synth.design), synth.table.labels);
  const double shift_err =
      std::abs(prior_a - prior_b) / std::max(1.0, std::abs(prior_a));

  const bool pass = worst_sum < 1e-8 && shift_err < 1e-12;
  report(7, "rw1-contract", pass,
         "worst draw sum " + fmt(worst_sum) + " (<1e-8), shift err " + fmt(shift_err) +
             " (<1e-12)");
}

void criterion_8_ingest_properties() {
  bool pass = true;
  std::string detail;

  // bedding totality and symmetry on 1000+ random angle pairs
  Rng rng(2025);
  for (int i = 0; i < 1500; ++i) {
    const double a = rng.uniform() * 360.0;
    const double d = rng.uniform() * 360.0;
    const int b = classify_bedding(a, d);
    if (b < 1 || b > 5 || classify_bedding(d, a) != b) {
      pass = false;
      detail = "bedding property violated";
      break;
    }
  }
  // worked examples
  if (classify_bedding(90.0, 0.0) != 1 || classify_bedding(0.0, 0.0) != 4 ||
      classify_bedding(200.0, 20.0) != 2) {
    pass = false;
    detail = "bedding worked examples";
  }

  // standardization: mean 0, sd 1, and re-application is bitwise
  Vector x(257);
  for (Index i = 0; i < x.size(); ++i) x[i] = 40.0 + 9.0 * rng.normal();
  const StandardizeResult sr = standardize(x, "x");
  if (!is_standardized(sr.values)) {
    pass = false;
    detail = "standardize moments";
  }
  for (Index i = 0; i < x.size(); ++i) {
    if (sr.values[i] != apply_standardization(x[i], sr.stats)) {
      pass = false;
      detail = "standardize bitwise re-application";
      break;
    }
  }

  // zonal sums ignore traversal order
  std::vector<double> cells;
  for (int i = 0; i < 301; ++i) cells.push_back((rng.uniform() - 0.5) * 1e7);
  std::vector<double> shuffled = cells;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.uniform_int(i)]);
  }
  if (sorted_sum(cells) != sorted_sum(shuffled)) {
    pass = false;
    detail = "zonal permutation invariance";
  }

  // majority ties resolve to the lowest code
  IntGrid part_grid;
  part_grid.xllcorner = 0;
  part_grid.yllcorner = 0;
  part_grid.cellsize = 1;
  part_grid.nodata = -9999;
  part_grid.values.resize(1, 4);
  part_grid.values << 1, 1, 1, 1;
  IntGrid classes = part_grid;
  classes.values << 9, 5, 9, 5;
  const SuPartition part = SuPartition::from_grid(part_grid);
  if (majority_class(classes, part) != std::vector<int>{5}) {
    pass = false;
    detail = "majority tie break";
  }

  if (pass) detail = "bedding x1500, standardization, zonal order, majority ties";
  report(8, "ingest-properties", pass, detail);
}

void criterion_9_parsers() {
  bool pass = true;
  std::string detail;

  // ascii grid: parse -> serialize -> parse is a fixed point
  Rng rng(331);
  DoubleGrid g;
  g.xllcorner = 103.775;
  g.yllcorner = 32.25;
  g.cellsize = 0.013;
  g.nodata = -9999;
  g.values.resize(7, 11);
  for (Index r = 0; r < g.nrows(); ++r) {
    for (Index c = 0; c < g.ncols(); ++c) {
      g.values(r, c) = rng.uniform() < 0.1 ? g.nodata : (rng.normal() * 1234.5);
    }
  }
  const std::string s1 = serialize_ascii_grid(g);
  const auto g2 = parse_ascii_grid<double>(s1, "g");
  if (serialize_ascii_grid(g2) != s1) {
    pass = false;
    detail = "ascii grid fixed point";
  }

  // shakemap built to the 1933 extremes: percent-g 3..7 maps to 0.03..0.07 g
  std::string xml =
      "<shakemap_grid><grid_specification lon_min=\"103.7\" lat_min=\"32.9\" "
      "lon_max=\"103.9\" lat_max=\"33.1\" nlon=\"3\" nlat=\"3\"/>"
      "<grid_field index=\"1\" name=\"LON\" units=\"dd\"/>"
      "<grid_field index=\"2\" name=\"LAT\" units=\"dd\"/>"
      "<grid_field index=\"3\" name=\"PGA\" units=\"%g\"/><grid_data>\n";
  const double pct[9] = {3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0};
  int k = 0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      xml += format_double(103.7 + 0.1 * c) + " " + format_double(33.1 - 0.1 * r) + " " +
             format_double(pct[k++]) + "\n";
    }
  }
  xml += "</grid_data></shakemap_grid>";
  const DoubleGrid sm = parse_shakemap_grid(xml, "sm");
  const double lo = sm.values.minCoeff(), hi = sm.values.maxCoeff();
  if (std::abs(lo - 0.03) > 1e-12 || std::abs(hi - 0.07) > 1e-12) {
    pass = false;
    detail = "shakemap bounds " + fmt(lo) + ".." + fmt(hi);
  }

  if (pass) detail = "grid fixed point; percent-g bounds 0.03 < PGA < 0.07 exact";
  report(9, "parser-round-trips", pass, detail);
}

void criterion_10_fad() {
  // heavy-tailed areas with density mode at 100 m^2 (inverse-gamma:
  // shape 1.4, scale 240 has its mode at 240 / 2.4 = 100)
  Rng rng(777);
  std::vector<double> areas;
  for (int i = 0; i < 600; ++i) areas.push_back(1.0 / rng.gamma(1.4, 240.0));
  const FadResult fad = frequency_area(areas);

  double mass = 0.0;
  Index bin_100 = -1, bin_roll = -1;
  for (std::size_t b = 0; b < fad.bins.size(); ++b) {
    mass += fad.bins[b].density * (fad.bins[b].hi - fad.bins[b].lo);
    if (fad.bins[b].lo <= 100.0 && 100.0 < fad.bins[b].hi) bin_100 = Index(b);
    if (fad.bins[b].lo <= fad.rollover && fad.rollover < fad.bins[b].hi)
      bin_roll = Index(b);
  }
  const bool norm_ok = std::abs(mass - 1.0) < 1e-9;
  const bool roll_ok = bin_100 >= 0 && bin_roll >= 0 && std::abs(bin_100 - bin_roll) <= 1;
  report(10, "fad-rollover", norm_ok && roll_ok,
         "rollover " + fmt(fad.rollover) + " m^2, " + format_int(std::abs(bin_100 - bin_roll)) +
             " bins from 100 m^2, density mass err " + fmt(std::abs(mass - 1.0)));
}

void criterion_11_combined_map() {
  const SynthData synth = synth_table(80, 1101);
  SamplerOptions opts;
  opts.samples = 100;
  opts.chains = 2;
  opts.thin = 2;
  opts.seed = 5;
  const SampleResult fit = sample_posterior(synth.design, synth.table.labels, opts);
  const Standardization cal =
      standardize(synth.table.column("PGA_mu"), "PGA_mu").stats;

  std::vector<SusceptibilitySummary> sums;
  for (int k = 0; k < 8; ++k) {
    const double scale = 0.25 + 0.2 * k;
    const Vector pga = (synth.table.column("PGA_mu").array() * scale).matrix();
    const ScenarioField field = make_scenario_field(
        "s" + format_int(k), synth.table.su_ids, pga, cal);
    sums.push_back(
        summarize_scenario(swap_scenario(fit.samples, synth.design, field, "PGA_mu_std")));
  }
  const CombinedSummary combined = combine_scenarios(sums);

  bool pass = true;
  for (Index i = 0; i < 80 && pass; ++i) {
    double lo = 1e300, hi = -1e300;
    for (const auto& s : sums) {
      lo = std::min(lo, s.mean[i]);
      hi = std::max(hi, s.mean[i]);
    }
    if (!(combined.q025[i] <= combined.q975[i])) pass = false;
    if (combined.mean[i] < lo || combined.mean[i] > hi) pass = false;
  }

  std::vector<SusceptibilitySummary> reversed(sums.rbegin(), sums.rend());
  const CombinedSummary combined2 = combine_scenarios(reversed);
  if (!(combined2.mean.array() == combined.mean.array()).all() ||
      !(combined2.q025.array() == combined.q025.array()).all() ||
      !(combined2.q975.array() == combined.q975.array()).all()) {
    pass = false;
  }
  report(11, "combined-map-invariants", pass,
         "8 scenarios x 80 SUs: interval order, mean bounds, permutation invariance");
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool run_demo(const std::string& dir) {
  const std::string cli = SUGAM_CLI_PATH;
  const std::string synth = SUGAM_SYNTH_PATH;
  if (run_cmd(synth + " --out " + dir + " --seed 20170808") != 0) return false;
  const std::string cfg = " --config " + dir + "/config.json";
  for (const std::string cmd : {"ingest", "fit", "validate", "simulate"}) {
    if (run_cmd(cli + " " + cmd + cfg) != 0) return false;
  }
  return run_cmd(cli + " fad --areas " + dir + "/areas.csv --out " + dir +
                 "/out/fad.csv") == 0;
}

void criterion_12_reproducibility() {
  Timer timer;
  const fs::path dir = fs::temp_directory_path() / "sugam_acceptance_demo";
  fs::remove_all(dir);
  bool pass = run_demo(dir.string());

  const fs::path first = dir / "out_first_run";
  if (pass) {
    fs::rename(dir / "out", first);
    pass = run_demo(dir.string());  // same directory, same commands
  }

  Index files = 0;
  std::string mismatch;
  if (pass) {
    for (const auto& entry : fs::recursive_directory_iterator(first)) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), first);
      const fs::path other = dir / "out" / rel;
      if (!fs::exists(other) ||
          read_text_file(entry.path().string()) != read_text_file(other.string())) {
        pass = false;
        mismatch = rel.string();
        break;
      }
      ++files;
    }
  }
  report(12, "demo-reproducibility", pass,
         pass ? format_int(files) + " files byte-identical, " + fmt(timer.seconds()) + " s"
              : (mismatch.empty() ? "pipeline run failed" : "differs: " + mismatch));
}

}  // namespace

int main() {
  criterion_1_oracle();
  criterion_2_recovery();
  criterion_3_shortcut_recompute();
  criterion_4_scenario_identity();
  criterion_5_cv();
  criterion_6_gradient();
  criterion_7_rw1_contract();
  criterion_8_ingest_properties();
  criterion_9_parsers();
  criterion_10_fad();
  criterion_11_combined_map();
  criterion_12_reproducibility();
  if (g_failures > 0) {
    std::cout << g_failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all 12 criteria passed\n";
  return 0;
}
