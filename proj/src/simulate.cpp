#include "sugam/simulate.hpp"

#include <algorithm>
#include <unordered_map>

#include "sugam/io.hpp"
#include "sugam/stats.hpp"

namespace sugam {

ScenarioField make_scenario_field(const std::string& name,
                                  const std::vector<int>& su_ids, const Vector& pga_g,
                                  const Standardization& calibration) {
  if (static_cast<Index>(su_ids.size()) != pga_g.size()) {
    throw InternalError("scenario field '" + name + "': id/value count mismatch");
  }
  for (Index i = 0; i < pga_g.size(); ++i) {
    if (pga_g[i] < 0.0) {
      throw UserError("scenario '" + name + "': negative PGA for SU " +
                      format_int(su_ids[static_cast<std::size_t>(i)]));
    }
  }
  ScenarioField field;
  field.name = name;
  field.su_ids = su_ids;
  field.pga_g = pga_g;
  field.pga_std = apply_standardization(pga_g, calibration);
  return field;
}

ScenarioField parse_scenario_csv(std::string_view text, const std::string& name,
                                 const std::vector<int>& expected_ids,
                                 const Standardization& calibration) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw UserError(name + ": empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() != 2 || header[0] != "su_id" || header[1] != "pga_g") {
    throw UserError(name + ": line 1: expected header 'su_id,pga_g'");
  }
  std::unordered_map<int, double> by_id;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string ctx = name + ": line " + format_int(static_cast<long long>(li) + 1);
    const auto toks = split_csv_line(lines[li]);
    if (toks.size() != 2) throw UserError(ctx + ": expected 2 fields");
    const auto id = static_cast<int>(parse_int(toks[0], ctx));
    if (!by_id.emplace(id, parse_double(toks[1], ctx)).second) {
      throw UserError(ctx + ": duplicate su_id " + format_int(id));
    }
  }

  std::string missing;
  Vector pga(static_cast<Index>(expected_ids.size()));
  for (std::size_t i = 0; i < expected_ids.size(); ++i) {
    const auto it = by_id.find(expected_ids[i]);
    if (it == by_id.end()) {
      missing += missing.empty() ? "" : ", ";
      missing += format_int(expected_ids[i]);
      continue;
    }
    pga[static_cast<Index>(i)] = it->second;
    by_id.erase(it);
  }
  if (!missing.empty()) {
    throw UserError(name + ": scenario is missing SU ids: " + missing);
  }
  if (!by_id.empty()) {
    std::string extra;
    for (const auto& [id, v] : by_id) {
      (void)v;
      extra += extra.empty() ? "" : ", ";
      extra += format_int(id);
    }
    throw UserError(name + ": scenario has unknown SU ids: " + extra);
  }
  return make_scenario_field(name, expected_ids, pga, calibration);
}

namespace {

ScenarioSimulation run_draws(const PosteriorSamples& samples, const DesignMatrix& design,
                             const std::vector<int>& su_ids, const std::string& name) {
  if (design.n != static_cast<Index>(su_ids.size())) {
    throw InternalError("simulation: design row count does not match SU ids");
  }
  const ParameterLayout L = layout_of(design);
  if (samples.draws.cols() != L.total) {
    throw UserError("simulation: posterior has " + format_int(samples.draws.cols()) +
                    " parameters, design needs " + format_int(L.total));
  }
  ScenarioSimulation sim;
  sim.name = name;
  sim.su_ids = su_ids;
  sim.susceptibility.resize(samples.draws.rows(), design.n);
  Vector params(L.total);
  for (Index s = 0; s < samples.draws.rows(); ++s) {
    params = samples.draws.row(s);
    const Vector eta = linear_predictor(params, design);
    for (Index i = 0; i < design.n; ++i) {
      sim.susceptibility(s, i) = inverse_logit(eta[i]);
    }
  }
  return sim;
}

}  // namespace

ScenarioSimulation simulate_reference(const PosteriorSamples& samples,
                                      const DesignMatrix& design,
                                      const std::vector<int>& su_ids) {
  return run_draws(samples, design, su_ids, "reference");
}

ScenarioSimulation swap_scenario(const PosteriorSamples& samples,
                                 const DesignMatrix& design,
                                 const ScenarioField& scenario,
                                 const std::string& pga_column) {
  const auto it = std::find(design.fixed_names.begin(), design.fixed_names.end(),
                            pga_column);
  if (it == design.fixed_names.end()) {
    throw UserError("swap_scenario: design has no fixed column '" + pga_column + "'");
  }
  if (scenario.su_ids.size() != static_cast<std::size_t>(design.n)) {
    throw UserError("swap_scenario: scenario '" + scenario.name + "' covers " +
                    format_int(static_cast<long long>(scenario.su_ids.size())) +
                    " SUs, design has " + format_int(design.n));
  }
  DesignMatrix swapped = design;
  swapped.X.col(it - design.fixed_names.begin()) = scenario.pga_std;
  return run_draws(samples, swapped, scenario.su_ids, scenario.name);
}

SusceptibilitySummary summarize_scenario(const ScenarioSimulation& sim) {
  const Index S = sim.susceptibility.rows();
  const Index N = sim.susceptibility.cols();
  if (S < 2) throw UserError("summarize_scenario: need at least 2 draws");
  SusceptibilitySummary out;
  out.name = sim.name;
  out.su_ids = sim.su_ids;
  out.mean.resize(N);
  out.q025.resize(N);
  out.q975.resize(N);
  out.ci_width.resize(N);
  std::vector<double> col(static_cast<std::size_t>(S));
  for (Index i = 0; i < N; ++i) {
    for (Index s = 0; s < S; ++s) col[static_cast<std::size_t>(s)] = sim.susceptibility(s, i);
    std::sort(col.begin(), col.end());
    double sum = 0.0;
    for (double x : col) sum += x;
    out.mean[i] = sum / static_cast<double>(S);
    out.q025[i] = quantile_of_sorted(col, 0.025);
    out.q975[i] = quantile_of_sorted(col, 0.975);
    out.ci_width[i] = out.q975[i] - out.q025[i];
  }
  return out;
}

CombinedSummary combine_scenarios(const std::vector<SusceptibilitySummary>& summaries) {
  if (summaries.size() < 2) {
    throw UserError("combine_scenarios: need at least 2 scenario summaries");
  }
  const auto& ids = summaries.front().su_ids;
  for (const auto& s : summaries) {
    if (s.su_ids != ids) {
      throw UserError("combine_scenarios: summary '" + s.name +
                      "' covers a different SU set");
    }
  }
  const auto N = static_cast<Index>(ids.size());
  CombinedSummary out;
  out.su_ids = ids;
  out.mean.resize(N);
  out.q025.resize(N);
  out.q975.resize(N);
  out.ci_width.resize(N);
  std::vector<double> vals(summaries.size());
  for (Index i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < summaries.size(); ++k) vals[k] = summaries[k].mean[i];
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double x : vals) sum += x;
    out.mean[i] = sum / static_cast<double>(vals.size());
    out.q025[i] = quantile_of_sorted(vals, 0.025);
    out.q975[i] = quantile_of_sorted(vals, 0.975);
    out.ci_width[i] = out.q975[i] - out.q025[i];
  }
  return out;
}

namespace {

std::string summary_rows(const std::vector<int>& su_ids, const Vector& mean,
                         const Vector& q025, const Vector& q975, const Vector& ci) {
  std::string out = "su_id,mean,q025,q975,ci_width\n";
  for (std::size_t i = 0; i < su_ids.size(); ++i) {
    const auto k = static_cast<Index>(i);
    out += format_int(su_ids[i]);
    out += ',';
    out += format_double(mean[k]);
    out += ',';
    out += format_double(q025[k]);
    out += ',';
    out += format_double(q975[k]);
    out += ',';
    out += format_double(ci[k]);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string serialize_summary_csv(const SusceptibilitySummary& summary) {
  return summary_rows(summary.su_ids, summary.mean, summary.q025, summary.q975,
                      summary.ci_width);
}

std::string serialize_combined_csv(const CombinedSummary& combined) {
  return summary_rows(combined.su_ids, combined.mean, combined.q025, combined.q975,
                      combined.ci_width);
}

SusceptibilitySummary parse_summary_csv(std::string_view text, const std::string& name) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw UserError(name + ": need a header and at least one row");
  if (lines[0] != "su_id,mean,q025,q975,ci_width") {
    throw UserError(name + ": line 1: expected header 'su_id,mean,q025,q975,ci_width'");
  }
  SusceptibilitySummary out;
  out.name = name;
  const auto N = static_cast<Index>(lines.size() - 1);
  out.mean.resize(N);
  out.q025.resize(N);
  out.q975.resize(N);
  out.ci_width.resize(N);
  for (Index i = 0; i < N; ++i) {
    const std::string ctx = name + ": line " + format_int(i + 2);
    const auto toks = split_csv_line(lines[static_cast<std::size_t>(i) + 1]);
    if (toks.size() != 5) throw UserError(ctx + ": expected 5 fields");
    out.su_ids.push_back(static_cast<int>(parse_int(toks[0], ctx)));
    out.mean[i] = parse_double(toks[1], ctx);
    out.q025[i] = parse_double(toks[2], ctx);
    out.q975[i] = parse_double(toks[3], ctx);
    out.ci_width[i] = parse_double(toks[4], ctx);
  }
  return out;
}

}  // namespace sugam
