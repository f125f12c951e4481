#include "sugam/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "sugam/bedding.hpp"
#include "sugam/io.hpp"
#include "sugam/shakemap.hpp"
#include "sugam/stats.hpp"
#include "sugam/svg.hpp"

namespace sugam {

namespace {

std::string dirname_of(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path().string();
  return parent.empty() ? std::string(".") : parent;
}

bool is_absolute(const std::string& path) {
  return std::filesystem::path(path).is_absolute();
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("scenario") : out;
}

// Every artifact gets a sibling <name>.meta.json recording what produced
// it. Deliberately no timestamps: reruns must be byte-identical.
void write_artifact(const std::string& path, std::string_view content,
                    const std::string& command, std::uint64_t seed,
                    const std::vector<std::pair<std::string, std::string>>& inputs) {
  write_text_file(path, content);
  nlohmann::json meta;
  meta["command"] = command;
  meta["seed"] = seed;
  meta["tool"] = "sugam";
  meta["version"] = kVersion;
  auto in = nlohmann::json::object();
  for (const auto& [display, resolved] : inputs) in[display] = hash_file_hex(resolved);
  meta["inputs"] = in;
  write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

void ensure_out_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.resolve(config.out_dir));
}

const std::string& require_field(const std::string& value, const char* field) {
  if (value.empty()) {
    throw UserError(std::string("config: missing required field '") + field + "'");
  }
  return value;
}

}  // namespace

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty() || is_absolute(path) || base_dir.empty()) return path;
  return base_dir + "/" + path;
}

std::string RunConfig::out_path(const std::string& name) const {
  return resolve(out_dir) + "/" + name;
}

RunConfig parse_run_config(std::string_view text, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UserError(path + ": " + e.what());
  }
  RunConfig config;
  config.base_dir = dirname_of(path);
  try {
    const auto str = [&](const char* key, std::string& into) {
      if (doc.contains(key)) into = doc[key].get<std::string>();
    };
    str("partition", config.partition);
    str("aspect", config.aspect);
    str("dip_direction", config.dip_direction);
    str("centroids", config.centroids);
    str("reference_shakemap", config.reference_shakemap);
    str("model_spec", config.model_spec);
    str("out", config.out_dir);
    if (doc.contains("rasters")) {
      config.rasters = doc["rasters"].get<std::map<std::string, std::string>>();
    }
    if (doc.contains("categorical")) {
      config.categorical = doc["categorical"].get<std::map<std::string, std::string>>();
    }
    if (doc.contains("scenarios")) {
      config.scenarios = doc["scenarios"].get<std::map<std::string, std::string>>();
    }
    const auto num = [&](const char* key, Index& into) {
      if (doc.contains(key)) into = doc[key].get<Index>();
    };
    num("samples", config.samples);
    num("chains", config.chains);
    num("thin", config.thin);
    num("folds", config.folds);
    num("threads", config.threads);
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw UserError(path + ": " + e.what());
  }
  if (config.samples < 1) throw UserError(path + ": samples must be >= 1");
  if (config.chains < 1) throw UserError(path + ": chains must be >= 1");
  if (config.thin < 1) throw UserError(path + ": thin must be >= 1");
  return config;
}

RunConfig read_run_config(const std::string& path) {
  return parse_run_config(read_text_file(path), path);
}

ModelSpec load_model_spec(const RunConfig& config) {
  if (config.model_spec.empty()) return default_model_spec();
  return read_model_spec(config.resolve(config.model_spec));
}

IngestResult ingest_tables(const RunConfig& config) {
  IngestResult result;
  result.part = SuPartition::from_grid(
      read_ascii_grid<int>(config.resolve(require_field(config.partition, "partition"))));
  const auto& part = result.part;

  auto& table = result.table;
  table.su_ids = part.ids;
  table.labels = IndexVector::Zero(part.size());
  table.data.resize(part.size(), 0);

  std::vector<std::string> continuous;
  const auto add_continuous = [&](const std::string& name, const Vector& values) {
    table.add_column(name, values);
    continuous.push_back(name);
  };

  for (const auto& [name, path] : config.rasters) {
    const DoubleGrid grid = read_ascii_grid<double>(config.resolve(path));
    require_same_geometry(grid, part.grid, name);
    add_continuous(name + "_mu", aggregate_to_su(grid, part, ZonalStat::kMean));
    add_continuous(name + "_sigma", aggregate_to_su(grid, part, ZonalStat::kSd));
  }

  if (!config.reference_shakemap.empty()) {
    const DoubleGrid shakemap =
        read_shakemap_grid(config.resolve(config.reference_shakemap));
    const DoubleGrid pga = resample_like(shakemap, part.grid);
    add_continuous("PGA_mu", aggregate_to_su(pga, part, ZonalStat::kMean));
    add_continuous("PGA_sigma", aggregate_to_su(pga, part, ZonalStat::kSd));
  }

  for (const auto& [name, path] : config.categorical) {
    const IntGrid grid = read_ascii_grid<int>(config.resolve(path));
    require_same_geometry(grid, part.grid, name);
    const auto classes = majority_class(grid, part);
    Vector col(part.size());
    for (Index i = 0; i < part.size(); ++i) col[i] = classes[static_cast<std::size_t>(i)];
    table.add_column(name, col);
  }

  if (config.aspect.empty() != config.dip_direction.empty()) {
    throw UserError("config: aspect and dip_direction must be given together");
  }
  if (!config.aspect.empty()) {
    const DoubleGrid aspect = read_ascii_grid<double>(config.resolve(config.aspect));
    const DoubleGrid dipdir =
        read_ascii_grid<double>(config.resolve(config.dip_direction));
    require_same_geometry(aspect, part.grid, "aspect");
    require_same_geometry(dipdir, part.grid, "dip_direction");
    IntGrid bed;
    bed.xllcorner = aspect.xllcorner;
    bed.yllcorner = aspect.yllcorner;
    bed.cellsize = aspect.cellsize;
    bed.nodata = -9999;
    bed.values.resize(aspect.nrows(), aspect.ncols());
    for (Index r = 0; r < aspect.nrows(); ++r) {
      for (Index c = 0; c < aspect.ncols(); ++c) {
        bed.values(r, c) = (aspect.is_nodata(r, c) || dipdir.is_nodata(r, c))
                               ? bed.nodata
                               : classify_bedding(aspect.values(r, c), dipdir.values(r, c));
      }
    }
    const auto classes = majority_class(bed, part);
    Vector col(part.size());
    for (Index i = 0; i < part.size(); ++i) col[i] = classes[static_cast<std::size_t>(i)];
    table.add_column("B", col);
  }

  if (!config.centroids.empty()) {
    const auto centroids = parse_centroids_csv(
        read_text_file(config.resolve(config.centroids)), config.centroids);
    const LabelResult labels = label_su(centroids, part);
    table.labels = labels.labels;
    result.dropped_centroids = labels.dropped;
    result.empty_centroids = labels.empty_input;
  } else {
    result.empty_centroids = true;
  }

  for (const auto& name : continuous) {
    const StandardizeResult std_col = standardize(table.column(name), name);
    table.add_column(name + "_std", std_col.values);
    result.stats[name] = std_col.stats;
  }
  return result;
}

void run_ingest(const RunConfig& config) {
  const IngestResult result = ingest_tables(config);
  if (result.empty_centroids) {
    std::cerr << "warning: no centroids given, all labels are 0\n";
  } else if (result.dropped_centroids > 0) {
    std::cerr << "warning: " << result.dropped_centroids
              << " centroid(s) outside the partition or on nodata cells, dropped\n";
  }
  ensure_out_dir(config);

  std::vector<std::pair<std::string, std::string>> inputs;
  inputs.emplace_back(config.partition, config.resolve(config.partition));
  for (const auto& [name, path] : config.rasters) {
    (void)name;
    inputs.emplace_back(path, config.resolve(path));
  }
  for (const auto& [name, path] : config.categorical) {
    (void)name;
    inputs.emplace_back(path, config.resolve(path));
  }
  if (!config.aspect.empty()) {
    inputs.emplace_back(config.aspect, config.resolve(config.aspect));
    inputs.emplace_back(config.dip_direction, config.resolve(config.dip_direction));
  }
  if (!config.reference_shakemap.empty()) {
    inputs.emplace_back(config.reference_shakemap, config.resolve(config.reference_shakemap));
  }
  if (!config.centroids.empty()) {
    inputs.emplace_back(config.centroids, config.resolve(config.centroids));
  }

  write_artifact(config.out_path("su_table.csv"), serialize_su_table(result.table),
                 "ingest", config.seed, inputs);
  write_artifact(config.out_path("standardization.json"),
                 serialize_standardization(result.stats), "ingest", config.seed, inputs);
  std::cout << "ingested " << result.table.n() << " slope units, "
            << result.table.labels.sum() << " with landslides\n";
}

namespace {

struct FitInputs {
  SlopeUnitTable table;
  ModelSpec spec;
  std::vector<std::pair<std::string, std::string>> hashes;
  std::string table_path;
};

FitInputs load_fit_inputs(const RunConfig& config) {
  FitInputs in;
  in.table_path = config.out_path("su_table.csv");
  in.table = read_su_table(in.table_path);
  in.spec = load_model_spec(config);
  in.hashes.emplace_back("su_table.csv", in.table_path);
  if (!config.model_spec.empty()) {
    in.hashes.emplace_back(config.model_spec, config.resolve(config.model_spec));
  }
  return in;
}

}  // namespace

void run_fit(const RunConfig& config) {
  FitInputs in = load_fit_inputs(config);
  const DesignMatrix design = build_design(in.table, in.spec);

  SamplerOptions opts;
  opts.samples = config.samples;
  opts.chains = config.chains;
  opts.thin = config.thin;
  opts.seed = config.seed;
  opts.threads = config.threads;
  const SampleResult fit = sample_posterior(design, in.table.labels, opts);

  ensure_out_dir(config);
  write_artifact(config.out_path("posterior.csv"), serialize_posterior_csv(fit.samples),
                 "fit", config.seed, in.hashes);
  write_artifact(config.out_path("diagnostics.json"),
                 serialize_diagnostics(fit.diagnostics), "fit", config.seed, in.hashes);

  const MarginalSummary summary = summarize_marginals(fit.samples);
  std::cout << "term,mean,sd,q025,q975,significance\n";
  const ParameterLayout layout = layout_of(design);
  for (Index p = 0; p <= layout.n_fixed; ++p) {
    const Significance sig = classify_significance(fit.samples, summary.names[p]);
    std::cout << summary.names[static_cast<std::size_t>(p)] << ','
              << format_double(summary.mean[p]) << ',' << format_double(summary.sd[p])
              << ',' << format_double(summary.q025[p]) << ','
              << format_double(summary.q975[p]) << ',' << significance_name(sig) << "\n";
  }
  for (const auto& w : fit.diagnostics.warnings) std::cerr << "warning: " << w << "\n";
  if (fit.diagnostics.diverged) {
    throw InternalError("inference diverged; diagnostics written to " +
                        config.out_path("diagnostics.json"));
  }
}

void run_validate(const RunConfig& config) {
  FitInputs in = load_fit_inputs(config);

  SamplerOptions opts;
  opts.samples = config.samples;
  opts.chains = config.chains;
  opts.thin = config.thin;
  opts.threads = config.threads;
  const CvReport report =
      cross_validate(in.table, in.spec, config.folds, config.seed, opts);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  ensure_out_dir(config);
  write_artifact(config.out_path("cv_report.json"), serialize_cv_report(report),
                 "validate", config.seed, in.hashes);
  for (std::size_t i = 0; i < report.curves.size(); ++i) {
    write_artifact(config.out_path("roc_" + format_int(report.fold_ids[i]) + ".csv"),
                   serialize_roc_csv(report.curves[i]), "validate", config.seed,
                   in.hashes);
  }
  write_artifact(config.out_path("roc.svg"),
                 roc_svg(report.curves, report.fold_ids, report.auc), "validate",
                 config.seed, in.hashes);

  std::string pred = "su_id,fold,predicted\n";
  for (Index i = 0; i < in.table.n(); ++i) {
    pred += format_int(in.table.su_ids[static_cast<std::size_t>(i)]);
    pred += ',';
    pred += format_int(report.folds.fold[static_cast<std::size_t>(i)]);
    pred += ',';
    pred += format_double(report.predicted[i]);
    pred += '\n';
  }
  write_artifact(config.out_path("cv_predictions.csv"), pred, "validate", config.seed,
                 in.hashes);

  std::cout << "cv folds scored: " << report.auc.size() << "  median AUC "
            << format_double(report.median_auc) << "  IQR "
            << format_double(report.iqr_auc) << "  min "
            << format_double(report.min_auc) << "  max "
            << format_double(report.max_auc) << "\n";
}

namespace {

ScenarioField scenario_from_path(const RunConfig& config, const std::string& name,
                                 const std::string& path, const SuPartition& part,
                                 const std::vector<int>& ids,
                                 const Standardization& calibration) {
  const std::string resolved = config.resolve(path);
  if (resolved.size() >= 4 && to_lower(resolved.substr(resolved.size() - 4)) == ".xml") {
    const DoubleGrid pga = resample_like(read_shakemap_grid(resolved), part.grid);
    return make_scenario_field(name, ids, aggregate_to_su(pga, part, ZonalStat::kMean),
                               calibration);
  }
  return parse_scenario_csv(read_text_file(resolved), name, ids, calibration);
}

void write_map(const RunConfig& config, const std::string& file, const SuPartition& part,
               const Vector& values, const std::string& title, double vmin, double vmax,
               std::uint64_t seed,
               const std::vector<std::pair<std::string, std::string>>& inputs) {
  write_artifact(config.out_path(file), su_map_svg(part, values, title, vmin, vmax),
                 "simulate", seed, inputs);
}

}  // namespace

void run_simulate(const RunConfig& config) {
  FitInputs in = load_fit_inputs(config);
  const DesignMatrix design = build_design(in.table, in.spec);
  const std::string posterior_path = config.out_path("posterior.csv");
  PosteriorSamples samples = read_posterior_csv(posterior_path);
  const auto expected_names = parameter_names(design);
  if (samples.names != expected_names) {
    throw UserError("posterior.csv parameters do not match the design; refit first");
  }
  const StandardizationMap stats = read_standardization(
      config.out_path("standardization.json"));
  const auto calib_it = stats.find("PGA_mu");
  if (calib_it == stats.end()) {
    throw UserError("standardization.json has no PGA_mu entry; re-run ingest with a "
                    "reference ShakeMap");
  }
  const SuPartition part = SuPartition::from_grid(
      read_ascii_grid<int>(config.resolve(require_field(config.partition, "partition"))));
  if (part.ids != in.table.su_ids) {
    throw UserError("partition SU ids do not match su_table.csv");
  }

  auto inputs = in.hashes;
  inputs.emplace_back("posterior.csv", posterior_path);
  inputs.emplace_back("standardization.json", config.out_path("standardization.json"));

  ensure_out_dir(config);
  const ScenarioSimulation ref_sim =
      simulate_reference(samples, design, in.table.su_ids);
  const SusceptibilitySummary ref_summary = summarize_scenario(ref_sim);
  write_artifact(config.out_path("reference_summary.csv"),
                 serialize_summary_csv(ref_summary), "simulate", config.seed, inputs);
  write_map(config, "map_reference_mean.svg", part, ref_summary.mean,
            "reference mean susceptibility", 0.0, 1.0, config.seed, inputs);
  write_map(config, "map_reference_ci.svg", part, ref_summary.ci_width,
            "reference 95% CI width", 0.0, 1.0, config.seed, inputs);
  const ErrorPlotData err = error_plot_data(ref_summary);
  write_artifact(config.out_path("error_plot.svg"),
                 error_plot_svg(err, "susceptibility mean vs 95% CI width"), "simulate",
                 config.seed, inputs);

  std::vector<SusceptibilitySummary> summaries{ref_summary};
  std::cout << "scenario,area_mean_susceptibility\n";
  std::cout << "reference," << format_double(ref_summary.mean.mean()) << "\n";
  for (const auto& [name, path] : config.scenarios) {
    const ScenarioField field = scenario_from_path(config, name, path, part,
                                                   in.table.su_ids, calib_it->second);
    auto scen_inputs = inputs;
    scen_inputs.emplace_back(path, config.resolve(path));
    const ScenarioSimulation sim =
        swap_scenario(samples, design, field, "PGA_mu_std");
    const SusceptibilitySummary summary = summarize_scenario(sim);
    const std::string stem = sanitize_name(name);
    write_artifact(config.out_path(stem + "_summary.csv"),
                   serialize_summary_csv(summary), "simulate", config.seed, scen_inputs);
    write_map(config, "map_" + stem + "_mean.svg", part, summary.mean,
              name + " mean susceptibility", 0.0, 1.0, config.seed, scen_inputs);
    write_map(config, "map_" + stem + "_ci.svg", part, summary.ci_width,
              name + " 95% CI width", 0.0, 1.0, config.seed, scen_inputs);
    std::cout << name << ',' << format_double(summary.mean.mean()) << "\n";
    summaries.push_back(summary);
  }

  if (summaries.size() >= 2) {
    const CombinedSummary combined = combine_scenarios(summaries);
    write_artifact(config.out_path("combined.csv"), serialize_combined_csv(combined),
                   "simulate", config.seed, inputs);
    write_map(config, "map_combined_mean.svg", part, combined.mean,
              "combined mean susceptibility", 0.0, 1.0, config.seed, inputs);
    write_map(config, "map_combined_q025.svg", part, combined.q025,
              "combined quantile 0.025", 0.0, 1.0, config.seed, inputs);
    write_map(config, "map_combined_q975.svg", part, combined.q975,
              "combined quantile 0.975", 0.0, 1.0, config.seed, inputs);
  }
}

void run_combine(const RunConfig& config) {
  std::vector<SusceptibilitySummary> summaries;
  std::vector<std::pair<std::string, std::string>> inputs;
  const auto load = [&](const std::string& stem) {
    const std::string path = config.out_path(stem + "_summary.csv");
    summaries.push_back(parse_summary_csv(read_text_file(path), path));
    inputs.emplace_back(stem + "_summary.csv", path);
  };
  load("reference");
  for (const auto& [name, path] : config.scenarios) {
    (void)path;
    load(sanitize_name(name));
  }
  const CombinedSummary combined = combine_scenarios(summaries);
  ensure_out_dir(config);
  write_artifact(config.out_path("combined.csv"), serialize_combined_csv(combined),
                 "combine", config.seed, inputs);
  std::cout << "combined " << summaries.size() << " summaries over "
            << combined.su_ids.size() << " slope units\n";
}

std::vector<double> parse_areas_csv(std::string_view text, const std::string& name) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw UserError(name + ": empty file");
  if (lines[0] != "area_m2") {
    throw UserError(name + ": line 1: expected header 'area_m2'");
  }
  std::vector<double> areas;
  areas.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    areas.push_back(parse_double(
        lines[li], name + ": line " + format_int(static_cast<long long>(li) + 1)));
  }
  return areas;
}

void run_fad(const std::string& areas_csv, const std::string& out_csv) {
  const auto areas = parse_areas_csv(read_text_file(areas_csv), areas_csv);
  const FadResult fad = frequency_area(areas);
  const auto parent = std::filesystem::path(out_csv).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write_artifact(out_csv, serialize_fad_csv(fad), "fad", 0,
                 {{areas_csv, areas_csv}});
  std::cout << "areas: " << fad.n << "  min " << format_double(fad.min_area)
            << " m^2  rollover "
            << (std::isnan(fad.rollover) ? std::string("n/a (need >= 20 areas)")
                                         : format_double(fad.rollover) + " m^2")
            << "\n";
}

}  // namespace sugam
