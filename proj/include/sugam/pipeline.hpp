#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "sugam/model.hpp"
#include "sugam/sampler.hpp"
#include "sugam/simulate.hpp"
#include "sugam/table.hpp"
#include "sugam/validate.hpp"
#include "sugam/zonal.hpp"

namespace sugam {

// JSON run configuration. Relative paths resolve against the directory the
// config file sits in, so runs do not depend on the working directory.
struct RunConfig {
  std::string base_dir;
  std::string partition;
  std::map<std::string, std::string> rasters;      // continuous covariates
  std::map<std::string, std::string> categorical;  // majority-class covariates
  std::string aspect;         // optional pair: aspect + dip_direction -> B
  std::string dip_direction;
  std::string centroids;
  std::string reference_shakemap;
  std::map<std::string, std::string> scenarios;  // grid.xml or su_id,pga_g CSV
  std::string model_spec;  // empty: built-in default model
  std::string out_dir = "out";
  Index samples = 1000;
  Index chains = 2;
  Index thin = 10;
  Index folds = 10;
  Index threads = 0;
  std::uint64_t seed = 1;

  std::string resolve(const std::string& path) const;
  std::string out_path(const std::string& name) const;
};

RunConfig parse_run_config(std::string_view text, const std::string& path);
RunConfig read_run_config(const std::string& path);

ModelSpec load_model_spec(const RunConfig& config);

struct IngestResult {
  SuPartition part;
  SlopeUnitTable table;
  StandardizationMap stats;
  Index dropped_centroids = 0;
  bool empty_centroids = false;
};

// The full aggregation pass, in memory: rasters to per-SU mu/sigma columns,
// reference ShakeMap to PGA_mu/PGA_sigma, majority classes, bedding,
// centroid labels, then one standardized *_std column per continuous column.
IngestResult ingest_tables(const RunConfig& config);

// Each run_* writes its artifacts under config.out_dir, every file paired
// with a <file>.meta.json sidecar (tool, version, command, seed, input
// hashes). Nothing here reads a clock, so identical inputs give identical
// bytes.
void run_ingest(const RunConfig& config);
void run_fit(const RunConfig& config);
void run_validate(const RunConfig& config);
void run_simulate(const RunConfig& config);
void run_combine(const RunConfig& config);
void run_fad(const std::string& areas_csv, const std::string& out_csv);

// areas.csv: header area_m2, one positive value per line.
std::vector<double> parse_areas_csv(std::string_view text, const std::string& name);

}  // namespace sugam
