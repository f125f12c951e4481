#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sugam/pipeline.hpp"
#include "sugam/types.hpp"

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  sugam::Index samples = 0;
  sugam::Index folds = 0;
  sugam::Index threads = 0;
};

// Shared flags; anything given on the command line overrides the config.
void add_shared(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--config", cli.config_path, "run configuration JSON")
      ->required();
  cmd->add_option("--seed", cli.seed, "RNG seed");
  cmd->add_option("--samples", cli.samples, "pooled posterior sample count");
  cmd->add_option("--folds", cli.folds, "cross-validation fold count");
  cmd->add_option("--threads", cli.threads, "worker threads (0 = one per chain)");
  cmd->add_option("--out", cli.out_dir, "output directory");
}

sugam::RunConfig load_config(const CLI::App* cmd, const Cli& cli) {
  sugam::RunConfig config = sugam::read_run_config(cli.config_path);
  if (cmd->count("--seed")) config.seed = cli.seed;
  if (cmd->count("--samples")) config.samples = cli.samples;
  if (cmd->count("--folds")) config.folds = cli.folds;
  if (cmd->count("--threads")) config.threads = cli.threads;
  if (cmd->count("--out")) config.out_dir = cli.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slope-unit susceptibility modeling from earthquake ground motion"};
  app.set_version_flag("--version", std::string(sugam::kVersion));
  app.require_subcommand(1);

  Cli cli;
  CLI::App* ingest = app.add_subcommand("ingest", "rasters to a slope-unit table");
  CLI::App* fit = app.add_subcommand("fit", "sample the posterior");
  CLI::App* validate = app.add_subcommand("validate", "k-fold cross-validation");
  CLI::App* simulate =
      app.add_subcommand("simulate", "scenario susceptibility maps");
  CLI::App* combine =
      app.add_subcommand("combine", "combine existing scenario summaries");
  for (CLI::App* cmd : {ingest, fit, validate, simulate, combine}) {
    add_shared(cmd, cli);
  }

  std::string areas_path, fad_out = "fad.csv";
  CLI::App* fad = app.add_subcommand("fad", "frequency-area distribution");
  fad->add_option("--areas", areas_path, "CSV of landslide areas (area_m2)")
      ->required();
  fad->add_option("--out", fad_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) sugam::run_ingest(load_config(ingest, cli));
    if (fit->parsed()) sugam::run_fit(load_config(fit, cli));
    if (validate->parsed()) sugam::run_validate(load_config(validate, cli));
    if (simulate->parsed()) sugam::run_simulate(load_config(simulate, cli));
    if (combine->parsed()) sugam::run_combine(load_config(combine, cli));
    if (fad->parsed()) sugam::run_fad(areas_path, fad_out);
  } catch (const sugam::UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
