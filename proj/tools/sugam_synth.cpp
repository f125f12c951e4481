#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sugam/synthetic.hpp"
#include "sugam/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic demo world (rasters, ShakeMaps, config)"};
  app.set_version_flag("--version", std::string(sugam::kVersion));

  std::string out_dir;
  std::uint64_t seed = 20170808;
  app.add_option("--out", out_dir, "directory to write the world into")->required();
  app.add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    sugam::write_synth_world(out_dir, seed);
    std::cout << "world written to " << out_dir << "\n";
  } catch (const sugam::UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
