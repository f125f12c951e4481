#pragma once

#include <cstdint>
#include <string>

#include "sugam/model.hpp"
#include "sugam/table.hpp"
#include "sugam/types.hpp"

namespace sugam {

// Synthetic data with a known generating parameter vector, for recovery
// and cross-validation tests. synth_table draws covariates and Bernoulli
// labels from the default model with the truth returned alongside.
struct SynthData {
  SlopeUnitTable table;
  DesignMatrix design;
  Vector truth;  // full parameter vector in layout order
};

// The generating parameters for a given design: intercept -0.5, fixed
// effects by name (PGA at 2.5, the dominant term), zero-sum iid class
// values, mean-centered smooth RW1 curves, all log-precisions 0.
Vector synth_truth(const DesignMatrix& design);

SynthData synth_table(Index n, std::uint64_t seed);

// A complete on-disk demo world: rasters on a 220x220 lattice (terrain,
// derived covariates, geology, dip direction), a slope-unit partition,
// eight ShakeMap grid.xml files (seven historical scenarios plus the
// reference event), landslide centroids drawn from the generating model,
// a landslide area sample, the model spec and a ready-to-run config.json.
void write_synth_world(const std::string& dir, std::uint64_t seed);

}  // namespace sugam
