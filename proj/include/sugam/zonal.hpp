#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "sugam/grid.hpp"
#include "sugam/types.hpp"

namespace sugam {

// Slope-unit partition: an integer raster of SU ids plus the sorted set of
// ids occurring in it. All per-SU columns in this project are ordered by
// `ids`, so `index_of` maps an id to its row everywhere.
struct SuPartition {
  IntGrid grid;
  std::vector<int> ids;
  std::unordered_map<int, Index> index_of;

  static SuPartition from_grid(IntGrid g);

  Index size() const { return static_cast<Index>(ids.size()); }
};

enum class ZonalStat { kMean, kSd };

// Per-SU mean or sample (n-1) sd of a covariate raster. Cells that are
// nodata in either raster are excluded. Cell values are sorted before any
// summation, which makes the result invariant to cell enumeration order.
Vector aggregate_to_su(const DoubleGrid& grid, const SuPartition& part, ZonalStat stat);

// Per-SU most frequent class code; ties go to the lowest code.
std::vector<int> majority_class(const IntGrid& grid, const SuPartition& part);

struct Centroid {
  double x = 0.0;
  double y = 0.0;
};

struct LabelResult {
  IndexVector labels;    // one {0,1} per SU, in partition id order
  Index dropped = 0;     // centroids outside the partition or on nodata
  bool empty_input = false;
};

// Presence labels: an SU containing at least one centroid gets 1. Centroids
// that land outside the raster or on a nodata cell are counted, not fatal.
LabelResult label_su(const std::vector<Centroid>& centroids, const SuPartition& part);

// centroids.csv: header "x,y" or "x,y,landslide_id"; extra id column ignored.
std::vector<Centroid> parse_centroids_csv(std::string_view text, const std::string& name);

}  // namespace sugam
