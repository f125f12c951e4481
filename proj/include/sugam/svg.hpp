#pragma once

#include <string>
#include <vector>

#include "sugam/types.hpp"
#include "sugam/validate.hpp"
#include "sugam/zonal.hpp"

namespace sugam {

// All plotting is plain hand-emitted SVG: paths, rects and text, nothing
// external. Numbers go through the shared round-trip formatter, so plot
// files are as reproducible as the CSVs.

// One ROC curve per fold on a unit square with a chance diagonal and a
// per-fold legend.
std::string roc_svg(const std::vector<RocCurve>& curves,
                    const std::vector<Index>& fold_ids, const std::vector<double>& aucs);

// Choropleth over the SU partition raster: per-SU values in partition id
// order, colored on a fixed [vmin, vmax] ramp, nodata left blank, NaN cells
// (e.g. skipped folds) in gray. Rectangles are run-length merged per row.
std::string su_map_svg(const SuPartition& part, const Vector& values,
                       const std::string& title, double vmin, double vmax);

// CI width against posterior mean, means ascending.
std::string error_plot_svg(const ErrorPlotData& data, const std::string& title);

}  // namespace sugam
