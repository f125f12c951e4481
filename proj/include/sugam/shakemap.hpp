#pragma once

#include <string>
#include <string_view>

#include "sugam/grid.hpp"

namespace sugam {

// Reads the USGS ShakeMap grid.xml subset we need: grid_specification
// geometry, the grid_field naming the PGA column, and the grid_data block
// (rows from the NW corner, longitude fastest). Values come back in g;
// "%g" inputs are divided by 100. Anything else in the document is ignored.
DoubleGrid parse_shakemap_grid(std::string_view xml, const std::string& name);

DoubleGrid read_shakemap_grid(const std::string& path);

}  // namespace sugam
