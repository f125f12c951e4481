#include "sugam/grid.hpp"

#include <cmath>

namespace sugam {

DoubleGrid resample_nearest(const DoubleGrid& src, double xllcorner, double yllcorner,
                            double cellsize, Index nrows, Index ncols) {
  if (src.nrows() < 1 || src.ncols() < 1) {
    throw InternalError("resample_nearest: empty source grid");
  }
  DoubleGrid out;
  out.xllcorner = xllcorner;
  out.yllcorner = yllcorner;
  out.cellsize = cellsize;
  out.nodata = -9999.0;
  out.values.resize(nrows, ncols);

  const auto clamp_index = [](double t, Index n) {
    auto i = static_cast<Index>(std::floor(t));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return i;
  };

  for (Index r = 0; r < nrows; ++r) {
    const double y = yllcorner + (static_cast<double>(nrows - 1 - r) + 0.5) * cellsize;
    const Index sr =
        src.nrows() - 1 - clamp_index((y - src.yllcorner) / src.cellsize, src.nrows());
    for (Index c = 0; c < ncols; ++c) {
      const double x = xllcorner + (static_cast<double>(c) + 0.5) * cellsize;
      const Index sc = clamp_index((x - src.xllcorner) / src.cellsize, src.ncols());
      const double v = src.values(sr, sc);
      out.values(r, c) = (v == src.nodata) ? out.nodata : v;
    }
  }
  return out;
}

}  // namespace sugam
