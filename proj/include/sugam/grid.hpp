#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sugam/io.hpp"
#include "sugam/types.hpp"

namespace sugam {

// Raster on a north-up lattice: row 0 is the northernmost row, values are
// row-major. Cell type is double for covariates and int for partitions and
// class-code grids.
template <typename T>
struct Grid {
  using Data = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 0.0;
  T nodata = static_cast<T>(-9999);
  Data values;

  Index nrows() const { return values.rows(); }
  Index ncols() const { return values.cols(); }

  bool is_nodata(Index row, Index col) const { return values(row, col) == nodata; }

  double center_x(Index col) const {
    return xllcorner + (static_cast<double>(col) + 0.5) * cellsize;
  }
  double center_y(Index row) const {
    return yllcorner + (static_cast<double>(nrows() - 1 - row) + 0.5) * cellsize;
  }

  bool same_geometry(const Grid& other) const {
    return nrows() == other.nrows() && ncols() == other.ncols() &&
           xllcorner == other.xllcorner && yllcorner == other.yllcorner &&
           cellsize == other.cellsize;
  }
};

using DoubleGrid = Grid<double>;
using IntGrid = Grid<int>;

namespace detail {

inline double parse_grid_value(std::string_view tok, const std::string& ctx, double) {
  return parse_double(tok, ctx);
}
inline int parse_grid_value(std::string_view tok, const std::string& ctx, int) {
  return static_cast<int>(parse_int(tok, ctx));
}

inline std::string format_grid_value(double v) { return format_double(v); }
inline std::string format_grid_value(int v) { return format_int(v); }

}  // namespace detail

// ESRI ASCII grid reader. The header is exactly six lines, keys
// case-insensitive but in the canonical order; the body is whitespace
// separated and may wrap lines freely. All errors carry `name` and the
// 1-based line number.
template <typename T>
Grid<T> parse_ascii_grid(std::string_view text, const std::string& name) {
  static const char* kKeys[6] = {"ncols",     "nrows",    "xllcorner",
                                 "yllcorner", "cellsize", "nodata_value"};
  const auto lines = split_lines(text);
  if (lines.size() < 6) {
    throw UserError(name + ": line " + format_int(static_cast<long long>(lines.size()) + 1) +
                    ": truncated header, expected 6 header lines");
  }

  double header[6];
  for (int i = 0; i < 6; ++i) {
    const std::string ctx = name + ": line " + format_int(i + 1);
    const auto toks = split_whitespace(lines[static_cast<std::size_t>(i)]);
    if (toks.size() != 2) {
      throw UserError(ctx + ": expected '" + kKeys[i] + " <value>'");
    }
    if (to_lower(toks[0]) != kKeys[i]) {
      throw UserError(ctx + ": expected header key '" + kKeys[i] + "', got '" +
                      std::string(toks[0]) + "'");
    }
    header[i] = parse_double(toks[1], ctx);
  }

  const auto ncols = static_cast<Index>(header[0]);
  const auto nrows = static_cast<Index>(header[1]);
  if (ncols < 1 || header[0] != static_cast<double>(ncols)) {
    throw UserError(name + ": line 1: ncols must be a positive integer");
  }
  if (nrows < 1 || header[1] != static_cast<double>(nrows)) {
    throw UserError(name + ": line 2: nrows must be a positive integer");
  }
  if (!(header[4] > 0.0)) {
    throw UserError(name + ": line 5: cellsize must be positive");
  }

  Grid<T> grid;
  grid.xllcorner = header[2];
  grid.yllcorner = header[3];
  grid.cellsize = header[4];
  grid.nodata = static_cast<T>(header[5]);
  grid.values.resize(nrows, ncols);

  const Index expected = nrows * ncols;
  Index count = 0;
  for (std::size_t li = 6; li < lines.size(); ++li) {
    const std::string ctx = name + ": line " + format_int(static_cast<long long>(li) + 1);
    for (std::string_view tok : split_whitespace(lines[li])) {
      if (count >= expected) {
        throw UserError(ctx + ": expected " + format_int(expected) +
                        " values but found more");
      }
      grid.values(count / ncols, count % ncols) = detail::parse_grid_value(tok, ctx, T{});
      ++count;
    }
  }
  if (count != expected) {
    throw UserError(name + ": line " + format_int(static_cast<long long>(lines.size())) +
                    ": expected " + format_int(expected) + " values, got " +
                    format_int(count));
  }
  return grid;
}

// Canonical writer: one raster row per line. Numbers go through to_chars,
// so serialize(parse(serialize(g))) == serialize(g) byte for byte.
template <typename T>
std::string serialize_ascii_grid(const Grid<T>& grid) {
  std::string out;
  out += "ncols " + format_int(grid.ncols()) + "\n";
  out += "nrows " + format_int(grid.nrows()) + "\n";
  out += "xllcorner " + format_double(grid.xllcorner) + "\n";
  out += "yllcorner " + format_double(grid.yllcorner) + "\n";
  out += "cellsize " + format_double(grid.cellsize) + "\n";
  out += "NODATA_value " + detail::format_grid_value(grid.nodata) + "\n";
  for (Index r = 0; r < grid.nrows(); ++r) {
    for (Index c = 0; c < grid.ncols(); ++c) {
      if (c > 0) out += ' ';
      out += detail::format_grid_value(grid.values(r, c));
    }
    out += '\n';
  }
  return out;
}

template <typename T>
Grid<T> read_ascii_grid(const std::string& path) {
  return parse_ascii_grid<T>(read_text_file(path), path);
}

template <typename T, typename U>
void require_same_geometry(const Grid<T>& a, const Grid<U>& b, const std::string& what) {
  if (a.nrows() == b.nrows() && a.ncols() == b.ncols() && a.xllcorner == b.xllcorner &&
      a.yllcorner == b.yllcorner && a.cellsize == b.cellsize) {
    return;
  }
  throw UserError(what + ": grid geometry mismatch (" + format_int(a.ncols()) + "x" +
                  format_int(a.nrows()) + " @ " + format_double(a.cellsize) + " vs " +
                  format_int(b.ncols()) + "x" + format_int(b.nrows()) + " @ " +
                  format_double(b.cellsize) + ")");
}

// Nearest-cell resampling of `src` onto the lattice of `like`. Cell centers
// outside `src` clamp to its edge; source nodata propagates as like-shaped
// nodata (-9999).
DoubleGrid resample_nearest(const DoubleGrid& src, double xllcorner, double yllcorner,
                            double cellsize, Index nrows, Index ncols);

template <typename T>
DoubleGrid resample_like(const DoubleGrid& src, const Grid<T>& like) {
  return resample_nearest(src, like.xllcorner, like.yllcorner, like.cellsize,
                          like.nrows(), like.ncols());
}

}  // namespace sugam
