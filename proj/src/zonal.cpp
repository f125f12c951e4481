#include "sugam/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sugam/io.hpp"

namespace sugam {

SuPartition SuPartition::from_grid(IntGrid g) {
  SuPartition part;
  part.grid = std::move(g);
  std::vector<int> ids;
  for (Index r = 0; r < part.grid.nrows(); ++r) {
    for (Index c = 0; c < part.grid.ncols(); ++c) {
      const int v = part.grid.values(r, c);
      if (v == part.grid.nodata) continue;
      if (v <= 0) {
        throw UserError("slope-unit partition: id " + format_int(v) + " at row " +
                        format_int(r) + ", col " + format_int(c) +
                        " is not positive");
      }
      ids.push_back(v);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw UserError("slope-unit partition: no valid SU cells");
  part.ids = std::move(ids);
  part.index_of.reserve(part.ids.size());
  for (std::size_t i = 0; i < part.ids.size(); ++i) {
    part.index_of.emplace(part.ids[i], static_cast<Index>(i));
  }
  return part;
}

namespace {

std::vector<std::vector<double>> collect_cells(const DoubleGrid& grid,
                                               const SuPartition& part) {
  std::vector<std::vector<double>> cells(static_cast<std::size_t>(part.size()));
  for (Index r = 0; r < grid.nrows(); ++r) {
    for (Index c = 0; c < grid.ncols(); ++c) {
      const int id = part.grid.values(r, c);
      if (id == part.grid.nodata) continue;
      if (grid.is_nodata(r, c)) continue;
      cells[static_cast<std::size_t>(part.index_of.at(id))].push_back(grid.values(r, c));
    }
  }
  return cells;
}

}  // namespace

Vector aggregate_to_su(const DoubleGrid& grid, const SuPartition& part, ZonalStat stat) {
  require_same_geometry(grid, part.grid, "aggregate_to_su");
  auto cells = collect_cells(grid, part);
  Vector out(part.size());
  for (Index i = 0; i < part.size(); ++i) {
    auto& v = cells[static_cast<std::size_t>(i)];
    const auto n = static_cast<Index>(v.size());
    if (stat == ZonalStat::kMean) {
      if (n < 1) {
        throw UserError("aggregate_to_su: SU " + format_int(part.ids[i]) +
                        " has no usable cells for mean");
      }
    } else if (n < 2) {
      throw UserError("aggregate_to_su: SU " + format_int(part.ids[i]) + " has " +
                      format_int(n) + " usable cells, sd needs at least 2");
    }
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double m = sum / static_cast<double>(n);
    if (stat == ZonalStat::kMean) {
      out[i] = m;
    } else {
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      out[i] = std::sqrt(ss / static_cast<double>(n - 1));
    }
  }
  return out;
}

std::vector<int> majority_class(const IntGrid& grid, const SuPartition& part) {
  require_same_geometry(grid, part.grid, "majority_class");
  std::vector<std::map<int, Index>> counts(static_cast<std::size_t>(part.size()));
  for (Index r = 0; r < grid.nrows(); ++r) {
    for (Index c = 0; c < grid.ncols(); ++c) {
      const int id = part.grid.values(r, c);
      if (id == part.grid.nodata) continue;
      if (grid.is_nodata(r, c)) continue;
      ++counts[static_cast<std::size_t>(part.index_of.at(id))][grid.values(r, c)];
    }
  }
  std::vector<int> out(static_cast<std::size_t>(part.size()));
  for (Index i = 0; i < part.size(); ++i) {
    const auto& m = counts[static_cast<std::size_t>(i)];
    if (m.empty()) {
      throw UserError("majority_class: SU " + format_int(part.ids[i]) +
                      " has no usable cells");
    }
    // std::map iterates codes in ascending order, so on equal counts the
    // lowest code wins.
    int best_code = m.begin()->first;
    Index best_count = m.begin()->second;
    for (const auto& [code, count] : m) {
      if (count > best_count) {
        best_code = code;
        best_count = count;
      }
    }
    out[static_cast<std::size_t>(i)] = best_code;
  }
  return out;
}

LabelResult label_su(const std::vector<Centroid>& centroids, const SuPartition& part) {
  LabelResult res;
  res.labels = IndexVector::Zero(part.size());
  res.empty_input = centroids.empty();
  const auto& g = part.grid;
  for (const auto& p : centroids) {
    const auto col = static_cast<Index>(std::floor((p.x - g.xllcorner) / g.cellsize));
    const auto row =
        g.nrows() - 1 - static_cast<Index>(std::floor((p.y - g.yllcorner) / g.cellsize));
    if (row < 0 || row >= g.nrows() || col < 0 || col >= g.ncols() ||
        g.is_nodata(row, col)) {
      ++res.dropped;
      continue;
    }
    res.labels[part.index_of.at(g.values(row, col))] = 1;
  }
  return res;
}

std::vector<Centroid> parse_centroids_csv(std::string_view text, const std::string& name) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw UserError(name + ": empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || to_lower(header[0]) != "x" || to_lower(header[1]) != "y") {
    throw UserError(name + ": line 1: expected header 'x,y[,landslide_id]'");
  }
  std::vector<Centroid> out;
  out.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const std::string ctx = name + ": line " + format_int(static_cast<long long>(li) + 1);
    const auto toks = split_csv_line(lines[li]);
    if (toks.size() < 2 || toks.size() > header.size()) {
      throw UserError(ctx + ": expected " + format_int(static_cast<long long>(header.size())) +
                      " fields");
    }
    out.push_back({parse_double(toks[0], ctx), parse_double(toks[1], ctx)});
  }
  return out;
}

}  // namespace sugam
