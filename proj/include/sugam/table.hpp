#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sugam/types.hpp"

namespace sugam {

// Mean/sd of a calibration column. Scenario inputs are projected with these
// same numbers, never re-standardized, so coefficients keep one scale.
struct Standardization {
  double mean = 0.0;
  double sd = 1.0;
};

inline double apply_standardization(double x, const Standardization& s) {
  return (x - s.mean) / s.sd;
}

Vector apply_standardization(const Vector& x, const Standardization& s);

struct StandardizeResult {
  Vector values;
  Standardization stats;
};

// Center and scale by the sample (n-1) sd. The output is produced by
// apply_standardization(x, stats) element by element, so re-applying the
// stored stats to the calibration column is bit-identical.
StandardizeResult standardize(const Vector& column, const std::string& name);

bool is_standardized(const Vector& column);

// One row per slope unit: label plus named covariate columns (raw,
// aggregated, and their *_std standardized versions). Row order follows
// ascending su_id everywhere.
struct SlopeUnitTable {
  std::vector<int> su_ids;
  IndexVector labels;
  std::vector<std::string> columns;
  Matrix data;
  std::unordered_map<std::string, Index> col_index;

  Index n() const { return static_cast<Index>(su_ids.size()); }

  bool has_column(const std::string& name) const {
    return col_index.find(name) != col_index.end();
  }
  Index col(const std::string& name) const;
  Vector column(const std::string& name) const { return data.col(col(name)); }
  void add_column(const std::string& name, const Vector& values);
};

// su_table.csv: header su_id,label,<columns...>; "." decimal separator,
// values via shortest round-trip formatting.
std::string serialize_su_table(const SlopeUnitTable& table);
SlopeUnitTable parse_su_table(std::string_view text, const std::string& name);
SlopeUnitTable read_su_table(const std::string& path);

// Standardization sidecar: {"columns":{name:{"mean":..,"sd":..}}}.
using StandardizationMap = std::map<std::string, Standardization>;
std::string serialize_standardization(const StandardizationMap& stats);
StandardizationMap parse_standardization(std::string_view text, const std::string& name);
StandardizationMap read_standardization(const std::string& path);

}  // namespace sugam
