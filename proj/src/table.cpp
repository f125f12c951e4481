#include "sugam/table.hpp"

#include <cmath>

#include <json.hpp>

#include "sugam/io.hpp"

namespace sugam {

Vector apply_standardization(const Vector& x, const Standardization& s) {
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out[i] = apply_standardization(x[i], s);
  return out;
}

StandardizeResult standardize(const Vector& column, const std::string& name) {
  const Index n = column.size();
  if (n < 2) throw UserError("standardize(" + name + "): need at least 2 values");
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) sum += column[i];
  const double m = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) ss += (column[i] - m) * (column[i] - m);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw UserError("standardize(" + name + "): column has zero variance");
  }
  StandardizeResult res;
  res.stats = {m, sd};
  res.values = apply_standardization(column, res.stats);
  return res;
}

bool is_standardized(const Vector& column) {
  const Index n = column.size();
  if (n < 2) return false;
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) sum += column[i];
  const double m = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) ss += (column[i] - m) * (column[i] - m);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return std::abs(m) <= 1e-9 && std::abs(sd - 1.0) <= 1e-9;
}

Index SlopeUnitTable::col(const std::string& name) const {
  const auto it = col_index.find(name);
  if (it == col_index.end()) throw UserError("slope-unit table: no column '" + name + "'");
  return it->second;
}

void SlopeUnitTable::add_column(const std::string& name, const Vector& values) {
  if (has_column(name)) throw InternalError("duplicate column '" + name + "'");
  if (values.size() != n()) throw InternalError("column '" + name + "' length mismatch");
  data.conservativeResize(n(), data.cols() + 1);
  data.col(data.cols() - 1) = values;
  col_index.emplace(name, static_cast<Index>(columns.size()));
  columns.push_back(name);
}

std::string serialize_su_table(const SlopeUnitTable& table) {
  std::string out = "su_id,label";
  for (const auto& c : table.columns) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (Index i = 0; i < table.n(); ++i) {
    out += format_int(table.su_ids[static_cast<std::size_t>(i)]);
    out += ',';
    out += format_int(table.labels[i]);
    for (Index j = 0; j < static_cast<Index>(table.columns.size()); ++j) {
      out += ',';
      out += format_double(table.data(i, j));
    }
    out += '\n';
  }
  return out;
}

SlopeUnitTable parse_su_table(std::string_view text, const std::string& name) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw UserError(name + ": empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "su_id" || header[1] != "label") {
    throw UserError(name + ": line 1: header must start with 'su_id,label'");
  }

  SlopeUnitTable table;
  for (std::size_t j = 2; j < header.size(); ++j) {
    const std::string col(header[j]);
    if (col.empty()) throw UserError(name + ": line 1: empty column name");
    if (table.has_column(col)) throw UserError(name + ": line 1: duplicate column '" + col + "'");
    table.col_index.emplace(col, static_cast<Index>(table.columns.size()));
    table.columns.push_back(col);
  }

  const auto nrows = static_cast<Index>(lines.size() - 1);
  const auto ncols = static_cast<Index>(table.columns.size());
  table.labels.resize(nrows);
  table.data.resize(nrows, ncols);
  table.su_ids.reserve(static_cast<std::size_t>(nrows));

  for (Index i = 0; i < nrows; ++i) {
    const std::string ctx = name + ": line " + format_int(i + 2);
    const auto toks = split_csv_line(lines[static_cast<std::size_t>(i) + 1]);
    if (static_cast<Index>(toks.size()) != ncols + 2) {
      throw UserError(ctx + ": expected " + format_int(ncols + 2) + " fields, got " +
                      format_int(static_cast<long long>(toks.size())));
    }
    const long long id = parse_int(toks[0], ctx);
    if (id <= 0) throw UserError(ctx + ": su_id must be positive");
    table.su_ids.push_back(static_cast<int>(id));
    const long long label = parse_int(toks[1], ctx);
    if (label != 0 && label != 1) throw UserError(ctx + ": label must be 0 or 1");
    table.labels[i] = static_cast<int>(label);
    for (Index j = 0; j < ncols; ++j) {
      table.data(i, j) = parse_double(toks[static_cast<std::size_t>(j) + 2], ctx);
    }
  }

  for (std::size_t i = 1; i < table.su_ids.size(); ++i) {
    if (table.su_ids[i] <= table.su_ids[i - 1]) {
      throw UserError(name + ": su_id values must be strictly increasing (row " +
                      format_int(static_cast<long long>(i) + 2) + ")");
    }
  }
  return table;
}

SlopeUnitTable read_su_table(const std::string& path) {
  return parse_su_table(read_text_file(path), path);
}

std::string serialize_standardization(const StandardizationMap& stats) {
  nlohmann::json doc;
  auto& cols = doc["columns"];
  cols = nlohmann::json::object();
  for (const auto& [name, s] : stats) {
    cols[name] = {{"mean", s.mean}, {"sd", s.sd}};
  }
  return doc.dump(2) + "\n";
}

StandardizationMap parse_standardization(std::string_view text, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UserError(name + ": " + e.what());
  }
  if (!doc.contains("columns") || !doc["columns"].is_object()) {
    throw UserError(name + ": missing 'columns' object");
  }
  StandardizationMap out;
  for (const auto& [col, entry] : doc["columns"].items()) {
    if (!entry.contains("mean") || !entry.contains("sd")) {
      throw UserError(name + ": column '" + col + "' needs 'mean' and 'sd'");
    }
    out[col] = {entry["mean"].get<double>(), entry["sd"].get<double>()};
  }
  return out;
}

StandardizationMap read_standardization(const std::string& path) {
  return parse_standardization(read_text_file(path), path);
}

}  // namespace sugam
