#include "sugam/shakemap.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "sugam/io.hpp"

namespace sugam {

namespace {

using AttrMap = std::map<std::string, std::string>;

// Attribute list of an opening tag: the text between "<tag" and the next
// '>' (or '/>'). Throws if the tag is absent and required.
std::vector<std::string> tag_attr_blocks(std::string_view xml, std::string_view tag) {
  std::vector<std::string> out;
  const std::string open = "<" + std::string(tag);
  std::size_t pos = 0;
  while ((pos = xml.find(open, pos)) != std::string_view::npos) {
    const std::size_t start = pos + open.size();
    // Reject prefixes, e.g. <grid_data> when searching for <grid_d>.
    if (start < xml.size() && xml[start] != ' ' && xml[start] != '\t' &&
        xml[start] != '\n' && xml[start] != '\r' && xml[start] != '>' &&
        xml[start] != '/') {
      pos = start;
      continue;
    }
    const std::size_t end = xml.find('>', start);
    if (end == std::string_view::npos) break;
    std::string_view block = xml.substr(start, end - start);
    if (!block.empty() && block.back() == '/') block.remove_suffix(1);
    out.emplace_back(block);
    pos = end + 1;
  }
  return out;
}

AttrMap parse_attrs(std::string_view block, const std::string& ctx) {
  AttrMap attrs;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < block.size() && (block[i] == ' ' || block[i] == '\t' ||
                                block[i] == '\n' || block[i] == '\r')) {
      ++i;
    }
  };
  for (;;) {
    skip_ws();
    if (i >= block.size()) break;
    const std::size_t key_start = i;
    while (i < block.size() && block[i] != '=' && block[i] != ' ') ++i;
    const std::string key(block.substr(key_start, i - key_start));
    skip_ws();
    if (i >= block.size() || block[i] != '=') {
      throw UserError(ctx + ": malformed attribute '" + key + "'");
    }
    ++i;
    skip_ws();
    if (i >= block.size() || (block[i] != '"' && block[i] != '\'')) {
      throw UserError(ctx + ": attribute '" + key + "' value must be quoted");
    }
    const char quote = block[i++];
    const std::size_t val_start = i;
    while (i < block.size() && block[i] != quote) ++i;
    if (i >= block.size()) {
      throw UserError(ctx + ": unterminated value for attribute '" + key + "'");
    }
    attrs[key] = std::string(block.substr(val_start, i - val_start));
    ++i;
  }
  return attrs;
}

std::string require_attr(const AttrMap& attrs, const std::string& key,
                         const std::string& ctx) {
  const auto it = attrs.find(key);
  if (it == attrs.end()) throw UserError(ctx + ": missing attribute '" + key + "'");
  return it->second;
}

std::string_view element_text(std::string_view xml, std::string_view tag,
                              const std::string& ctx) {
  const std::string open = "<" + std::string(tag);
  const std::string close = "</" + std::string(tag) + ">";
  const std::size_t open_pos = xml.find(open);
  if (open_pos == std::string_view::npos) {
    throw UserError(ctx + ": missing <" + std::string(tag) + "> element");
  }
  const std::size_t body_start = xml.find('>', open_pos);
  const std::size_t close_pos = xml.find(close, open_pos);
  if (body_start == std::string_view::npos || close_pos == std::string_view::npos ||
      close_pos < body_start) {
    throw UserError(ctx + ": unterminated <" + std::string(tag) + "> element");
  }
  return xml.substr(body_start + 1, close_pos - body_start - 1);
}

}  // namespace

DoubleGrid parse_shakemap_grid(std::string_view xml, const std::string& name) {
  const auto spec_blocks = tag_attr_blocks(xml, "grid_specification");
  if (spec_blocks.empty()) {
    throw UserError(name + ": missing <grid_specification> element");
  }
  const std::string spec_ctx = name + ": grid_specification";
  const AttrMap spec = parse_attrs(spec_blocks.front(), spec_ctx);

  const double lon_min = parse_double(require_attr(spec, "lon_min", spec_ctx), spec_ctx);
  const double lat_min = parse_double(require_attr(spec, "lat_min", spec_ctx), spec_ctx);
  const double lon_max = parse_double(require_attr(spec, "lon_max", spec_ctx), spec_ctx);
  const double lat_max = parse_double(require_attr(spec, "lat_max", spec_ctx), spec_ctx);
  const auto nlon =
      static_cast<Index>(parse_int(require_attr(spec, "nlon", spec_ctx), spec_ctx));
  const auto nlat =
      static_cast<Index>(parse_int(require_attr(spec, "nlat", spec_ctx), spec_ctx));
  if (nlon < 2 || nlat < 2) {
    throw UserError(spec_ctx + ": nlon and nlat must be at least 2");
  }
  if (!(lon_max > lon_min) || !(lat_max > lat_min)) {
    throw UserError(spec_ctx + ": lon/lat bounds must be increasing");
  }
  const double dlon = (lon_max - lon_min) / static_cast<double>(nlon - 1);
  const double dlat = (lat_max - lat_min) / static_cast<double>(nlat - 1);
  if (std::abs(dlat - dlon) > 0.01 * dlon) {
    throw UserError(spec_ctx + ": lattice spacing is anisotropic (dlon " +
                    format_double(dlon) + " vs dlat " + format_double(dlat) +
                    "), not representable on a square-cell grid");
  }

  // Locate the PGA column among the declared fields; indexes are 1-based.
  Index pga_index = -1;
  double unit_scale = 1.0;
  Index max_index = 0;
  for (const auto& block : tag_attr_blocks(xml, "grid_field")) {
    const std::string field_ctx = name + ": grid_field";
    const AttrMap field = parse_attrs(block, field_ctx);
    const auto index =
        static_cast<Index>(parse_int(require_attr(field, "index", field_ctx), field_ctx));
    if (index < 1) throw UserError(field_ctx + ": index must be >= 1");
    max_index = std::max(max_index, index);
    if (to_lower(require_attr(field, "name", field_ctx)) != "pga") continue;
    pga_index = index;
    const std::string units = to_lower(require_attr(field, "units", field_ctx));
    if (units == "%g") {
      unit_scale = 0.01;
    } else if (units == "g") {
      unit_scale = 1.0;
    } else {
      throw UserError(field_ctx + ": unsupported PGA units '" + units +
                      "' (expected %g or g)");
    }
  }
  if (pga_index < 0) {
    throw UserError(name + ": no grid_field named PGA");
  }

  DoubleGrid grid;
  grid.cellsize = dlon;
  grid.xllcorner = lon_min - dlon / 2.0;
  grid.yllcorner = lat_min - dlon / 2.0;
  grid.nodata = -9999.0;
  grid.values.resize(nlat, nlon);

  // grid_data rows start at the NW corner with longitude varying fastest,
  // which is exactly our row-major north-up layout.
  const std::string_view data = element_text(xml, "grid_data", name);
  const Index expected_rows = nlat * nlon;
  Index row = 0;
  for (std::string_view line : split_lines(data)) {
    const auto toks = split_whitespace(line);
    if (toks.empty()) continue;
    if (row >= expected_rows) {
      throw UserError(name + ": grid_data row " + format_int(row + 1) + ": expected " +
                      format_int(expected_rows) + " rows but found more");
    }
    const std::string row_ctx = name + ": grid_data row " + format_int(row + 1);
    if (static_cast<Index>(toks.size()) < max_index) {
      throw UserError(row_ctx + ": expected " + format_int(max_index) +
                      " fields, got " + format_int(static_cast<long long>(toks.size())));
    }
    const double pga =
        parse_double(toks[static_cast<std::size_t>(pga_index - 1)], row_ctx) * unit_scale;
    if (pga < 0.0) throw UserError(row_ctx + ": negative PGA");
    grid.values(row / nlon, row % nlon) = pga;
    ++row;
  }
  if (row != expected_rows) {
    throw UserError(name + ": grid_data row " + format_int(row) + ": expected " +
                    format_int(expected_rows) + " rows, got " + format_int(row));
  }
  return grid;
}

DoubleGrid read_shakemap_grid(const std::string& path) {
  return parse_shakemap_grid(read_text_file(path), path);
}

}  // namespace sugam
