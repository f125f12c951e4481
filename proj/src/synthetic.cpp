#include "sugam/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <vector>

#include <json.hpp>

#include "sugam/bedding.hpp"
#include "sugam/grid.hpp"
#include "sugam/io.hpp"
#include "sugam/pipeline.hpp"
#include "sugam/rng.hpp"
#include "sugam/stats.hpp"
#include "sugam/zonal.hpp"

namespace sugam {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double fixed_truth(const std::string& name) {
  static const std::map<std::string, double> values = {
      {"Dist2F_mu_std", -0.8}, {"Elev_mu_std", -0.3},     {"PGA_mu_std", 2.5},
      {"PLC_mu_std", 0.15},    {"PRC_mu_std", -0.15},     {"RSP_sigma_std", 0.2},
      {"Slope_sigma_std", 0.3}, {"TWI_mu_std", -0.2},
  };
  const auto it = values.find(name);
  return it == values.end() ? 0.0 : it->second;
}

double iid_truth(const std::string& column, int code) {
  // Zero-sum class effects so the intercept stays identified.
  static const double geo[7] = {0.15, 0.06, -0.09, 0.06, -0.03, -0.12, -0.03};
  static const double bed[5] = {-0.06, 0.03, 0.06, -0.17, 0.14};
  if (column == "Geo" && code >= 1 && code <= 7) return geo[code - 1];
  if (column == "B" && code >= 1 && code <= 5) return bed[code - 1];
  return 0.0;
}

Vector rw1_truth(const Rw1Design& term) {
  const Index k = term.bins();
  Vector mids(k);
  for (Index j = 0; j < k; ++j) mids[j] = 0.5 * (term.edges[j] + term.edges[j + 1]);
  Vector f(k);
  if (term.column == "Slope_mu") {
    for (Index j = 0; j < k; ++j) f[j] = 0.8 * std::tanh((mids[j] - 27.0) / 8.0);
  } else if (term.column == "RSP_mu") {
    for (Index j = 0; j < k; ++j) {
      const double t = std::clamp(mids[j], 0.0, 1.0);
      f[j] = 0.35 * std::sin(kPi * t);
    }
  } else {
    f.setZero();
  }
  return f.array() - f.mean();
}

}  // namespace

Vector synth_truth(const DesignMatrix& design) {
  const ParameterLayout layout = layout_of(design);
  Vector truth = Vector::Zero(layout.total);
  truth[ParameterLayout::kIntercept] = -0.5;
  for (std::size_t j = 0; j < design.fixed_names.size(); ++j) {
    truth[layout.fixed_at(static_cast<Index>(j))] = fixed_truth(design.fixed_names[j]);
  }
  for (std::size_t b = 0; b < design.iid.size(); ++b) {
    const auto& term = design.iid[b];
    for (std::size_t k = 0; k < term.classes.size(); ++k) {
      truth[layout.iid_blocks[b].start + static_cast<Index>(k)] =
          iid_truth(term.column, term.classes[k]);
    }
  }
  for (std::size_t b = 0; b < design.rw1.size(); ++b) {
    truth.segment(layout.rw1_blocks[b].start, design.rw1[b].bins()) =
        rw1_truth(design.rw1[b]);
  }
  // log-precisions stay 0 (tau = 1)
  return truth;
}

SynthData synth_table(Index n, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 1));
  SynthData out;
  auto& table = out.table;
  table.su_ids.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) table.su_ids[static_cast<std::size_t>(i)] = int(i) + 1;
  table.labels = IndexVector::Zero(n);
  table.data.resize(n, 0);

  Vector dist2f(n), elev(n), pga(n), plc(n), prc(n), rsp(n), rsp_sd(n);
  Vector slope(n), slope_sd(n), twi(n), geo(n), bed(n);
  for (Index i = 0; i < n; ++i) {
    dist2f[i] = 15000.0 * rng.uniform();
    elev[i] = 2500.0 + 600.0 * rng.normal();
    pga[i] = 0.08 + 0.29 * std::pow(rng.uniform(), 1.5);
    plc[i] = 0.002 * rng.normal();
    prc[i] = 0.002 * rng.normal();
    rsp[i] = rng.uniform();
    rsp_sd[i] = 0.05 + 0.2 * rng.uniform();
    slope[i] = 5.0 + 43.0 * rng.uniform();
    slope_sd[i] = 2.0 + 6.0 * rng.uniform();
    twi[i] = 6.0 + 2.0 * rng.normal();
    geo[i] = double(1 + rng.uniform_int(7));
    bed[i] = double(1 + rng.uniform_int(5));
  }
  const auto add = [&](const std::string& name, const Vector& v, bool standardized) {
    table.add_column(name, v);
    if (standardized) table.add_column(name + "_std", standardize(v, name).values);
  };
  add("Dist2F_mu", dist2f, true);
  add("Elev_mu", elev, true);
  add("PGA_mu", pga, true);
  add("PLC_mu", plc, true);
  add("PRC_mu", prc, true);
  add("RSP_mu", rsp, true);
  add("RSP_sigma", rsp_sd, true);
  add("Slope_mu", slope, true);
  add("Slope_sigma", slope_sd, true);
  add("TWI_mu", twi, true);
  table.add_column("Geo", geo);
  table.add_column("B", bed);

  out.design = build_design(table, default_model_spec());
  out.truth = synth_truth(out.design);

  const Vector eta = linear_predictor(out.truth, out.design);
  Rng label_rng(mix_seed(seed, 2));
  for (Index i = 0; i < n; ++i) {
    table.labels[i] = label_rng.uniform() < inverse_logit(eta[i]) ? 1 : 0;
  }
  return out;
}

namespace {

// Demo world lattice: 220x220 cells of 0.0003 degrees (about 33 m) anchored
// at 103.8 E, 33.0 N, masked to an ellipse.
constexpr Index kCells = 220;
constexpr double kCellDeg = 0.0003;
constexpr double kXll = 103.8;
constexpr double kYll = 33.0;
constexpr double kCellM = 33.0;

bool in_mask(Index row, Index col) {
  const double du = (double(col) - 109.5) / 104.0;
  const double dv = (double(row) - 109.5) / 99.0;
  return du * du + dv * dv <= 1.0;
}

// Smooth analytic terrain; high-frequency terms give the within-SU sigma
// columns something to measure.
double elevation_at(double u, double v) {
  return 2600.0 + 700.0 * std::sin(2.3 * u + 0.4) * std::cos(1.7 * v) + 520.0 * v +
         180.0 * std::sin(5.1 * u + 1.3) * std::sin(4.3 * v + 0.5) +
         90.0 * std::sin(9.7 * u + 2.1) * std::cos(8.3 * v + 1.7) +
         40.0 * std::sin(23.7 * u + 1.1) * std::sin(19.3 * v + 0.7);
}

struct TemplateGrid {
  template <typename T>
  Grid<T> make() const {
    Grid<T> g;
    g.xllcorner = kXll;
    g.yllcorner = kYll;
    g.cellsize = kCellDeg;
    g.nodata = -9999;
    g.values.resize(kCells, kCells);
    g.values.setConstant(g.nodata);
    return g;
  }
};

double round4(double x) { return std::round(x * 1e4) / 1e4; }

double dist_to_segment(double px, double py, double ax, double ay, double bx,
                       double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

struct ShakeEvent {
  std::string name;
  double lo_g;
  double hi_g;
  double phase;
};

std::string shakemap_xml(const ShakeEvent& ev) {
  constexpr Index nlon = 23, nlat = 23;
  constexpr double lon_min = 103.79, lat_min = 32.995, step = 0.004;
  const double lon_max = lon_min + step * (nlon - 1);
  const double lat_max = lat_min + step * (nlat - 1);
  std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  xml += "<shakemap_grid event_id=\"" + ev.name + "\">\n";
  xml += "<grid_specification lon_min=\"" + format_double(lon_min) + "\" lat_min=\"" +
         format_double(lat_min) + "\" lon_max=\"" + format_double(lon_max) +
         "\" lat_max=\"" + format_double(lat_max) +
         "\" nominal_lon_spacing=\"0.004\" nominal_lat_spacing=\"0.004\" nlon=\"23\" "
         "nlat=\"23\"/>\n";
  xml += "<grid_field index=\"1\" name=\"LON\" units=\"dd\"/>\n";
  xml += "<grid_field index=\"2\" name=\"LAT\" units=\"dd\"/>\n";
  xml += "<grid_field index=\"3\" name=\"PGA\" units=\"%g\"/>\n";
  xml += "<grid_data>\n";
  for (Index r = 0; r < nlat; ++r) {
    const double lat = lat_max - step * r;  // NW corner first
    const double nv = (lat - lat_min) / (lat_max - lat_min);
    for (Index c = 0; c < nlon; ++c) {
      const double lon = lon_min + step * c;
      const double nu = (lon - lon_min) / (lon_max - lon_min);
      const double t =
          std::clamp(0.15 + 0.75 * nv + 0.25 * std::sin(3.1 * nu + ev.phase), 0.0, 1.0);
      const double pga_g = ev.lo_g + (ev.hi_g - ev.lo_g) * t;
      xml += format_double(lon) + " " + format_double(lat) + " " +
             format_double(round4(pga_g * 100.0)) + "\n";
    }
  }
  xml += "</grid_data>\n</shakemap_grid>\n";
  return xml;
}

}  // namespace

void write_synth_world(const std::string& dir, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const TemplateGrid tpl;

  // Terrain and its derivatives, computed on the full lattice and masked
  // afterwards so gradients never touch nodata.
  Matrix z(kCells, kCells);
  for (Index r = 0; r < kCells; ++r) {
    for (Index c = 0; c < kCells; ++c) {
      const double u = double(c) / (kCells - 1);
      const double v = double(kCells - 1 - r) / (kCells - 1);
      z(r, c) = elevation_at(u, v);
    }
  }
  auto elev = tpl.make<double>();
  auto slope = tpl.make<double>();
  auto aspect = tpl.make<double>();
  auto plc = tpl.make<double>();
  auto prc = tpl.make<double>();
  auto twi = tpl.make<double>();
  auto dist2f = tpl.make<double>();
  auto dipdir = tpl.make<double>();
  auto geo = tpl.make<int>();
  auto su = tpl.make<int>();

  Rng rng(mix_seed(seed, 3));
  std::vector<std::pair<double, double>> geo_seeds;
  for (int i = 0; i < 14; ++i) geo_seeds.emplace_back(rng.uniform(), rng.uniform());

  const auto zat = [&](Index r, Index c) {
    return z(std::clamp<Index>(r, 0, kCells - 1), std::clamp<Index>(c, 0, kCells - 1));
  };
  for (Index r = 0; r < kCells; ++r) {
    for (Index c = 0; c < kCells; ++c) {
      if (!in_mask(r, c)) continue;
      const double u = double(c) / (kCells - 1);
      const double v = double(kCells - 1 - r) / (kCells - 1);

      const double p = (zat(r, c + 1) - zat(r, c - 1)) / (2.0 * kCellM);  // east
      const double q = (zat(r - 1, c) - zat(r + 1, c)) / (2.0 * kCellM);  // north
      const double g2 = p * p + q * q;
      slope.values(r, c) = round4(std::atan(std::sqrt(g2)) * 180.0 / kPi);
      const double az = std::atan2(-p, -q) * 180.0 / kPi;  // downslope azimuth
      double asp = round4(std::fmod(az + 360.0, 360.0));
      if (asp >= 360.0) asp = 0.0;  // rounding can land exactly on 360
      aspect.values(r, c) = asp;

      const double zxx = (zat(r, c + 1) - 2.0 * z(r, c) + zat(r, c - 1)) / (kCellM * kCellM);
      const double zyy = (zat(r - 1, c) - 2.0 * z(r, c) + zat(r + 1, c)) / (kCellM * kCellM);
      const double zxy = (zat(r - 1, c + 1) - zat(r - 1, c - 1) - zat(r + 1, c + 1) +
                          zat(r + 1, c - 1)) /
                         (4.0 * kCellM * kCellM);
      // curvatures in 1/(100 m) so four decimals keep their variation
      const double denom = g2 + 1e-9;
      prc.values(r, c) = round4(
          -(zxx * p * p + 2.0 * zxy * p * q + zyy * q * q) /
          (denom * std::pow(1.0 + g2, 1.5)) * 100.0);
      plc.values(r, c) = round4((zxx * q * q - 2.0 * zxy * p * q + zyy * p * p) /
                                std::pow(denom, 1.5) * 100.0);

      elev.values(r, c) = round4(z(r, c));
      const double catchment = 40.0 + 35.0 * std::sin(3.1 * u + 0.9) * std::cos(2.6 * v + 0.3);
      twi.values(r, c) =
          round4(std::log((1.0 + catchment) / (std::sqrt(g2) + 0.005)));

      const double d1 = dist_to_segment(u, v, 0.12, 0.18, 0.55, 0.62);
      const double d2 = dist_to_segment(u, v, 0.55, 0.62, 0.88, 0.95);
      dist2f.values(r, c) = round4(std::min(d1, d2) * (kCells - 1) * kCellM);

      int nearest = 0;
      double best = 1e30;
      for (std::size_t i = 0; i < geo_seeds.size(); ++i) {
        const double du = u - geo_seeds[i].first, dv = v - geo_seeds[i].second;
        const double d = du * du + dv * dv;
        if (d < best) {
          best = d;
          nearest = static_cast<int>(i);
        }
      }
      geo.values(r, c) = 1 + nearest % 7;
      const double base = std::fmod(47.0 * nearest + 20.0, 360.0);
      const double wobble = 25.0 * std::sin(4.2 * u + nearest) * std::cos(3.7 * v);
      double dd = round4(std::fmod(std::fmod(base + wobble, 360.0) + 360.0, 360.0));
      if (dd >= 360.0) dd = 0.0;
      dipdir.values(r, c) = dd;
    }
  }

  // Slope units: Voronoi cells of random seeds inside the mask, with small
  // units merged into their nearest surviving neighbor.
  std::vector<std::pair<double, double>> su_seeds;
  while (su_seeds.size() < 420) {
    const double cs = rng.uniform() * (kCells - 1);
    const double rs = rng.uniform() * (kCells - 1);
    if (in_mask(Index(rs), Index(cs))) su_seeds.emplace_back(rs, cs);
  }
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> owner(kCells,
                                                                            kCells);
  owner.setConstant(-1);
  std::vector<Index> counts(su_seeds.size(), 0);
  const auto nearest_seed = [&](Index r, Index c, const std::vector<bool>& allowed) {
    int bi = -1;
    double best = 1e30;
    for (std::size_t i = 0; i < su_seeds.size(); ++i) {
      if (!allowed[i]) continue;
      const double dr = double(r) - su_seeds[i].first;
      const double dc = double(c) - su_seeds[i].second;
      const double d = dr * dr + dc * dc;
      if (d < best) {
        best = d;
        bi = static_cast<int>(i);
      }
    }
    return bi;
  };
  std::vector<bool> all(su_seeds.size(), true);
  for (Index r = 0; r < kCells; ++r) {
    for (Index c = 0; c < kCells; ++c) {
      if (!in_mask(r, c)) continue;
      const int i = nearest_seed(r, c, all);
      owner(r, c) = i;
      ++counts[static_cast<std::size_t>(i)];
    }
  }
  std::vector<bool> keep(su_seeds.size());
  for (std::size_t i = 0; i < su_seeds.size(); ++i) keep[i] = counts[i] >= 12;
  std::vector<int> relabel(su_seeds.size(), 0);
  int next_id = 1;
  for (std::size_t i = 0; i < su_seeds.size(); ++i) {
    if (keep[i]) relabel[i] = next_id++;
  }
  for (Index r = 0; r < kCells; ++r) {
    for (Index c = 0; c < kCells; ++c) {
      int i = owner(r, c);
      if (i < 0) continue;
      if (!keep[static_cast<std::size_t>(i)]) i = nearest_seed(r, c, keep);
      owner(r, c) = i;
      su.values(r, c) = relabel[static_cast<std::size_t>(i)];
    }
  }

  // Relative slope position: elevation rank of the cell within its SU.
  {
    const int nsu = next_id - 1;
    std::vector<double> zmin(static_cast<std::size_t>(nsu), 1e30);
    std::vector<double> zmax(static_cast<std::size_t>(nsu), -1e30);
    for (Index r = 0; r < kCells; ++r) {
      for (Index c = 0; c < kCells; ++c) {
        if (su.values(r, c) <= 0) continue;
        const auto i = static_cast<std::size_t>(su.values(r, c) - 1);
        zmin[i] = std::min(zmin[i], z(r, c));
        zmax[i] = std::max(zmax[i], z(r, c));
      }
    }
    auto rsp = tpl.make<double>();
    for (Index r = 0; r < kCells; ++r) {
      for (Index c = 0; c < kCells; ++c) {
        if (su.values(r, c) <= 0) continue;
        const auto i = static_cast<std::size_t>(su.values(r, c) - 1);
        const double range = zmax[i] - zmin[i];
        rsp.values(r, c) =
            round4(range > 1e-9 ? (z(r, c) - zmin[i]) / range : 0.5);
      }
    }
    write_text_file(dir + "/rsp.asc", serialize_ascii_grid(rsp));
  }

  write_text_file(dir + "/su.asc", serialize_ascii_grid(su));
  write_text_file(dir + "/elev.asc", serialize_ascii_grid(elev));
  write_text_file(dir + "/slope.asc", serialize_ascii_grid(slope));
  write_text_file(dir + "/aspect.asc", serialize_ascii_grid(aspect));
  write_text_file(dir + "/plc.asc", serialize_ascii_grid(plc));
  write_text_file(dir + "/prc.asc", serialize_ascii_grid(prc));
  write_text_file(dir + "/twi.asc", serialize_ascii_grid(twi));
  write_text_file(dir + "/dist2f.asc", serialize_ascii_grid(dist2f));
  write_text_file(dir + "/dipdir.asc", serialize_ascii_grid(dipdir));
  write_text_file(dir + "/geo.asc", serialize_ascii_grid(geo));

  const std::vector<ShakeEvent> events = {
      {"1933_Diexi", 0.03, 0.07, 0.0},
      {"1960_Songpan", 0.03, 0.10, 0.7},
      {"1973_Songpan", 0.04, 0.25, 1.4},
      {"1974_Songpan", 0.02, 0.10, 2.1},
      {"1976_Songpan_Pingwu_1", 0.04, 0.20, 2.8},
      {"1976_Songpan_Pingwu_2", 0.04, 0.09, 3.5},
      {"1976_Songpan_Pingwu_3", 0.02, 0.05, 4.2},
      {"2017_Jiuzhaigou", 0.08, 0.37, 4.9},
  };
  for (const auto& ev : events) {
    write_text_file(dir + "/shakemap_" + ev.name + ".xml", shakemap_xml(ev));
  }
  write_text_file(dir + "/model.json", serialize_model_spec(default_model_spec()));

  // Labels come from the generating model evaluated on the same table the
  // pipeline's own ingest produces, so a real ingest run reproduces them.
  RunConfig cfg;
  cfg.base_dir = dir;
  cfg.partition = "su.asc";
  cfg.rasters = {{"Dist2F", "dist2f.asc"}, {"Elev", "elev.asc"}, {"PLC", "plc.asc"},
                 {"PRC", "prc.asc"},       {"RSP", "rsp.asc"},   {"Slope", "slope.asc"},
                 {"TWI", "twi.asc"}};
  cfg.categorical = {{"Geo", "geo.asc"}};
  cfg.aspect = "aspect.asc";
  cfg.dip_direction = "dipdir.asc";
  cfg.reference_shakemap = "shakemap_2017_Jiuzhaigou.xml";
  const IngestResult ingest = ingest_tables(cfg);
  const DesignMatrix design = build_design(ingest.table, default_model_spec());
  const Vector eta = linear_predictor(synth_truth(design), design);

  Rng label_rng(mix_seed(seed, 9));
  std::vector<int> positive;
  for (Index i = 0; i < ingest.table.n(); ++i) {
    if (label_rng.uniform() < inverse_logit(eta[i])) {
      positive.push_back(ingest.table.su_ids[static_cast<std::size_t>(i)]);
    }
  }
  std::string centroids = "x,y,landslide_id\n";
  int landslide_id = 1;
  for (const int id : positive) {
    // the SU cell nearest its own mean center, so the point is inside
    double mr = 0.0, mc = 0.0;
    Index count = 0;
    for (Index r = 0; r < kCells; ++r) {
      for (Index c = 0; c < kCells; ++c) {
        if (su.values(r, c) != id) continue;
        mr += double(r);
        mc += double(c);
        ++count;
      }
    }
    mr /= double(count);
    mc /= double(count);
    Index br = 0, bc = 0;
    double best = 1e30;
    for (Index r = 0; r < kCells; ++r) {
      for (Index c = 0; c < kCells; ++c) {
        if (su.values(r, c) != id) continue;
        const double d = (r - mr) * (r - mr) + (c - mc) * (c - mc);
        if (d < best) {
          best = d;
          br = r;
          bc = c;
        }
      }
    }
    centroids += format_double(su.center_x(bc)) + "," + format_double(su.center_y(br)) +
                 "," + format_int(landslide_id++) + "\n";
  }
  write_text_file(dir + "/centroids.csv", centroids);

  // Landslide areas: inverse-gamma, mode at 100 m^2.
  Rng area_rng(mix_seed(seed, 11));
  std::string areas = "area_m2\n";
  for (int i = 0; i < 600; ++i) {
    areas += format_double(1.0 / area_rng.gamma(1.4, 240.0)) + "\n";
  }
  write_text_file(dir + "/areas.csv", areas);

  nlohmann::json cfg_json;
  cfg_json["partition"] = "su.asc";
  cfg_json["rasters"] = cfg.rasters;
  cfg_json["categorical"] = cfg.categorical;
  cfg_json["aspect"] = "aspect.asc";
  cfg_json["dip_direction"] = "dipdir.asc";
  cfg_json["centroids"] = "centroids.csv";
  cfg_json["reference_shakemap"] = "shakemap_2017_Jiuzhaigou.xml";
  cfg_json["scenarios"] = {
      {"1933_Diexi", "shakemap_1933_Diexi.xml"},
      {"1960_Songpan", "shakemap_1960_Songpan.xml"},
      {"1973_Songpan", "shakemap_1973_Songpan.xml"},
      {"1974_Songpan", "shakemap_1974_Songpan.xml"},
      {"1976_Songpan_Pingwu_1", "shakemap_1976_Songpan_Pingwu_1.xml"},
      {"1976_Songpan_Pingwu_2", "shakemap_1976_Songpan_Pingwu_2.xml"},
      {"1976_Songpan_Pingwu_3", "shakemap_1976_Songpan_Pingwu_3.xml"},
  };
  cfg_json["model_spec"] = "model.json";
  cfg_json["out"] = "out";
  cfg_json["samples"] = 800;
  cfg_json["chains"] = 2;
  cfg_json["thin"] = 20;
  cfg_json["folds"] = 5;
  cfg_json["threads"] = 0;
  cfg_json["seed"] = seed;
  write_text_file(dir + "/config.json", cfg_json.dump(2) + "\n");
}

}  // namespace sugam
