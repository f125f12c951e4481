#include "sugam/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "sugam/io.hpp"
#include "sugam/stats.hpp"

namespace sugam {

void ModelSpec::validate() const {
  std::set<std::string> seen;
  const auto claim = [&seen](const std::string& col) {
    if (!seen.insert(col).second) {
      throw UserError("model spec: column '" + col + "' appears in two term lists");
    }
  };
  for (const auto& c : fixed) claim(c);
  for (const auto& c : iid) claim(c);
  for (const auto& t : rw1) {
    claim(t.column);
    if (t.bins < 3) {
      throw UserError("model spec: rw1 term '" + t.column + "' needs K >= 3");
    }
    if (!t.edges.empty()) {
      if (static_cast<Index>(t.edges.size()) != t.bins + 1) {
        throw UserError("model spec: rw1 term '" + t.column + "' has " +
                        format_int(static_cast<long long>(t.edges.size())) +
                        " edges, expected K+1 = " + format_int(t.bins + 1));
      }
      for (std::size_t k = 1; k < t.edges.size(); ++k) {
        if (!(t.edges[k] > t.edges[k - 1])) {
          throw UserError("model spec: rw1 term '" + t.column +
                          "' edges must be strictly increasing");
        }
      }
    }
  }
  if (!(coef_variance > 0.0)) throw UserError("model spec: coef_variance must be > 0");
  if (!(tau_shape > 0.0) || !(tau_rate > 0.0)) {
    throw UserError("model spec: tau_shape and tau_rate must be > 0");
  }
}

ModelSpec default_model_spec() {
  ModelSpec spec;
  spec.fixed = {"Elev_mu_std",  "PGA_mu_std",      "Dist2F_mu_std",
                "PLC_mu_std",   "PRC_mu_std",      "RSP_sigma_std",
                "Slope_sigma_std", "TWI_mu_std"};
  spec.iid = {"Geo", "B"};
  spec.rw1 = {{"Slope_mu", 20, {}, true}, {"RSP_mu", 20, {}, true}};
  return spec;
}

std::string serialize_model_spec(const ModelSpec& spec) {
  nlohmann::json doc;
  doc["fixed"] = spec.fixed;
  doc["iid"] = spec.iid;
  doc["rw1"] = nlohmann::json::array();
  for (const auto& t : spec.rw1) {
    nlohmann::json entry = {{"col", t.column}, {"K", t.bins}};
    if (!t.edges.empty()) entry["edges"] = t.edges;
    if (!t.sum_to_zero) entry["sum_to_zero"] = false;
    doc["rw1"].push_back(entry);
  }
  doc["priors"] = {{"coef_variance", spec.coef_variance},
                   {"tau_shape", spec.tau_shape},
                   {"tau_rate", spec.tau_rate}};
  return doc.dump(2) + "\n";
}

ModelSpec parse_model_spec(std::string_view text, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UserError(name + ": " + e.what());
  }
  ModelSpec spec;
  try {
    if (doc.contains("fixed")) spec.fixed = doc["fixed"].get<std::vector<std::string>>();
    if (doc.contains("iid")) spec.iid = doc["iid"].get<std::vector<std::string>>();
    if (doc.contains("rw1")) {
      for (const auto& entry : doc["rw1"]) {
        Rw1Spec t;
        t.column = entry.at("col").get<std::string>();
        if (entry.contains("K")) t.bins = entry["K"].get<Index>();
        if (entry.contains("edges")) {
          t.edges = entry["edges"].get<std::vector<double>>();
          t.bins = static_cast<Index>(t.edges.size()) - 1;
        }
        if (entry.contains("sum_to_zero")) t.sum_to_zero = entry["sum_to_zero"].get<bool>();
        spec.rw1.push_back(std::move(t));
      }
    }
    if (doc.contains("priors")) {
      const auto& p = doc["priors"];
      if (p.contains("coef_variance")) spec.coef_variance = p["coef_variance"].get<double>();
      if (p.contains("tau_shape")) spec.tau_shape = p["tau_shape"].get<double>();
      if (p.contains("tau_rate")) spec.tau_rate = p["tau_rate"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError(name + ": " + e.what());
  }
  spec.validate();
  return spec;
}

ModelSpec read_model_spec(const std::string& path) {
  return parse_model_spec(read_text_file(path), path);
}

Index bin_of(double x, const Vector& edges) {
  const Index bins = edges.size() - 1;
  const double* begin = edges.data();
  const double* end = begin + edges.size();
  Index k = static_cast<Index>(std::upper_bound(begin, end, x) - begin) - 1;
  if (k < 0) k = 0;          // below range: clamp into the first bin
  if (k >= bins) k = bins - 1;  // top edge and above: last bin
  return k;
}

DesignMatrix build_design(const SlopeUnitTable& table, const ModelSpec& spec) {
  spec.validate();
  DesignMatrix design;
  design.n = table.n();
  design.coef_variance = spec.coef_variance;
  design.tau_shape = spec.tau_shape;
  design.tau_rate = spec.tau_rate;

  design.fixed_names = spec.fixed;
  design.X.resize(design.n, static_cast<Index>(spec.fixed.size()));
  for (Index j = 0; j < static_cast<Index>(spec.fixed.size()); ++j) {
    const Vector col = table.column(spec.fixed[static_cast<std::size_t>(j)]);
    if (!is_standardized(col)) {
      throw UserError("build_design: fixed column '" +
                      spec.fixed[static_cast<std::size_t>(j)] + "' is not standardized");
    }
    design.X.col(j) = col;
  }

  for (const auto& name : spec.iid) {
    const Vector col = table.column(name);
    IidDesign term;
    term.column = name;
    std::set<int> codes;
    for (Index i = 0; i < col.size(); ++i) {
      const double v = col[i];
      if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw UserError("build_design: iid column '" + name +
                        "' holds non-integer code " + format_double(v));
      }
      codes.insert(static_cast<int>(v));
    }
    term.classes.assign(codes.begin(), codes.end());
    term.index.resize(col.size());
    for (Index i = 0; i < col.size(); ++i) {
      const auto it = std::lower_bound(term.classes.begin(), term.classes.end(),
                                       static_cast<int>(col[i]));
      term.index[i] = static_cast<int>(it - term.classes.begin());
    }
    design.iid.push_back(std::move(term));
  }

  for (const auto& t : spec.rw1) {
    const Vector col = table.column(t.column);
    Rw1Design term;
    term.column = t.column;
    term.sum_to_zero = t.sum_to_zero;
    if (!t.edges.empty()) {
      term.edges = Eigen::Map<const Vector>(t.edges.data(),
                                            static_cast<Index>(t.edges.size()));
    } else {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      if (!(hi > lo)) {
        throw UserError("build_design: rw1 column '" + t.column +
                        "' has no spread to bin");
      }
      term.edges.resize(t.bins + 1);
      for (Index k = 0; k <= t.bins; ++k) {
        term.edges[k] = k == t.bins
                            ? hi
                            : lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(t.bins);
      }
    }
    term.index.resize(col.size());
    for (Index i = 0; i < col.size(); ++i) {
      term.index[i] = static_cast<int>(bin_of(col[i], term.edges));
    }
    design.rw1.push_back(std::move(term));
  }
  return design;
}

ParameterLayout layout_of(const DesignMatrix& design) {
  ParameterLayout layout;
  layout.n_fixed = static_cast<Index>(design.fixed_names.size());
  Index pos = 1 + layout.n_fixed;
  for (const auto& term : design.iid) {
    layout.iid_blocks.push_back({pos, static_cast<Index>(term.classes.size())});
    pos += static_cast<Index>(term.classes.size());
  }
  for (const auto& term : design.rw1) {
    layout.rw1_blocks.push_back({pos, term.bins()});
    pos += term.bins();
  }
  layout.tau_start = pos;
  layout.n_tau = static_cast<Index>(design.iid.size() + design.rw1.size());
  layout.total = pos + layout.n_tau;
  return layout;
}

std::vector<std::string> parameter_names(const DesignMatrix& design) {
  std::vector<std::string> names;
  names.emplace_back("intercept");
  for (const auto& c : design.fixed_names) names.push_back(c);
  for (const auto& term : design.iid) {
    for (int code : term.classes) names.push_back(term.column + "[" + format_int(code) + "]");
  }
  for (const auto& term : design.rw1) {
    for (Index k = 1; k <= term.bins(); ++k) {
      names.push_back(term.column + "[" + format_int(k) + "]");
    }
  }
  for (const auto& term : design.iid) names.push_back("log_tau[" + term.column + "]");
  for (const auto& term : design.rw1) names.push_back("log_tau[" + term.column + "]");
  return names;
}

Vector linear_predictor(const Vector& params, const DesignMatrix& design) {
  const ParameterLayout layout = layout_of(design);
  if (params.size() != layout.total) {
    throw InternalError("linear_predictor: parameter vector has " +
                        format_int(params.size()) + " entries, layout needs " +
                        format_int(layout.total));
  }
  Vector eta(design.n);
  const auto n_iid = static_cast<Index>(design.iid.size());
  const auto n_rw1 = static_cast<Index>(design.rw1.size());
  for (Index i = 0; i < design.n; ++i) {
    // One fixed accumulation order; every caller (reference simulation,
    // scenario swap, CV prediction) inherits bitwise-identical eta from it.
    double acc = params[ParameterLayout::kIntercept];
    for (Index j = 0; j < layout.n_fixed; ++j) {
      acc += params[layout.fixed_at(j)] * design.X(i, j);
    }
    for (Index t = 0; t < n_iid; ++t) {
      acc += params[layout.iid_blocks[static_cast<std::size_t>(t)].start +
                    design.iid[static_cast<std::size_t>(t)].index[i]];
    }
    for (Index t = 0; t < n_rw1; ++t) {
      acc += params[layout.rw1_blocks[static_cast<std::size_t>(t)].start +
                    design.rw1[static_cast<std::size_t>(t)].index[i]];
    }
    eta[i] = acc;
  }
  return eta;
}

double log_likelihood(const Vector& eta, const IndexVector& labels) {
  if (eta.size() != labels.size()) {
    throw InternalError("log_likelihood: eta/labels size mismatch");
  }
  double val = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    const int y = labels[i];
    if (y != 0 && y != 1) {
      throw InternalError("log_likelihood: label " + format_int(y) + " is not 0/1");
    }
    val += static_cast<double>(y) * eta[i] - log1p_exp(eta[i]);
  }
  return val;
}

LogPosterior log_posterior(const Vector& params, const DesignMatrix& design,
                           const IndexVector& labels) {
  static constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
  const ParameterLayout layout = layout_of(design);
  if (params.size() != layout.total) {
    throw InternalError("log_posterior: parameter size mismatch");
  }
  if (labels.size() != design.n) {
    throw InternalError("log_posterior: label count does not match design");
  }

  LogPosterior out;
  out.gradient = Vector::Zero(layout.total);
  const Vector eta = linear_predictor(params, design);

  // Likelihood and its residuals, scattered into every block the SU touches.
  for (Index i = 0; i < design.n; ++i) {
    const int y = labels[i];
    if (y != 0 && y != 1) {
      throw InternalError("log_posterior: label " + format_int(y) + " is not 0/1");
    }
    out.value += static_cast<double>(y) * eta[i] - log1p_exp(eta[i]);
    const double r = static_cast<double>(y) - inverse_logit(eta[i]);
    out.gradient[ParameterLayout::kIntercept] += r;
    for (Index j = 0; j < layout.n_fixed; ++j) {
      out.gradient[layout.fixed_at(j)] += r * design.X(i, j);
    }
    for (std::size_t t = 0; t < design.iid.size(); ++t) {
      out.gradient[layout.iid_blocks[t].start + design.iid[t].index[i]] += r;
    }
    for (std::size_t t = 0; t < design.rw1.size(); ++t) {
      out.gradient[layout.rw1_blocks[t].start + design.rw1[t].index[i]] += r;
    }
  }

  // Gaussian prior on intercept and fixed coefficients.
  const double v = design.coef_variance;
  for (Index j = 0; j <= layout.n_fixed; ++j) {
    const double b = params[j];
    out.value += -0.5 * (kLog2Pi + std::log(v)) - b * b / (2.0 * v);
    out.gradient[j] -= b / v;
  }

  const double a = design.tau_shape;
  const double rate = design.tau_rate;
  const double gamma_const = a * std::log(rate) - std::lgamma(a);

  // iid blocks: exchangeable Gaussian(0, 1/tau) effects.
  for (std::size_t t = 0; t < design.iid.size(); ++t) {
    const auto& block = layout.iid_blocks[t];
    const Index theta_at = layout.tau_at(static_cast<Index>(t));
    const double theta = params[theta_at];
    const double tau = std::exp(theta);
    double ss = 0.0;
    for (Index k = 0; k < block.size; ++k) {
      const double u = params[block.start + k];
      ss += u * u;
      out.gradient[block.start + k] -= tau * u;
    }
    const double K = static_cast<double>(block.size);
    out.value += 0.5 * K * (theta - kLog2Pi) - 0.5 * tau * ss;
    out.value += a * theta - rate * tau + gamma_const;
    out.gradient[theta_at] += 0.5 * K - 0.5 * tau * ss + a - rate * tau;
  }

  // RW1 blocks: intrinsic first-difference prior, rank K-1.
  for (std::size_t t = 0; t < design.rw1.size(); ++t) {
    const auto& block = layout.rw1_blocks[t];
    const Index theta_at = layout.tau_at(static_cast<Index>(design.iid.size() + t));
    const double theta = params[theta_at];
    const double tau = std::exp(theta);
    double ss = 0.0;
    for (Index k = 0; k + 1 < block.size; ++k) {
      const double d = params[block.start + k + 1] - params[block.start + k];
      ss += d * d;
    }
    for (Index k = 0; k < block.size; ++k) {
      // (Q f)_k for the first-difference structure matrix Q.
      double q = 0.0;
      if (k > 0) q += params[block.start + k] - params[block.start + k - 1];
      if (k + 1 < block.size) q += params[block.start + k] - params[block.start + k + 1];
      out.gradient[block.start + k] -= tau * q;
    }
    const double Km1 = static_cast<double>(block.size - 1);
    out.value += 0.5 * Km1 * (theta - kLog2Pi) - 0.5 * tau * ss;
    out.value += a * theta - rate * tau + gamma_const;
    out.gradient[theta_at] += 0.5 * Km1 - 0.5 * tau * ss + a - rate * tau;
  }

  return out;
}

}  // namespace sugam
