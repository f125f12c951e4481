#include "sugam/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sugam/io.hpp"

namespace sugam {

namespace {

std::string num(double x) { return format_double(x); }

std::string svg_open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
         num(height) + "\">\n";
}

std::string text_at(double x, double y, const std::string& s, double size,
                    const std::string& anchor = "start") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
         "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s +
         "</text>\n";
}

std::string line_at(double x1, double y1, double x2, double y2,
                    const std::string& stroke, const std::string& extra = "") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"1\"" +
         extra + "/>\n";
}

std::string rect_at(double x, double y, double w, double h, const std::string& fill) {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
}

std::string rgb_hex(int r, int g, int b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return std::string(buf);
}

// Compact viridis-style ramp, linearly interpolated between five anchors.
std::string ramp_color(double t) {
  static const double stops[5][4] = {{0.00, 68, 1, 84},
                                     {0.25, 59, 82, 139},
                                     {0.50, 33, 145, 140},
                                     {0.75, 94, 201, 98},
                                     {1.00, 253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  int hi = 1;
  while (hi < 4 && stops[hi][0] < t) ++hi;
  const double* a = stops[hi - 1];
  const double* b = stops[hi];
  const double f = (t - a[0]) / (b[0] - a[0]);
  const auto mix = [&](int c) { return static_cast<int>(std::lround(a[c] + f * (b[c] - a[c]))); };
  return rgb_hex(mix(1), mix(2), mix(3));
}

const char* fold_color(std::size_t i) {
  static const char* palette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};
  return palette[i % 10];
}

struct Frame {
  double width, height, left, right, top, bottom;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
  double x(double u) const { return left + u * plot_w(); }          // u in [0,1]
  double y(double v) const { return height - bottom - v * plot_h(); }
};

std::string unit_axes(const Frame& f, const std::string& xlabel,
                      const std::string& ylabel) {
  std::string out;
  out += line_at(f.x(0), f.y(0), f.x(1), f.y(0), "black");
  out += line_at(f.x(0), f.y(0), f.x(0), f.y(1), "black");
  for (int k = 0; k <= 4; ++k) {
    const double v = 0.25 * k;
    out += line_at(f.x(v), f.y(0), f.x(v), f.y(0) + 4, "black");
    out += text_at(f.x(v), f.y(0) + 16, num(v), 11, "middle");
    out += line_at(f.x(0) - 4, f.y(v), f.x(0), f.y(v), "black");
    out += text_at(f.x(0) - 7, f.y(v) + 4, num(v), 11, "end");
  }
  out += text_at(f.x(0.5), f.height - 8, xlabel, 12, "middle");
  out += "<text x=\"14\" y=\"" + num(f.y(0.5)) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 " +
         num(f.y(0.5)) + ")\">" + ylabel + "</text>\n";
  return out;
}

}  // namespace

std::string roc_svg(const std::vector<RocCurve>& curves,
                    const std::vector<Index>& fold_ids,
                    const std::vector<double>& aucs) {
  const Frame f{640, 520, 56, 170, 20, 46};
  std::string out = svg_open(f.width, f.height);
  out += rect_at(0, 0, f.width, f.height, "white");
  out += unit_axes(f, "false positive rate", "true positive rate");
  out += line_at(f.x(0), f.y(0), f.x(1), f.y(1), "#999999",
                 " stroke-dasharray=\"4 3\"");

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    std::string d = "M";
    for (Index i = 0; i < curve.fpr.size(); ++i) {
      if (i > 0) d += " L";
      d += num(f.x(curve.fpr[i])) + " " + num(f.y(curve.tpr[i]));
    }
    out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" +
           fold_color(c) + "\" stroke-width=\"1.5\"/>\n";
    const double ly = 40.0 + 18.0 * static_cast<double>(c);
    out += rect_at(f.width - 160, ly - 9, 12, 12, fold_color(c));
    std::string label = "fold " + format_int(fold_ids[c]);
    if (c < aucs.size()) label += "  AUC " + num(std::round(aucs[c] * 1000.0) / 1000.0);
    out += text_at(f.width - 143, ly + 1, label, 11);
  }
  out += "</svg>\n";
  return out;
}

std::string su_map_svg(const SuPartition& part, const Vector& values,
                       const std::string& title, double vmin, double vmax) {
  if (values.size() != part.size()) {
    throw InternalError("su_map_svg: one value per SU required");
  }
  const auto& g = part.grid;
  const auto ncols = static_cast<double>(g.ncols());
  const auto nrows = static_cast<double>(g.nrows());
  const double header = nrows * 0.09 + 2.0;  // title band in cell units
  const double legend = nrows * 0.12 + 2.0;
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" viewBox=\"0 0 " +
      num(ncols) + " " + num(nrows + header + legend) + "\">\n";
  out += rect_at(0, 0, ncols, nrows + header + legend, "white");
  out += text_at(ncols / 2.0, header * 0.7, title, header * 0.55, "middle");

  const double span = vmax > vmin ? vmax - vmin : 1.0;
  for (Index r = 0; r < g.nrows(); ++r) {
    Index c = 0;
    while (c < g.ncols()) {
      const int id = g.values(r, c);
      if (id == g.nodata) {
        ++c;
        continue;
      }
      Index run = c + 1;
      while (run < g.ncols() && g.values(r, run) == id) ++run;
      const double v = values[part.index_of.at(id)];
      const std::string fill =
          std::isnan(v) ? "#bbbbbb" : ramp_color((v - vmin) / span);
      out += rect_at(static_cast<double>(c), header + static_cast<double>(r),
                     static_cast<double>(run - c), 1.0, fill);
      c = run;
    }
  }

  // Legend: a discrete gradient bar with end labels.
  const double bar_y = header + nrows + legend * 0.25;
  const double bar_h = legend * 0.35;
  const double bar_w = ncols * 0.6;
  const double bar_x = ncols * 0.2;
  const int steps = 32;
  for (int s = 0; s < steps; ++s) {
    const double t = (static_cast<double>(s) + 0.5) / steps;
    out += rect_at(bar_x + bar_w * s / steps, bar_y, bar_w / steps + 0.5, bar_h,
                   ramp_color(t));
  }
  const double label_size = legend * 0.3;
  out += text_at(bar_x, bar_y + bar_h + label_size, num(vmin), label_size, "middle");
  out += text_at(bar_x + bar_w, bar_y + bar_h + label_size, num(vmax), label_size,
                 "middle");
  out += "</svg>\n";
  return out;
}

std::string error_plot_svg(const ErrorPlotData& data, const std::string& title) {
  const Frame f{640, 520, 56, 30, 40, 46};
  double max_w = 0.0;
  for (Index i = 0; i < data.ci_width.size(); ++i) max_w = std::max(max_w, data.ci_width[i]);
  if (!(max_w > 0.0)) max_w = 1.0;

  std::string out = svg_open(f.width, f.height);
  out += rect_at(0, 0, f.width, f.height, "white");
  out += text_at(f.width / 2.0, 24, title, 14, "middle");
  out += unit_axes(f, "posterior mean susceptibility", "95% CI width");
  // y tick labels above are unit-square; annotate the true max on the side.
  out += text_at(f.x(0) - 7, f.y(1) - 8, "1.0 = " + num(max_w), 10, "end");

  for (Index i = 0; i < data.mean.size(); ++i) {
    out += "<circle cx=\"" + num(f.x(data.mean[i])) + "\" cy=\"" +
           num(f.y(data.ci_width[i] / max_w)) +
           "\" r=\"1.6\" fill=\"#1f77b4\" fill-opacity=\"0.55\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace sugam
