#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>

#include "phonon/sweep.hpp"

namespace phonon {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 110.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// Linear or logarithmic map from data range onto [0, 1].
struct Scale {
  double lo;
  double hi;
  bool log;

  double operator()(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }
};

Scale scale_for(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) {
    lo = log ? 0.1 : 0.0;
    hi = log ? 10.0 : 1.0;
  }
  if (hi == lo) {
    if (log) {
      lo /= 10.0;
      hi *= 10.0;
    } else {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  return {lo, hi, log};
}

// The first requested output is the plotted quantity.
std::optional<std::size_t> primary_column(const SweepResult& r) {
  if (r.spec.outputs.empty()) return std::nullopt;
  return std::size_t{0};
}

bool is_g2(Output o) { return o == Output::g2_numeric || o == Output::g2_analytic; }

void header(std::string& out, const std::string& title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kLeft + kPlotW / 2) + "\" y=\"18\" text-anchor=\"middle\">" + escape(title) +
         "</text>\n";
}

void frame(std::string& out, const std::string& xlabel, const std::string& ylabel) {
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(kPlotW) + "\" height=\"" +
         fmt(kPlotH) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt(kLeft + kPlotW / 2) + "\" y=\"" + fmt(kHeight - 15) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt(kTop + kPlotH / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt(kTop + kPlotH / 2) + ")\">" + escape(ylabel) + "</text>\n";
}

void ticks(std::string& out, const Scale& xs, const Scale& ys) {
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double xv = xs.log ? std::pow(10.0, std::log10(xs.lo) + t * (std::log10(xs.hi) - std::log10(xs.lo)))
                             : xs.lo + t * (xs.hi - xs.lo);
    const double yv = ys.log ? std::pow(10.0, std::log10(ys.lo) + t * (std::log10(ys.hi) - std::log10(ys.lo)))
                             : ys.lo + t * (ys.hi - ys.lo);
    const double px = kLeft + t * kPlotW;
    const double py = kTop + kPlotH - t * kPlotH;
    out += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kTop + kPlotH) + "\" x2=\"" + fmt(px) + "\" y2=\"" +
           fmt(kTop + kPlotH + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(kTop + kPlotH + 18) + "\" text-anchor=\"middle\">" + label(xv) +
           "</text>\n";
    out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(py) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\">" + label(yv) +
           "</text>\n";
  }
}

// Polyline segments broken at missing values.
void series(std::string& out, const std::vector<double>& xs_data, const std::vector<double>& ys_data,
            const Scale& xs, const Scale& ys, const char* colour, const std::string& dash) {
  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"" + dash +
             " points=\"" + points + "\"/>\n";
    }
    points.clear();
  };
  for (std::size_t i = 0; i < xs_data.size(); ++i) {
    const double y = ys_data[i];
    if (!std::isfinite(y) || (ys.log && !(y > 0.0))) {
      flush();
      continue;
    }
    const double py = kTop + kPlotH - std::clamp(ys(y), 0.0, 1.0) * kPlotH;
    const double px = kLeft + xs(xs_data[i]) * kPlotW;
    if (!points.empty()) points += ' ';
    points += fmt(px) + "," + fmt(py);
  }
  flush();
}

void legend(std::string& out, std::size_t index, const std::string& text, const char* colour) {
  const double y = kTop + 15.0 + 18.0 * static_cast<double>(index);
  const double x = kLeft + kPlotW + 10.0;
  out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x + 20) + "\" y2=\"" + fmt(y) +
         "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
  out += "<text x=\"" + fmt(x + 25) + "\" y=\"" + fmt(y + 4) + "\">" + escape(text) + "</text>\n";
}

std::vector<double> column(const SweepResult& r, std::size_t col, std::size_t begin, std::size_t end) {
  std::vector<double> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(r.rows[i].outputs[col]);
  return out;
}

std::string line_plot(const SweepResult& r) {
  const Axis& x_axis = r.spec.axes[0];
  const auto primary = primary_column(r);
  std::vector<std::size_t> cols;
  bool log_y = false;
  if (primary && is_g2(r.spec.outputs[*primary])) {
    log_y = true;
    for (std::size_t c = 0; c < r.spec.outputs.size(); ++c) {
      if (is_g2(r.spec.outputs[c])) cols.push_back(c);
    }
  } else if (primary) {
    cols.push_back(*primary);
  }

  std::vector<double> all;
  for (std::size_t c : cols) {
    const auto v = column(r, c, 0, r.rows.size());
    all.insert(all.end(), v.begin(), v.end());
  }
  const Scale xs = scale_for(x_axis.values, x_axis.spacing == Spacing::log);
  const Scale ys = scale_for(all, log_y);

  std::string out;
  header(out, r.spec.name);
  frame(out, x_axis.name, cols.empty() ? std::string{} : std::string(to_string(r.spec.outputs[cols[0]])));
  ticks(out, xs, ys);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const char* colour = kPalette[k % kPalette.size()];
    series(out, x_axis.values, column(r, cols[k], 0, r.rows.size()), xs, ys, colour, "");
    legend(out, k, std::string(to_string(r.spec.outputs[cols[k]])), colour);
  }
  out += "</svg>\n";
  return out;
}

// One curve per value of the outer (listed) axis.
std::string family_plot(const SweepResult& r) {
  const Axis& outer = r.spec.axes[0];
  const Axis& x_axis = r.spec.axes[1];
  const auto primary = primary_column(r);
  const bool log_y = primary && is_g2(r.spec.outputs[*primary]);
  const std::size_t inner = x_axis.values.size();

  std::vector<double> all;
  if (primary) all = column(r, *primary, 0, r.rows.size());
  const Scale xs = scale_for(x_axis.values, x_axis.spacing == Spacing::log);
  const Scale ys = scale_for(all, log_y);

  std::string out;
  header(out, r.spec.name);
  frame(out, x_axis.name, primary ? std::string(to_string(r.spec.outputs[*primary])) : std::string{});
  ticks(out, xs, ys);
  if (primary) {
    for (std::size_t k = 0; k < outer.values.size(); ++k) {
      const char* colour = kPalette[k % kPalette.size()];
      series(out, x_axis.values, column(r, *primary, k * inner, (k + 1) * inner), xs, ys, colour, "");
      legend(out, k, outer.name + " = " + label(outer.values[k]), colour);
    }
  }
  out += "</svg>\n";
  return out;
}

std::string colour_for(double t) {
  // Dark blue -> teal -> yellow.
  static const std::array<std::array<double, 3>, 3> stops{{{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * 2.0;
  const auto i = static_cast<std::size_t>(std::min(1.0, std::floor(s)));
  const double f = s - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

// Position of `v` in cell units along an axis (cell k spans [k, k+1]).
std::optional<double> cell_position(const Axis& axis, double v) {
  const auto& a = axis.values;
  const bool log = axis.spacing == Spacing::log;
  auto tr = [&](double x) { return log ? std::log(x) : x; };
  if (log && !(v > 0.0)) return std::nullopt;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    const double lo = std::min(a[k], a[k + 1]);
    const double hi = std::max(a[k], a[k + 1]);
    if (v >= lo && v <= hi) {
      const double f = (tr(v) - tr(a[k])) / (tr(a[k + 1]) - tr(a[k]));
      return static_cast<double>(k) + 0.5 + f;
    }
  }
  return std::nullopt;
}

void overlay(std::string& out, const Axis& x_axis, const Axis& y_axis, double cell_w, double cell_h,
             const std::function<double(double)>& x_of_y) {
  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      out += "<polyline fill=\"none\" stroke=\"white\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" points=\"" +
             points + "\"/>\n";
    }
    points.clear();
  };
  for (double y : y_axis.values) {
    const auto px = cell_position(x_axis, x_of_y(y));
    const auto py = cell_position(y_axis, y);
    if (!px || !py) {
      flush();
      continue;
    }
    if (!points.empty()) points += ' ';
    points += fmt(kLeft + *px * cell_w) + "," + fmt(kTop + kPlotH - *py * cell_h);
  }
  flush();
}

std::string heatmap(const SweepResult& r) {
  const Axis& x_axis = r.spec.axes[0];
  const Axis& y_axis = r.spec.axes[1];
  const std::size_t nx = x_axis.values.size();
  const std::size_t ny = y_axis.values.size();
  const auto primary = primary_column(r);
  const bool log_z = primary && is_g2(r.spec.outputs[*primary]);

  std::vector<double> z(r.rows.size(), std::numeric_limits<double>::quiet_NaN());
  if (primary) {
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const double v = r.rows[i].outputs[*primary];
      z[i] = log_z ? (v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN()) : v;
    }
  }
  const Scale zs = scale_for(z, false);
  const double cell_w = kPlotW / static_cast<double>(nx);
  const double cell_h = kPlotH / static_cast<double>(ny);

  std::string out;
  header(out, r.spec.name);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double v = z[ix * ny + iy];
      const std::string fill = std::isfinite(v) ? colour_for(zs(v)) : std::string("#bbbbbb");
      out += "<rect x=\"" + fmt(kLeft + ix * cell_w) + "\" y=\"" + fmt(kTop + kPlotH - (iy + 1) * cell_h) +
             "\" width=\"" + fmt(cell_w + 0.05) + "\" height=\"" + fmt(cell_h + 0.05) + "\" fill=\"" + fill +
             "\"/>\n";
    }
  }

  if (x_axis.name == "delta_p" && y_axis.name == "g") {
    overlay(out, x_axis, y_axis, cell_w, cell_h, [](double g) { return std::sqrt(2.0) * g / 2.0; });
    overlay(out, x_axis, y_axis, cell_w, cell_h, [](double g) { return -std::sqrt(2.0) * g / 2.0; });
  } else if (x_axis.name == "kappa" && y_axis.name == "gamma") {
    // Unit cooperativity: kappa gamma = 4 g^2.
    const double g = r.spec.base.g;
    overlay(out, x_axis, y_axis, cell_w, cell_h, [g](double gamma) { return 4.0 * g * g / gamma; });
  }

  const std::string zlabel = primary ? (log_z ? "log10 " : "") + std::string(to_string(r.spec.outputs[*primary]))
                                     : std::string{};
  frame(out, x_axis.name, y_axis.name);
  auto tick_label = [](const Axis& axis, std::size_t k) { return label(axis.values[k]); };
  for (std::size_t k : {std::size_t{0}, nx / 2, nx - 1}) {
    const double px = kLeft + (static_cast<double>(k) + 0.5) * cell_w;
    out += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(kTop + kPlotH + 18) + "\" text-anchor=\"middle\">" +
           tick_label(x_axis, k) + "</text>\n";
  }
  for (std::size_t k : {std::size_t{0}, ny / 2, ny - 1}) {
    const double py = kTop + kPlotH - (static_cast<double>(k) + 0.5) * cell_h;
    out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\">" +
           tick_label(y_axis, k) + "</text>\n";
  }

  // Colour bar.
  const double bx = kLeft + kPlotW + 20.0;
  for (int k = 0; k < 50; ++k) {
    const double t = k / 49.0;
    out += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(kTop + kPlotH - (k + 1) * kPlotH / 50.0) +
           "\" width=\"15\" height=\"" + fmt(kPlotH / 50.0 + 0.05) + "\" fill=\"" + colour_for(t) + "\"/>\n";
  }
  out += "<text x=\"" + fmt(bx + 20) + "\" y=\"" + fmt(kTop + kPlotH) + "\">" + label(zs.lo) + "</text>\n";
  out += "<text x=\"" + fmt(bx + 20) + "\" y=\"" + fmt(kTop + 10) + "\">" + label(zs.hi) + "</text>\n";
  out += "<text x=\"" + fmt(bx) + "\" y=\"" + fmt(kTop + kPlotH + 35) + "\">" + escape(zlabel) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string to_svg(const SweepResult& result) {
  const auto& axes = result.spec.axes;
  if (axes.size() == 1) return line_plot(result);
  if (axes.size() == 2 && axes[0].spacing == Spacing::list) return family_plot(result);
  if (axes.size() == 2) return heatmap(result);
  throw Error(ErrorCode::unsupported_shape, "cannot plot a sweep with " + std::to_string(axes.size()) + " axes");
}

void render_svg(const SweepResult& result, const std::filesystem::path& path) {
  const std::string text = to_svg(result);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open '" + path.string() + "' for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw Error(ErrorCode::io_failure, "failed writing '" + path.string() + "'");
}

}  // namespace phonon
