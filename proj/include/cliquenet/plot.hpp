#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Minimal SVG line charts, enough to eyeball a sweep next to its prediction:
// linear or log-10 y axis, markers, error bars, dashes for model curves.

namespace cliquenet {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_low;   // optional error bars; empty or same length
  std::vector<double> y_high;
  bool dashed = false;
  bool markers = true;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 760;
  int height = 520;
};

namespace plot_detail {

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Tick positions at a 1/2/5 step covering [lo, hi].
inline std::vector<double> linear_ticks(double lo, double hi) {
  double span = hi - lo;
  if (!(span > 0)) return {lo};
  double raw = span / 6.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * mag;
    if (span / step <= 7.0) break;
  }
  std::vector<double> ticks;
  double first = std::ceil(lo / step - 1e-9) * step;
  for (double v = first; v <= hi + step * 1e-9; v += step) ticks.push_back(v);
  return ticks;
}

}  // namespace plot_detail

inline void render_plot_svg(std::span<const PlotSeries> series, const PlotOptions& opt,
                            std::ostream& os) {
  using plot_detail::escape;
  using plot_detail::num;

  const double L = 76, R = 18, T = opt.title.empty() ? 16 : 40, B = 52;
  const double W = opt.width, H = opt.height;
  const double plot_w = W - L - R, plot_h = H - T - B;

  auto usable = [&](double v) { return std::isfinite(v) && (!opt.log_y || v > 0.0); };

  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool any = false;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      double ylo = i < s.y_low.size() && usable(s.y_low[i]) ? s.y_low[i] : s.y[i];
      double yhi = i < s.y_high.size() && usable(s.y_high[i]) ? s.y_high[i] : s.y[i];
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = ylo;
        y_max = yhi;
        any = true;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, ylo);
        y_max = std::max(y_max, yhi);
      }
    }
  }
  if (!any) {
    x_min = 0, x_max = 1, y_min = opt.log_y ? 0.1 : 0, y_max = 1;
  }
  if (x_max == x_min) {
    x_min -= 1;
    x_max += 1;
  }

  std::vector<double> y_ticks;
  if (opt.log_y) {
    int lo = static_cast<int>(std::floor(std::log10(y_min)));
    int hi = static_cast<int>(std::ceil(std::log10(y_max)));
    if (hi == lo) ++hi;
    y_min = std::pow(10.0, lo);
    y_max = std::pow(10.0, hi);
    for (int e = lo; e <= hi; ++e) y_ticks.push_back(std::pow(10.0, e));
  } else {
    if (y_min > 0) y_min = 0;
    if (y_max == y_min) y_max = y_min + 1;
    y_max += (y_max - y_min) * 0.05;
    y_ticks = plot_detail::linear_ticks(y_min, y_max);
  }
  std::vector<double> x_ticks = plot_detail::linear_ticks(x_min, x_max);

  auto px = [&](double x) { return L + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    double t = opt.log_y ? (std::log10(y) - std::log10(y_min)) /
                               (std::log10(y_max) - std::log10(y_min))
                         : (y - y_min) / (y_max - y_min);
    return T + (1.0 - t) * plot_h;
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  const std::size_t palette_n = sizeof palette / sizeof palette[0];

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
     << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
  os << "<rect width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" fill=\"white\"/>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  // gridlines and tick labels
  for (double v : y_ticks) {
    double y = py(v);
    os << "<line x1=\"" << num(L) << "\" y1=\"" << num(y) << "\" x2=\"" << num(L + plot_w)
       << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << num(L - 6) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  for (double v : x_ticks) {
    double x = px(v);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(T) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(T + plot_h) << "\" stroke=\"#eeeeee\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(T + plot_h + 18)
       << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  os << "<rect x=\"" << num(L) << "\" y=\"" << num(T) << "\" width=\"" << num(plot_w)
     << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  if (!opt.title.empty())
    os << "<text x=\"" << num(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(opt.title) << "</text>\n";
  if (!opt.x_label.empty())
    os << "<text x=\"" << num(L + plot_w / 2) << "\" y=\"" << num(H - 12)
       << "\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n";
  if (!opt.y_label.empty())
    os << "<text x=\"16\" y=\"" << num(T + plot_h / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << num(T + plot_h / 2)
       << ")\">" << escape(opt.y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = palette[si % palette_n];

    // error bars first so the line sits on top
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i >= s.y_low.size() || i >= s.y_high.size()) break;
      if (!std::isfinite(s.x[i]) || !usable(s.y_low[i]) || !usable(s.y_high[i])) continue;
      double x = px(s.x[i]), y0 = py(s.y_low[i]), y1 = py(s.y_high[i]);
      os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x)
         << "\" y2=\"" << num(y1) << "\" stroke=\"" << color << "\"/>\n";
      os << "<line x1=\"" << num(x - 3) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x + 3)
         << "\" y2=\"" << num(y0) << "\" stroke=\"" << color << "\"/>\n";
      os << "<line x1=\"" << num(x - 3) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x + 3)
         << "\" y2=\"" << num(y1) << "\" stroke=\"" << color << "\"/>\n";
    }

    std::string path;
    bool open = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) {
        open = false;  // break the line across undrawable points
        continue;
      }
      path += open ? " L " : " M ";
      path += num(px(s.x[i])) + " " + num(py(s.y[i]));
      open = true;
    }
    if (!path.empty()) {
      os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.6\"";
      if (s.dashed) os << " stroke-dasharray=\"6 4\"";
      os << "/>\n";
    }
    if (s.markers)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
  }

  // legend, top-right corner of the plotting area
  double ly = T + 14;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    if (s.label.empty()) continue;
    const char* color = palette[si % palette_n];
    double lx = L + plot_w - 150;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 26)
       << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << "/>\n";
    os << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly) << "\">" << escape(s.label)
       << "</text>\n";
    ly += 18;
  }

  os << "</g>\n</svg>\n";
}

}  // namespace cliquenet
