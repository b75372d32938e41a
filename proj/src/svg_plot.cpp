#include "polyvem/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace polyvem {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v, bool log) {
  char buf[32];
  if (log) {
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0); }

  void fit(double a, double b) {
    lo = a;
    hi = b;
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    if (log) {
      lo = std::floor(lo);
      hi = std::ceil(hi);
    } else {
      double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8)));
      for (double v = lo; v <= hi + 1e-9; v += step) t.push_back(v);
    } else {
      const double raw = (hi - lo) / 6;
      const double mag = std::pow(10, std::floor(std::log10(raw)));
      double step = mag;
      for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
          step = m * mag;
          break;
        }
      for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
    }
    return t;
  }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const double left = 80, right = 150, top = 40, bottom = 60;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;

  Axis ax, ay;
  ax.log = spec.log_x;
  ay.log = spec.log_y;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      xmin = std::min(xmin, ax.map(s.x[i]));
      xmax = std::max(xmax, ax.map(s.x[i]));
      ymin = std::min(ymin, ay.map(s.y[i]));
      ymax = std::max(ymax, ay.map(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0;
  ax.fit(xmin, xmax);
  ay.fit(ymin, ymax);
  auto px = [&](double v) { return left + (v - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (v - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n";

  for (double t : ax.ticks()) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(t)) << "\" y2=\""
      << num(top + ph) << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t, ax.log) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + pw) << "\" y2=\""
      << num(py(t)) << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
      << tick_label(t, ay.log) << "</text>\n";
  }
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(spec.height - 18.0) << "\" text-anchor=\"middle\">"
    << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.y_label) << "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kColors[si % std::size(kColors)];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      double x = px(ax.map(s.x[i])), y = py(ay.map(s.y[i]));
      pts += num(x) + "," + num(y) + " ";
      o << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!pts.empty())
      o << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(si);
    o << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(left + pw + 32)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
  }

  for (const auto& m : spec.slopes) {
    if (m.series >= spec.series.size()) continue;
    const auto& s = spec.series[m.series];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (ax.usable(s.x[i]) && ay.usable(s.y[i])) pts.emplace_back(ax.map(s.x[i]), ay.map(s.y[i]));
    if (pts.size() < 2) continue;
    std::sort(pts.begin(), pts.end());
    // triangle below the right end of the series, spanning a third of it
    const double x1 = pts.back().first, x0 = x1 - (x1 - pts.front().first) / 3;
    const double y1 = pts.back().second - 0.08 * (ay.hi - ay.lo) * (m.slope < 0 ? 1 : -1);
    const double y0 = y1 - m.slope * (x1 - x0);
    // right angle on the far side of the series
    const double cx = m.slope < 0 ? x0 : x1, cy = m.slope < 0 ? y1 : y0;
    o << "<polygon points=\"" << num(px(x0)) << "," << num(py(y0)) << " " << num(px(x1)) << "," << num(py(y1))
      << " " << num(px(cx)) << "," << num(py(cy)) << "\" fill=\"none\" stroke=\"#444\" stroke-dasharray=\"4,2\"/>\n";
    o << "<text x=\"" << num(px(cx) + (m.slope < 0 ? -4 : 4)) << "\" y=\"" << num(py(0.5 * (y0 + y1)) + 4)
      << "\" fill=\"#444\" text-anchor=\"" << (m.slope < 0 ? "end" : "start") << "\">"
      << escape(m.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace polyvem
