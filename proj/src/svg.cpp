#include "tapa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tapa/errors.hpp"

namespace tapa::svg {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    const double t = (h == l) ? 0.5 : (a - l) / (h - l);
    return pix_lo + t * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
      return out;
    }
    const double span = hi - lo;
    if (span <= 0.0) return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) {
        step = m * mag;
        break;
      }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 0.5 * step; v += step) out.push_back(v);
    return out;
  }
};

}  // namespace

Series histogram_series(const std::string& label,
                        const std::vector<double>& bin_edges,
                        const std::vector<long long>& counts,
                        const std::string& color) {
  Series s;
  s.label = label;
  s.color = color;
  if (bin_edges.size() != counts.size() + 1) {
    throw ConfigError("histogram_series: edges must be counts + 1");
  }
  // step outline: (e0,0) (e0,c0) (e1,c0) (e1,c1) ... (eN,0)
  s.x.push_back(bin_edges.front());
  s.y.push_back(0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    s.x.push_back(bin_edges[i]);
    s.y.push_back(static_cast<double>(counts[i]));
    s.x.push_back(bin_edges[i + 1]);
    s.y.push_back(static_cast<double>(counts[i]));
  }
  s.x.push_back(bin_edges.back());
  s.y.push_back(0.0);
  return s;
}

std::string render_line_plot(const std::vector<Series>& series,
                             const PlotOptions& opts) {
  const double ml = 70, mr = 160, mt = 40, mb = 55;
  const double px0 = ml, px1 = opts.width - mr;
  const double py0 = opts.height - mb, py1 = mt;  // y grows upward

  Axis xa, ya;
  xa.log = opts.log_x;
  ya.log = opts.log_y;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = s.x[i], y = s.y[i];
      if (opts.log_x && !(x > 0.0)) continue;
      if (opts.log_y && !(y > 0.0)) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!(xlo <= xhi)) {  // no plottable data
    xlo = opts.log_x ? 1.0 : 0.0;
    xhi = opts.log_x ? 10.0 : 1.0;
    ylo = opts.log_y ? 1.0 : 0.0;
    yhi = opts.log_y ? 10.0 : 1.0;
  }
  if (xlo == xhi) {
    xlo = opts.log_x ? xlo / 2 : xlo - 0.5;
    xhi = opts.log_x ? xhi * 2 : xhi + 0.5;
  }
  if (ylo == yhi) {
    ylo = opts.log_y ? ylo / 2 : ylo - 0.5;
    yhi = opts.log_y ? yhi * 2 : yhi + 0.5;
  }
  xa.lo = xlo;
  xa.hi = xhi;
  ya.lo = ylo;
  ya.hi = yhi;

  std::string out;
  out += "<?xml version='1.0' encoding='UTF-8'?>\n";
  out += "<svg xmlns='http://www.w3.org/2000/svg' width='" +
         std::to_string(opts.width) + "' height='" + std::to_string(opts.height) +
         "'>\n";
  out += "<rect width='100%' height='100%' fill='white'/>\n";
  if (!opts.title.empty()) {
    out += "<text x='" + num((px0 + px1) / 2) +
           "' y='24' text-anchor='middle' font-family='sans-serif' "
           "font-size='16'>" + opts.title + "</text>\n";
  }

  // axes
  out += "<path d='M " + num(px0) + " " + num(py1) + " V " + num(py0) + " H " +
         num(px1) + "' stroke='black' fill='none'/>\n";

  for (double t : xa.ticks()) {
    const double x = xa.map(t, px0, px1);
    out += "<line x1='" + num(x) + "' y1='" + num(py0) + "' x2='" + num(x) +
           "' y2='" + num(py0 + 5) + "' stroke='black'/>\n";
    out += "<text x='" + num(x) + "' y='" + num(py0 + 20) +
           "' text-anchor='middle' font-family='sans-serif' font-size='11'>" +
           num(t) + "</text>\n";
  }
  for (double t : ya.ticks()) {
    const double y = ya.map(t, py0, py1);
    out += "<line x1='" + num(px0 - 5) + "' y1='" + num(y) + "' x2='" + num(px0) +
           "' y2='" + num(y) + "' stroke='black'/>\n";
    out += "<text x='" + num(px0 - 8) + "' y='" + num(y + 4) +
           "' text-anchor='end' font-family='sans-serif' font-size='11'>" +
           num(t) + "</text>\n";
  }
  if (!opts.x_label.empty()) {
    out += "<text x='" + num((px0 + px1) / 2) + "' y='" +
           num(opts.height - 12.0) +
           "' text-anchor='middle' font-family='sans-serif' font-size='13'>" +
           opts.x_label + "</text>\n";
  }
  if (!opts.y_label.empty()) {
    out += "<text x='16' y='" + num((py0 + py1) / 2) +
           "' text-anchor='middle' font-family='sans-serif' font-size='13' "
           "transform='rotate(-90 16 " + num((py0 + py1) / 2) + ")'>" +
           opts.y_label + "</text>\n";
  }

  // series polylines
  for (const auto& s : series) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = s.x[i], y = s.y[i];
      if (opts.log_x && !(x > 0.0)) continue;
      if (opts.log_y && !(y > 0.0)) continue;
      pts += num(xa.map(x, px0, px1)) + "," + num(ya.map(y, py0, py1)) + " ";
    }
    out += "<polyline points='" + pts + "' fill='none' stroke='" + s.color +
           "' stroke-width='1.5'/>\n";
  }

  // legend
  double ly = py1 + 10;
  for (const auto& s : series) {
    out += "<line x1='" + num(px1 + 12) + "' y1='" + num(ly) + "' x2='" +
           num(px1 + 36) + "' y2='" + num(ly) + "' stroke='" + s.color +
           "' stroke-width='2'/>\n";
    out += "<text x='" + num(px1 + 42) + "' y='" + num(ly + 4) +
           "' font-family='sans-serif' font-size='12'>" + s.label + "</text>\n";
    ly += 18;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace tapa::svg
