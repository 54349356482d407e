#include "netad/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "netad/error.hpp"

namespace netad {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr int kTicks = 5;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range finite_range(std::initializer_list<const std::vector<double>*> series) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* s : series) {
    for (double v : *s) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {};
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

// Polyline pieces separated at non-finite values.
std::string polylines(const std::vector<double>& x, const std::vector<double>& y, auto px, auto py,
                      const std::string& style) {
  std::string out;
  std::string pts;
  const auto flush = [&] {
    if (!pts.empty()) out += "<polyline fill=\"none\" " + style + " points=\"" + pts + "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      flush();
      continue;
    }
    if (!pts.empty()) pts += ' ';
    pts += num(px(x[i])) + "," + num(py(y[i]));
  }
  flush();
  return out;
}

}  // namespace

SeriesPlot plot_from_verdicts(std::span<const WindowVerdict> verdicts, std::string title) {
  SeriesPlot p;
  p.title = std::move(title);
  for (const auto& v : verdicts) {
    p.x.push_back(v.start_time);
    p.score.push_back(v.degenerate ? NAN : v.score);
    p.threshold.push_back(v.threshold);
    p.flagged.push_back(v.flagged);
  }
  return p;
}

std::string render_svg(const SeriesPlot& plot) {
  if (plot.score.size() != plot.x.size() || plot.threshold.size() != plot.x.size() ||
      plot.flagged.size() != plot.x.size()) {
    throw DimensionError("plot series differ in length");
  }
  const Range xr = finite_range({&plot.x});
  const Range yr = finite_range({&plot.score, &plot.threshold});
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + escape(plot.title) + "</text>\n";

  if (plot.shaded) {
    const double a = std::clamp(plot.shaded->first, xr.lo, xr.hi);
    const double b = std::clamp(plot.shaded->second, xr.lo, xr.hi);
    if (b > a) {
      s += "<rect x=\"" + num(px(a)) + "\" y=\"" + num(kTop) + "\" width=\"" + num(px(b) - px(a)) + "\" height=\"" +
           num(ph) + "\" fill=\"#f4d8d8\"/>\n";
    }
  }

  // axes and ticks
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
       num(kTop + ph) + "\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) +
       "\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = kLeft + pw * i / kTicks;
    const double fy = kTop + ph - ph * i / kTicks;
    s += "<line x1=\"" + num(fx) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(fx) + "\" y2=\"" +
         num(kTop + ph + 5) + "\"/>\n";
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(fy) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(fy) +
         "\"/>\n";
  }
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double vx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double vy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    s += "<text x=\"" + num(kLeft + pw * i / kTicks) + "\" y=\"" + num(kTop + ph + 18) +
         "\" text-anchor=\"middle\">" + label(vx) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(kTop + ph - ph * i / kTicks + 4) +
         "\" text-anchor=\"end\">" + label(vy) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num(kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n</g>\n";

  s += polylines(plot.x, plot.threshold, px, py, "stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  s += polylines(plot.x, plot.score, px, py, "stroke=\"#1f4e9c\" stroke-width=\"1.5\"");

  s += "<g fill=\"#c0392b\">\n";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    if (!plot.flagged[i] || !std::isfinite(plot.x[i]) || !std::isfinite(plot.score[i])) continue;
    s += "<circle cx=\"" + num(px(plot.x[i])) + "\" cy=\"" + num(py(plot.score[i])) + "\" r=\"3\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

void write_svg_file(const std::string& path, const SeriesPlot& plot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << render_svg(plot);
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace netad
