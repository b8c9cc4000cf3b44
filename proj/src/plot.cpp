#include "accordion/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "accordion/error.hpp"

namespace accordion {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
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
  double lo = 0.0, hi = 1.0;
};

Range pad(double lo, double hi) {
  if (!(lo <= hi)) return {};
  if (hi - lo < 1e-300) {
    const double d = std::max(std::abs(lo) * 0.05, 0.5);
    return {lo - d, hi + d};
  }
  const double d = 0.04 * (hi - lo);
  return {lo - d, hi + d};
}

}  // namespace

std::string render_svg(const ResultTable& table, const PlotSpec& spec) {
  if (spec.x.empty()) throw ValidationError("plot needs an x column");
  if (spec.y.empty()) throw ValidationError("plot needs at least one y column");
  if (spec.width < 100 || spec.height < 100) throw ValidationError("plot size too small");
  const std::size_t xi = table.column_index(spec.x);
  std::vector<std::size_t> yi;
  for (const auto& y : spec.y) yi.push_back(table.column_index(y));

  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& row : table.rows) {
    if (!std::isfinite(row[xi])) continue;
    for (std::size_t j : yi) {
      if (!std::isfinite(row[j])) continue;
      xlo = std::min(xlo, row[xi]);
      xhi = std::max(xhi, row[xi]);
      ylo = std::min(ylo, row[j]);
      yhi = std::max(yhi, row[j]);
    }
  }
  const Range xr = pad(xlo, xhi), yr = pad(ylo, yhi);

  const double left = 70, right = 20, top = 36, bottom = 50;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
       "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
       std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    s += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" " +
         "font-family=\"sans-serif\" font-size=\"14\">" + escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    s += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(sx(fx)) +
         "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(top + ph + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label(fx) +
         "</text>\n";
    s += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(fy)) + "\" x2=\"" + num(left) +
         "\" y2=\"" + num(sy(fy)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(fy) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label(fy) +
         "</text>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(spec.height - 10.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
       escape(spec.x) + "</text>\n";

  for (std::size_t c = 0; c < yi.size(); ++c) {
    const std::string color = kColors[c % (sizeof kColors / sizeof kColors[0])];
    s += "<text x=\"" + num(left + 8) + "\" y=\"" + num(top + 16 + 14.0 * c) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
         escape(spec.y[c]) + "</text>\n";
    if (spec.scatter) {
      for (const auto& row : table.rows) {
        if (!std::isfinite(row[xi]) || !std::isfinite(row[yi[c]])) continue;
        s += "<circle cx=\"" + num(sx(row[xi])) + "\" cy=\"" + num(sy(row[yi[c]])) +
             "\" r=\"2\" fill=\"" + color + "\"/>\n";
      }
    } else {
      std::string points;
      for (const auto& row : table.rows) {
        if (!std::isfinite(row[xi]) || !std::isfinite(row[yi[c]])) continue;
        if (!points.empty()) points += ' ';
        points += num(sx(row[xi])) + "," + num(sy(row[yi[c]]));
      }
      if (!points.empty())
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1\" points=\"" +
             points + "\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

void emit_plot(const ResultTable& table, const PlotSpec& spec, const std::string& path) {
  const std::string svg = render_svg(table, spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << svg;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace accordion
