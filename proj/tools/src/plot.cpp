#include "vortexflow/app/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace vortexflow::app {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
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
      default: out += c;
    }
  }
  return out;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// A few stops of viridis, linearly blended.
std::string ramp(double s) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<double>& x, const std::vector<double>& y) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(y[k])) continue;
    x0 = std::min(x0, x[k]);
    x1 = std::max(x1, x[k]);
    y0 = std::min(y0, y[k]);
    y1 = std::max(y1, y[k]);
  }
  std::string svg = header(kWidth, kHeight);
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"20\" text-anchor=\"middle\">" + escape(title) + "</text>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(x_label) + "</text>\n";
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  svg += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(pw) + "\" height=\"" +
         num(ph) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  if (!(x1 >= x0)) return svg + "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight / 2) +
                          "\" text-anchor=\"middle\">no finite data</text>\n</svg>\n";
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    const double pad = std::max(std::abs(y0) * 1e-6, 1e-12);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double v) { return kMargin + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kMargin + ph - (v - y0) / (y1 - y0) * ph; };
  svg += "<text x=\"" + num(kMargin - 4) + "\" y=\"" + num(kMargin + 4) + "\" text-anchor=\"end\">" + num(y1) + "</text>\n";
  svg += "<text x=\"" + num(kMargin - 4) + "\" y=\"" + num(kMargin + ph) + "\" text-anchor=\"end\">" + num(y0) + "</text>\n";
  svg += "<text x=\"" + num(kMargin) + "\" y=\"" + num(kMargin + ph + 16) + "\" text-anchor=\"middle\">" + num(x0) + "</text>\n";
  svg += "<text x=\"" + num(kMargin + pw) + "\" y=\"" + num(kMargin + ph + 16) + "\" text-anchor=\"middle\">" + num(x1) + "</text>\n";
  std::string points;
  auto flush = [&] {
    if (!points.empty()) svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    points.clear();
  };
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
      flush();
      continue;
    }
    points += num(px(x[k])) + "," + num(py(y[k])) + " ";
  }
  flush();
  return svg + "</svg>\n";
}

std::string svg_heatmap(const std::string& title, const ScalarField& field) {
  const Grid& g = field.grid();
  const int block = std::max(1, g.n / 128);
  const int m = g.n / block;
  const double cell = 512.0 / m;
  std::vector<double> avg(static_cast<std::size_t>(m) * m, 0.0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int bj = 0; bj < m; ++bj) {
    for (int bi = 0; bi < m; ++bi) {
      double s = 0.0;
      for (int j = bj * block; j < (bj + 1) * block; ++j)
        for (int i = bi * block; i < (bi + 1) * block; ++i) s += field(i, j);
      s /= block * block;
      avg[static_cast<std::size_t>(bj) * m + bi] = s;
      if (std::isfinite(s)) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::string svg = header(512 + 2 * 20, 512 + 50);
  svg += "<text x=\"276\" y=\"20\" text-anchor=\"middle\">" + escape(title) + " [" + num(lo) + ", " + num(hi) +
         "]</text>\n";
  for (int bj = 0; bj < m; ++bj) {
    for (int bi = 0; bi < m; ++bi) {
      const double v = avg[static_cast<std::size_t>(bj) * m + bi];
      // y grows upward in the field, downward in SVG.
      svg += "<rect x=\"" + num(20 + bi * cell) + "\" y=\"" + num(30 + (m - 1 - bj) * cell) + "\" width=\"" +
             num(cell + 0.05) + "\" height=\"" + num(cell + 0.05) + "\" fill=\"" + ramp((v - lo) / (hi - lo)) + "\"/>\n";
    }
  }
  return svg + "</svg>\n";
}

}  // namespace vortexflow::app
