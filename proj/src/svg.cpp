#include "prandtl_lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace prandtl_lab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string tick(double v) { return v == 0.0 ? "0" : fmt::format("{:.3g}", v); }

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 1e-300 * std::max(1.0, std::abs(lo))) {
      const double pad = std::abs(lo) > 0.0 ? 0.5 * std::abs(lo) : 0.5;
      lo -= pad;
      hi += pad;
    }
  }
};

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
      kWidth, kHeight, kWidth, kHeight, kWidth, kHeight, kWidth / 2.0, escape(title));
}

std::string axes(const Range& xr, const Range& yr, const std::string& x_label,
                 const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string out = fmt::format(
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
      x0, x1, y0, y1);
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double px = x0 + f * (x1 - x0);
    const double py = y0 - f * (y0 - y1);
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
        px, y0, y0 + 5.0, y0 + 18.0, tick(xr.lo + f * (xr.hi - xr.lo)));
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{2:.2f}\" x2=\"{1}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        x0 - 5.0, x0, py, x0 - 8.0, py + 4.0, tick(yr.lo + f * (yr.hi - yr.lo)));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (x0 + x1) / 2.0,
                     kHeight - 12.0, escape(x_label));
  out += fmt::format(
      "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
      (y0 + y1) / 2.0, escape(y_label));
  return out;
}

double map(double v, double lo, double hi, double p0, double p1) {
  return p0 + (v - lo) / (hi - lo) * (p1 - p0);
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series)
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k)
      if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
        xr.add(s.x[k]);
        yr.add(s.y[k]);
      }
  xr.finish();
  yr.finish();
  std::string out = header(title) + axes(xr, yr, x_label, y_label);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto& s = series[n];
    const char* color = kPalette[n % std::size(kPalette)];
    std::string points;
    std::size_t count = 0;
    double lx = 0.0, ly = 0.0;
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      lx = map(s.x[k], xr.lo, xr.hi, x0, x1);
      ly = map(s.y[k], yr.lo, yr.hi, y0, y1);
      points += fmt::format("{}{:.2f},{:.2f}", count ? " " : "", lx, ly);
      ++count;
    }
    if (count == 1)
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", lx, ly, color);
    else if (count > 1)
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                         color, points);
    if (!s.label.empty())
      out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", x1 - 150.0,
                         y1 + 14.0 * static_cast<double>(n + 1), color, escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values) {
  Range xr, yr;
  for (double v : x) xr.add(v);
  for (double v : y) yr.add(v);
  xr.finish();
  yr.finish();
  double vmax = 0.0;
  for (const auto& row : values)
    for (double v : row)
      if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  std::string out = header(title) + axes(xr, yr, x_label, y_label);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(std::max<std::size_t>(1, x.size()));
  const double ch = (y0 - y1) / static_cast<double>(std::max<std::size_t>(1, y.size()));
  for (std::size_t r = 0; r < values.size() && r < y.size(); ++r)
    for (std::size_t c = 0; c < values[r].size() && c < x.size(); ++c) {
      const double v = values[r][c];
      std::string fill = "#cccccc";
      if (std::isfinite(v)) {
        const double s = std::clamp(v / vmax, -1.0, 1.0);
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(s))));
        fill = s >= 0.0 ? fmt::format("#{:02x}{:02x}ff", shade, shade)
                        : fmt::format("#ff{:02x}{:02x}", shade, shade);
      }
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
          x0 + cw * static_cast<double>(c), y0 - ch * static_cast<double>(r + 1), cw, ch, fill);
    }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">scale +/-{}</text>\n", x1, y1 - 4.0,
                     tick(vmax));
  out += "</svg>\n";
  return out;
}

}  // namespace prandtl_lab
