#pragma once

#include <string>
#include <vector>

namespace prandtl_lab {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Polyline chart with a fixed 640x400 viewBox, axes and numeric tick labels.
// Non-finite samples are skipped; a single sample is drawn as a marker.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

// Cell map of values[row][col] over the column coordinates x and row
// coordinates y, on a diverging scale centred at zero.
std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values);

}  // namespace prandtl_lab
