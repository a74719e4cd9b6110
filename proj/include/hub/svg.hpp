// Minimal static SVG charts for the exported figures.
#pragma once

#include <string>
#include <vector>

namespace hub::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // x is the index; NaN breaks the line
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

struct Box {
  std::string label;
  double lo = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, hi = 0.0;
};

void write_box_chart(const std::string& path, const std::string& title,
                     const std::string& y_label, const std::vector<Box>& boxes);

}  // namespace hub::svg
