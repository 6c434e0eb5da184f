#pragma once

#include <string>
#include <vector>

namespace pilotwave {

struct LineSeries {
  std::string label;
  std::string color;  // CSS color, e.g. "#1f77b4"
  std::vector<double> xs;
  std::vector<double> ys;
};

// Self-contained 960x540 line chart. Series share one x/y scale; the output
// uses fixed-precision coordinates so identical inputs give identical bytes.
std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<LineSeries>& series);

}  // namespace pilotwave
