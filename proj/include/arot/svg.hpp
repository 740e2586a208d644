#pragma once

#include <string>
#include <vector>

namespace arot {

struct BoxSeries {
  std::string label;
  std::vector<double> values;
  std::string color = "#4878a8";
};

// Horizontal box-and-whisker plot (median, quartiles, min/max whiskers),
// one row per series. Output is deterministic for identical input.
void write_box_plot_svg(const std::string& path, const std::string& title,
                        const std::string& x_label,
                        const std::vector<BoxSeries>& series);

}  // namespace arot
