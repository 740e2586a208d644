#include "arot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "arot/csv.hpp"

namespace arot {
namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0;
  const double pos = q * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1 - frac) + v[hi] * frac;
}

}  // namespace

void write_box_plot_svg(const std::string& path, const std::string& title,
                        const std::string& x_label,
                        const std::vector<BoxSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);

  const int row_h = 34;
  const int margin_left = 170, margin_right = 30, margin_top = 50,
            margin_bottom = 45;
  const int plot_w = 520;
  const int width = margin_left + plot_w + margin_right;
  const int height =
      margin_top + row_h * static_cast<int>(series.size()) + margin_bottom;

  double lo = 1e300, hi = -1e300;
  for (const auto& s : series) {
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi <= lo) {
    lo -= 1;
    hi += 1;
  }
  const double pad = 0.07 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto sx = [&](double v) {
    return margin_left + (v - lo) / (hi - lo) * plot_w;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\">\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">"
      << title << "</text>\n";

  // x axis with 5 ticks
  const int axis_y = height - margin_bottom;
  out << "<line x1=\"" << margin_left << "\" y1=\"" << axis_y << "\" x2=\""
      << margin_left + plot_w << "\" y2=\"" << axis_y
      << "\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = lo + (hi - lo) * t / 5.0;
    out << "<line x1=\"" << format_double(sx(v), 1) << "\" y1=\"" << axis_y
        << "\" x2=\"" << format_double(sx(v), 1) << "\" y2=\"" << axis_y + 5
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << format_double(sx(v), 1) << "\" y=\"" << axis_y + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">"
        << format_double(v, 2) << "</text>\n";
  }
  out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label
      << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const int cy = margin_top + row_h * static_cast<int>(i) + row_h / 2;
    out << "<text x=\"" << margin_left - 8 << "\" y=\"" << cy + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << s.label
        << "</text>\n";
    if (s.values.empty()) continue;
    const double q1 = quantile(s.values, 0.25);
    const double med = quantile(s.values, 0.5);
    const double q3 = quantile(s.values, 0.75);
    const double mn = *std::min_element(s.values.begin(), s.values.end());
    const double mx = *std::max_element(s.values.begin(), s.values.end());
    const int bh = row_h - 14;
    // whiskers
    out << "<line x1=\"" << format_double(sx(mn), 1) << "\" y1=\"" << cy
        << "\" x2=\"" << format_double(sx(q1), 1) << "\" y2=\"" << cy
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << format_double(sx(q3), 1) << "\" y1=\"" << cy
        << "\" x2=\"" << format_double(sx(mx), 1) << "\" y2=\"" << cy
        << "\" stroke=\"#333\"/>\n";
    for (double w : {mn, mx})
      out << "<line x1=\"" << format_double(sx(w), 1) << "\" y1=\""
          << cy - bh / 3 << "\" x2=\"" << format_double(sx(w), 1) << "\" y2=\""
          << cy + bh / 3 << "\" stroke=\"#333\"/>\n";
    // box + median
    out << "<rect x=\"" << format_double(sx(q1), 1) << "\" y=\"" << cy - bh / 2
        << "\" width=\"" << format_double(std::max(1.0, sx(q3) - sx(q1)), 1)
        << "\" height=\"" << bh << "\" fill=\"" << s.color
        << "\" fill-opacity=\"0.55\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << format_double(sx(med), 1) << "\" y1=\""
        << cy - bh / 2 << "\" x2=\"" << format_double(sx(med), 1) << "\" y2=\""
        << cy + bh / 2 << "\" stroke=\"#111\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace arot
