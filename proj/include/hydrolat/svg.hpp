#ifndef HYDROLAT_SVG_HPP
#define HYDROLAT_SVG_HPP

#include <string>
#include <vector>

namespace hydrolat {

struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x, y;
};

// log-log or linear line plot written to `path`
void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<SvgSeries>& series, bool logx, bool logy);

// heatmap of values[iy][ix] with a colorbar
void svg_heatmap(const std::string& path, const std::string& title,
                 const std::vector<std::vector<double>>& values,
                 const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace hydrolat

#endif
