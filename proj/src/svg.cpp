#include "hydrolat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hydrolat {

namespace {

constexpr double W = 640, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;

double map_x(double v, double lo, double hi) {
  return ML + (v - lo) / (hi - lo + 1e-300) * (W - ML - MR);
}
double map_y(double v, double lo, double hi) {
  return H - MB - (v - lo) / (hi - lo + 1e-300) * (H - MT - MB);
}

std::string heat_color(double t) {
  // simple blue -> white -> red ramp
  t = std::clamp(t, 0.0, 1.0);
  int r = static_cast<int>(255 * std::min(1.0, 2.0 * t));
  int b = static_cast<int>(255 * std::min(1.0, 2.0 * (1.0 - t)));
  int g = static_cast<int>(255 * (1.0 - std::abs(2.0 * t - 1.0)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<SvgSeries>& series, bool logx, bool logy) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return logy ? std::log10(std::max(v, 1e-300)) : v; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, tx(s.x[i]));
      xhi = std::max(xhi, tx(s.x[i]));
      ylo = std::min(ylo, ty(s.y[i]));
      yhi = std::max(yhi, ty(s.y[i]));
    }
  if (xlo > xhi) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }
  if (ylo == yhi) { ylo -= 1; yhi += 1; }

  std::ofstream os(path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
     << "</text>\n";
  os << "<rect x='" << ML << "' y='" << MT << "' width='" << W - ML - MR << "' height='"
     << H - MT - MB << "' fill='none' stroke='black'/>\n";
  // axis ticks
  for (int k = 0; k <= 4; ++k) {
    double fx = xlo + (xhi - xlo) * k / 4.0;
    double fy = ylo + (yhi - ylo) * k / 4.0;
    std::ostringstream lx, ly;
    lx.precision(3);
    ly.precision(3);
    lx << (logx ? std::pow(10.0, fx) : fx);
    ly << (logy ? std::pow(10.0, fy) : fy);
    os << "<text x='" << map_x(fx, xlo, xhi) << "' y='" << H - MB + 18
       << "' text-anchor='middle' font-size='11'>" << lx.str() << "</text>\n";
    os << "<text x='" << ML - 8 << "' y='" << map_y(fy, ylo, yhi) + 4
       << "' text-anchor='end' font-size='11'>" << ly.str() << "</text>\n";
  }
  int li = 0;
  for (const auto& s : series) {
    os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << map_x(tx(s.x[i]), xlo, xhi) << "," << map_y(ty(s.y[i]), ylo, yhi) << " ";
    os << "'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx='" << map_x(tx(s.x[i]), xlo, xhi) << "' cy='"
         << map_y(ty(s.y[i]), ylo, yhi) << "' r='2.5' fill='" << s.color << "'/>\n";
    os << "<text x='" << W - MR - 8 << "' y='" << MT + 16 + 16 * li
       << "' text-anchor='end' font-size='12' fill='" << s.color << "'>" << s.label
       << "</text>\n";
    ++li;
  }
  os << "</svg>\n";
}

void svg_heatmap(const std::string& path, const std::string& title,
                 const std::vector<std::vector<double>>& values,
                 const std::vector<double>& xs, const std::vector<double>& ys) {
  double lo = 1e300, hi = -1e300;
  for (const auto& row : values)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (lo > hi) { lo = 0; hi = 1; }
  if (lo == hi) hi = lo + 1;

  std::ofstream os(path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
     << "</text>\n";
  double pw = (W - ML - MR - 60) / std::max<std::size_t>(1, xs.size());
  double ph = (H - MT - MB) / std::max<std::size_t>(1, ys.size());
  for (std::size_t iy = 0; iy < values.size(); ++iy)
    for (std::size_t ix = 0; ix < values[iy].size(); ++ix) {
      double t = (values[iy][ix] - lo) / (hi - lo);
      os << "<rect x='" << ML + ix * pw << "' y='" << H - MB - (iy + 1) * ph << "' width='"
         << pw + 0.5 << "' height='" << ph + 0.5 << "' fill='" << heat_color(t) << "'/>\n";
    }
  // colorbar
  double cx = W - MR - 40;
  for (int k = 0; k < 64; ++k) {
    double t = (k + 0.5) / 64.0;
    os << "<rect x='" << cx << "' y='" << H - MB - (k + 1) * (H - MT - MB) / 64.0
       << "' width='18' height='" << (H - MT - MB) / 64.0 + 0.5 << "' fill='" << heat_color(t)
       << "'/>\n";
  }
  std::ostringstream slo, shi;
  slo.precision(3);
  shi.precision(3);
  slo << lo;
  shi << hi;
  os << "<text x='" << cx + 22 << "' y='" << H - MB << "' font-size='11'>" << slo.str()
     << "</text>\n";
  os << "<text x='" << cx + 22 << "' y='" << MT + 10 << "' font-size='11'>" << shi.str()
     << "</text>\n";
  os << "</svg>\n";
}

}  // namespace hydrolat
