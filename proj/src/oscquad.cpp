#include "hydrolat/oscquad.hpp"

#include <cmath>

namespace hydrolat {

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1]
const double gl_x[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double gl_w[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

double gl_node(int i) { return gl_x[i]; }
double gl_weight(int i) { return gl_w[i]; }

cplx oscillatory_integral(const std::function<cplx(double)>& f,
                          const std::function<double(double)>& frequency,
                          double s_lo, double s_hi) {
  cplx acc(0.0, 0.0);
  double s = s_lo;
  while (s < s_hi) {
    // panels span at most half a period; capping the length keeps the
    // frequency samples representative on slowly oscillating stretches
    double freq = std::max({frequency(s), frequency(std::min(s_hi, s + 0.25)),
                            frequency(std::min(s_hi, s + 0.5)), 1.0});
    double len = std::min({pi / freq, 0.5, s_hi - s});
    double mid = s + 0.5 * len, rad = 0.5 * len;
    cplx panel(0.0, 0.0);
    for (int i = 0; i < 16; ++i) panel += gl_w[i] * f(mid + rad * gl_x[i]);
    acc += rad * panel;
    s += len;
  }
  return acc;
}

cplx extrapolate_to_zero(const std::vector<double>& etas, const std::vector<cplx>& values) {
  std::vector<cplx> t(values);
  std::size_t m = etas.size();
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = 0; i + level < m; ++i)
      t[i] = (etas[i + level] * t[i] - etas[i] * t[i + 1]) / (etas[i + level] - etas[i]);
  return t[0];
}

}  // namespace hydrolat
