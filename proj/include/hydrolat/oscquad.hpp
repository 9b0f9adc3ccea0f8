#ifndef HYDROLAT_OSCQUAD_HPP
#define HYDROLAT_OSCQUAD_HPP

#include "hydrolat/common.hpp"

namespace hydrolat {

// Composite Gauss-Legendre quadrature for oscillatory integrands on a finite
// interval. Panels are sized from `frequency`, an upper bound for the local
// phase derivative |d arg(f)/ds|, so each panel spans about one period.
cplx oscillatory_integral(const std::function<cplx(double)>& f,
                          const std::function<double(double)>& frequency,
                          double s_lo, double s_hi);

// Polynomial (Neville) extrapolation of f(eta) to eta = 0 from sample nodes.
cplx extrapolate_to_zero(const std::vector<double>& etas, const std::vector<cplx>& values);

// 16-point Gauss-Legendre rule on [-1, 1]
double gl_node(int i);
double gl_weight(int i);

}  // namespace hydrolat

#endif
