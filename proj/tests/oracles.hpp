// Test-only quadrature oracles. These integrate the defining oscillatory
// integrals numerically (Gaussian damping, Richardson extrapolation in the
// damping parameter) and never touch the closed-form kernel path they are
// used to check.
#ifndef HYDROLAT_TESTS_ORACLES_HPP
#define HYDROLAT_TESTS_ORACLES_HPP

#include <Eigen/Eigenvalues>

#include <cmath>

#include "hydrolat/oscquad.hpp"

namespace hydrolat::oracles {

// damped Fresnel-type integral int e^{-i x y + i c y^2 - eta y^2} dy
inline cplx damped_fresnel(double c, double x, double eta) {
  double y_max = std::sqrt(42.0 / eta);
  auto f = [&](double y) { return std::exp(cplx(-eta * y * y, -x * y + c * y * y)); };
  auto freq = [&](double y) {
    return std::abs(x) + 2.0 * std::abs(c) * std::abs(y) + 2.0 * eta * std::abs(y);
  };
  return oscillatory_integral(f, freq, -y_max, y_max);
}

// Extrapolation of log f(eta) to eta = 0; the damped Fresnel integral's
// log is analytic in eta with coefficients linear in x^2/c, so this stays
// accurate where direct polynomial extrapolation would need a tiny ladder.
inline cplx extrapolate_log_to_zero(const std::vector<double>& etas,
                                    const std::vector<cplx>& vals) {
  std::vector<cplx> logs(vals.size());
  double prev_im = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    cplx lg = std::log(vals[i]);
    double im = lg.imag();
    while (im - prev_im > pi) im -= 2.0 * pi;
    while (prev_im - im > pi) im += 2.0 * pi;
    logs[i] = cplx(lg.real(), im);
    prev_im = im;
  }
  return std::exp(extrapolate_to_zero(etas, logs));
}

// int e^{-i x y + i c y^2} dy by eta -> 0 extrapolation, c != 0
inline cplx fresnel_integral(double c, double x) {
  double base = 4e-3 * std::abs(c);
  std::vector<double> etas{base, base / 2, base / 4, base / 8};
  std::vector<cplx> vals;
  for (double eta : etas) vals.push_back(damped_fresnel(c, x, eta));
  return extrapolate_log_to_zero(etas, vals);
}

// K^b(tau, H, x) = (2pi)^{-d} int e^{-i x.y} e^{-i b (tau/2) y.H y} dy,
// separated along the eigenvectors of H
inline cplx kernel_oracle(double tau, const RMat& hess, const RVec& x, int branch) {
  int d = static_cast<int>(hess.rows());
  Eigen::SelfAdjointEigenSolver<RMat> es(hess);
  RVec xp = es.eigenvectors().transpose() * x;
  cplx prod(1.0, 0.0);
  for (int i = 0; i < d; ++i) {
    double c = -branch * 0.5 * tau * es.eigenvalues()[i];
    double base = 4e-3 * std::abs(c);
    std::vector<double> etas{base, base / 2, base / 4, base / 8};
    std::vector<cplx> vals;
    for (double eta : etas) vals.push_back(damped_fresnel(c, xp[i], eta));
    prod *= extrapolate_log_to_zero(etas, vals) / (2.0 * pi);
  }
  return prod;
}

}  // namespace hydrolat::oracles

#endif
