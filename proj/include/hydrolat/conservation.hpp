#ifndef HYDROLAT_CONSERVATION_HPP
#define HYDROLAT_CONSERVATION_HPP

#include "hydrolat/limits.hpp"

namespace hydrolat {

// Limit energy density e(tau,r) = (2pi)^{-d} tr int qhat^{11}_{tau,r} dtheta.
// Also evaluates the two-term form (1/2) tr int [qhat^{11} + qhat^{00} Vhat^*]
// and reports the difference between the two routes.
struct EnergyDensity {
  double value = 0.0;
  double two_term_value = 0.0;
  double route_difference() const { return std::abs(value - two_term_value); }
};

EnergyDensity energy_density_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                                   double tau, const RVec& r, int theta_grid);

// j_k(tau,r) = -(i/2)(2pi)^{-d} tr int qhat^{10} d_k Vhat dtheta
RVec energy_current_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                          double tau, const RVec& r, int theta_grid);

// max interior central-difference residual of d_tau e + div j over a regular
// (tau, r) grid (d = 1)
double continuity_residual(const InteractionMatrix& V, const CovarianceProfile& profile,
                           double tau0, double h_tau, int nt, double r0, double h_r, int nr,
                           int theta_grid);

// microscopic average energy E[E(x + [r/eps], tau/eps)] from the propagated
// covariance
double microscopic_energy(const InteractionMatrix& V, const CovarianceProfile& profile,
                          double tau, const RVec& r, double eps);

// microscopic energy current (d <= 2, finite-support series)
RVec microscopic_current(const InteractionMatrix& V, const CovarianceProfile& profile,
                         double tau, const RVec& r, double eps);

// Spatial test function for the locally conserved quantities.
struct TestFunction {
  enum class Family { GaussianBump, CompactBump } family = Family::CompactBump;
  double scale = 1.0;
  double center = 0.0;
  double operator()(double r) const;
  double half_width() const;  // quadrature window is center +- half_width
};

struct ConservedQuantities {
  std::vector<double> thetas;
  std::vector<Mat> e_hat;  // E(phi; tau, theta) per theta
  std::vector<Mat> a_hat;  // A(phi; tau, theta) per theta
  // microscopic lattice-sum counterparts at offsets h and their transform
  std::vector<int> h_offsets;
  std::vector<Mat> x_micro, y_micro;
  std::vector<Mat> e_micro_hat, a_micro_hat;
  double max_difference_e = 0.0;
  double max_difference_a = 0.0;
};

ConservedQuantities conserved_quantities(const InteractionMatrix& V,
                                         const CovarianceProfile& profile,
                                         const TestFunction& phi, double tau,
                                         const std::vector<double>& thetas, double eps,
                                         int h_max);

// residuals of the coupled identities d_tau E(phi) = i omega omega' A(phi')
// and d_tau A(phi) = -i omega^{-1} omega' E(phi'), central differences in tau
struct ConservedIdentityResidual {
  double e_identity = 0.0;
  double a_identity = 0.0;
  double max() const { return std::max(e_identity, a_identity); }
};

ConservedIdentityResidual conserved_identity_residual(const InteractionMatrix& V,
                                                      const CovarianceProfile& profile,
                                                      const TestFunction& phi, double tau,
                                                      double theta, double h_tau);

}  // namespace hydrolat

#endif
