#ifndef HYDROLAT_LIMITS_HPP
#define HYDROLAT_LIMITS_HPP

#include "hydrolat/covflow.hpp"

namespace hydrolat {

// 2n x 2n block rotation C_sigma = [[0, I/omega], [-omega I, 0]] and the
// sandwich factors U_b = I + i b C_sigma, b = +-1.
Mat c_band(double omega, int n);
Mat sandwich_factor(double omega, int n, int b);

struct EulerBands {
  std::vector<Mat> f;        // band components Pi qhat Pi
  std::vector<Mat> m_plus;   // symmetric part of the sandwich
  std::vector<Mat> m_minus;  // antisymmetric part (enters with factor i)
};

// Euler-scaling limit covariance qhat_{tau,r}(theta): the (I +- iC) sandwich
// of Rhat_0 evaluated at the band-shifted positions r +- grad(omega) tau.
BlockCov euler_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                     double tau, const RVec& r, const RVec& theta,
                     EulerBands* bands = nullptr);

// Closed form of the stationary-phase kernel K^b(tau, x) =
// F^{-1}_{y->x}[exp(-i b (tau/2) y.H y)] for nondegenerate symmetric H.
cplx ns_kernel(double tau, const RMat& hess, const RVec& x, int sign_branch);

// Diffusive-scaling correction qhat^eps_{tau,r}(theta); the kernel smoothing
// acts on the profile in its Fourier-in-r representation.
BlockCov ns_correction(const InteractionMatrix& V, const CovarianceProfile& profile,
                       double tau, const RVec& r, const RVec& theta, double eps);

// Order-k correction qhat^{eps,k}; k = 2 matches ns_correction, k = 3 adds
// the cubic phase and is evaluated by damped oscillatory quadrature.
BlockCov higher_correction(const InteractionMatrix& V, const CovarianceProfile& profile,
                           double tau, const RVec& r, const RVec& theta, double eps, int k);

struct HalfspaceHat {
  BlockCov ghat;
  bool chi_coincidence = false;  // some chi hit sign(0); value 1/2 used
};

// Half-space spectral object ghat_{tau,r}(theta) with the chi indicator
// weights, and its diffusive counterpart.
HalfspaceHat halfspace_euler_hat(const InteractionMatrix& V, const CovarianceProfile& profile,
                                 double tau, const RVec& r, const RVec& theta);
HalfspaceHat halfspace_ns_hat(const InteractionMatrix& V, const CovarianceProfile& profile,
                              double tau, const RVec& r, const RVec& theta, double eps);

// Position-space half-space limits Q_{tau,r}(z,z') / Q^eps_{tau,r}(z,z'),
// assembled from the image combinations of Theorems 5.2 / 5.6.
PairCov halfspace_euler(const InteractionMatrix& V, const CovarianceProfile& profile,
                        double tau, const RVec& r, const std::vector<OffsetPair>& offsets);
PairCov halfspace_ns(const InteractionMatrix& V, const CovarianceProfile& profile,
                     double tau, const RVec& r, double eps,
                     const std::vector<OffsetPair>& offsets);

// Full-space position-space limits: q(z - z') tabulated for every offset
// pair by a theta-grid inverse transform of the spectral object.
enum class LimitKind { Euler, NavierStokes, Higher, KernelFree };

PairCov limit_position_pairs(LimitKind kind, const InteractionMatrix& V,
                             const CovarianceProfile& profile, double tau, const RVec& r,
                             double eps, int k, const std::vector<OffsetPair>& offsets,
                             int mgrid);

// Band field on a regular (tau, r) grid at fixed theta (d = 1), the input to
// the transport-equation residuals.
struct LimitField {
  int band = 0;
  int n = 1;
  double omega = 0.0;
  double grad_omega = 0.0;
  double hess_omega = 0.0;
  double tau0 = 0.0, h_tau = 0.0;
  double r0 = 0.0, h_r = 0.0;
  int nt = 0, nr = 0;
  std::vector<std::vector<Mat>> f;  // [it][ir], 2n x 2n band component
};

LimitField euler_field_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                            int band, double theta, double tau0, double h_tau, int nt,
                            double r0, double h_r, int nr);
// grid in the rescaled time t (tau = eps t)
LimitField ns_field_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                         int band, double theta, double eps, double t0, double h_t, int nt,
                         double r0, double h_r, int nr);

double euler_pde_residual(const LimitField& field);
double ns_pde_residual(const LimitField& field, double eps);

// max of the equilibrium defects: |q11 - Omega^2 q00|, |q01 + q10|,
// Hermiticity of the diagonal blocks and their negative part.
double equilibrium_residual(const BlockCov& q, const SpectralPoint& sp);
// the two identities of the equilibrium condition alone
double equilibrium_core_residual(const BlockCov& q, const SpectralPoint& sp);

}  // namespace hydrolat

#endif
