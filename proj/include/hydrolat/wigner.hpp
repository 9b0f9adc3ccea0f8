#ifndef HYDROLAT_WIGNER_HPP
#define HYDROLAT_WIGNER_HPP

#include "hydrolat/covflow.hpp"

namespace hydrolat {

// Complex field a(x) = (1/sqrt 2)(V^{1/4} v0(x) + i V^{-1/4} v1(x)), built by
// band-wise fractional powers of the dispersion multiplier. For half-space
// states the multiplier acts on the odd extension and restricts back.
Eigen::MatrixXcd a_field(const InteractionMatrix& V, const FieldState& x);

struct WignerOptions {
  int y_max = 64;        // summation window |y| <= y_max
  double taper = 0.1;    // cosine taper over the trailing fraction of the window
  bool even_y = false;   // restrict to y in (2Z)^d, where the half-integer
                         // sites are exact. The even-only sum aliases theta
                         // with theta+pi, so the default keeps all y; odd
                         // offsets carry an O(eps) center rounding bias.
  int jobs = 1;
};

// Wigner values on a 1-d theta list, with Monte Carlo error bars when the
// grid came from sampling.
struct WignerGrid {
  enum class Variant { Empirical, Deterministic, Initial, LimitFull, LimitHalf };
  Variant variant = Variant::Initial;
  double eps = 0.0;
  std::vector<double> thetas;
  std::vector<Mat> values;   // n x n per theta
  std::vector<RMat> stderr_; // entrywise std error (empirical only)
};

// scaled Wigner matrix by Monte Carlo over sampled initial fields (d = 1)
WignerGrid wigner_empirical(const InteractionMatrix& V, const CovarianceProfile& profile,
                            double eps, double tau, const RVec& r,
                            const std::vector<double>& thetas, int nsamples,
                            std::uint64_t seed, const WignerOptions& opt = {});

// the same windowed y-sum evaluated from the exact propagated covariance
WignerGrid wigner_deterministic(const InteractionMatrix& V, const CovarianceProfile& profile,
                                double eps, double tau, const RVec& r,
                                const std::vector<double>& thetas,
                                const WignerOptions& opt = {});

// initial Wigner matrix W(0,r;theta) from the profile
Mat wigner_initial(const InteractionMatrix& V, const CovarianceProfile& profile,
                   const RVec& r, const RVec& theta);

struct WignerLimit {
  Mat value;
  bool coincidence = false;  // half-space: r1 = tau d1(omega) for some band
};

// band-shifted limit W^p(tau,r;theta); half-space variant follows the
// two-case reflection formula
WignerLimit wigner_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                         double tau, const RVec& r, const RVec& theta, bool halfspace);

// limit Wigner band field on a (tau, r1) grid at fixed theta (d = 1)
struct WignerField {
  int band = 0;
  double theta = 0.0;
  double grad_omega = 0.0;
  double tau0 = 0.0, h_tau = 0.0, r0 = 0.0, h_r = 0.0;
  int nt = 0, nr = 0;
  bool halfspace = false;
  std::vector<std::vector<Mat>> w;  // [it][ir]
};

WignerField wigner_limit_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                              int band, double theta, double tau0, double h_tau, int nt,
                              double r0, double h_r, int nr, bool halfspace);

struct TransportReport {
  double interior_residual = 0.0;
  double boundary_mismatch = 0.0;            // against b_sigma, both branches
  double boundary_mismatch_symmetric = 0.0;  // symmetric-profile closed form
};

TransportReport transport_residual(const InteractionMatrix& V, const CovarianceProfile& profile,
                                   const WignerField& field);

}  // namespace hydrolat

#endif
