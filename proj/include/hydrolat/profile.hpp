#ifndef HYDROLAT_PROFILE_HPP
#define HYDROLAT_PROFILE_HPP

#include <functional>
#include <memory>

#include "hydrolat/lattice.hpp"
#include "hydrolat/rng.hpp"

namespace hydrolat {

// Macroscopic temperature profile from a named family with a closed-form
// Fourier transform. The transform splits into a point mass at s = 0 of
// weight (2 pi)^d * delta_weight plus a smooth part.
struct TProfile {
  enum class Family { Constant, GaussianBump };
  Family family = Family::Constant;
  double c = 1.0;  // constant value
  double a = 0.0;  // bump amplitude: T(r) = 1 + a exp(-|r|^2 / w)
  double w = 1.0;  // bump width

  double operator()(const RVec& r) const;
  double delta_weight() const { return family == Family::Constant ? c : 1.0; }
  // smooth part of F_{r->s}[T]; zero for the constant family
  double smooth_transform(const RVec& s, int d) const;
  static TProfile constant(double c);
  static TProfile gaussian_bump(double a, double w = 1.0);
};

// The initial-measure family: macroscopic profile T(r) together with the
// stationary spectral densities qhat_0^{00}, qhat_0^{11} (cross terms zero).
// Evaluates Rhat_0(r,theta) = T(r) qhat_0(theta) and the microscopic
// covariance Q_eps by the product formula.
struct CovarianceProfile {
  int d = 1;
  int n = 1;
  TProfile T;
  std::function<Mat(const RVec&)> q00_hat;
  std::function<Mat(const RVec&)> q11_hat;
  enum class Provenance { Gibbs, Custom } provenance = Provenance::Custom;
  double gibbs_T0 = 0.0;

  Mat r0_hat(const RVec& r, const RVec& theta) const;  // 2n x 2n block matrix

  // q_0 realized on a box by inverse FFT of the spectral density; the pair
  // is (q^{00}, q^{11}) as arrays of n x n real blocks per site
  struct Q0Field {
    Box box;
    std::vector<RMat> q00, q11;
    double periodization_tail = 0.0;  // sum of |q0| with |z|_inf > L/4
  };
  Q0Field realize_q0(const Box& box) const;

  // memoized realization on the default box
  const Q0Field& q0_cached() const;

  Box default_q0_box() const;

 private:
  mutable std::shared_ptr<Q0Field> q0_memo_;
};

CovarianceProfile gibbs_spectral(const InteractionMatrix& V, double T0);
CovarianceProfile product_profile(const TProfile& T, const CovarianceProfile& spectral);

// 2n x 2n covariance block Q_eps(z,z') = sqrt(T(eps z) T(eps z')) q_0(z-z')
Mat covariance_Q(const CovarianceProfile& profile, double eps,
                 const std::vector<int>& z, const std::vector<int>& zp);

// Stationary Gaussian synthesis on the box with the profile's spectral
// densities, then the sqrt(T) modulation. Counter-based draws: the same
// (seed) always yields the same field, byte-exact.
FieldState sample_field(const CovarianceProfile& profile, double eps, const Box& box,
                        std::uint64_t seed);

struct ProfileReport {
  std::vector<ConditionEntry> entries;  // I1..I4, I4', V1, V2
  bool all_pass() const;
  const ConditionEntry& entry(const std::string& name) const;
};

ProfileReport verify_profile(const CovarianceProfile& profile,
                             const std::vector<double>& eps_list);

}  // namespace hydrolat

#endif
