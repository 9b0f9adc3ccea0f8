#ifndef HYDROLAT_DISPERSION_HPP
#define HYDROLAT_DISPERSION_HPP

#include "hydrolat/grid.hpp"
#include "hydrolat/interaction.hpp"

namespace hydrolat {

// One band of Omega(theta): eigenvalue with its projector and derivatives.
struct Band {
  double omega = 0.0;
  int multiplicity = 1;
  Mat projector;    // Hermitian, rank = multiplicity
  RVec grad_omega;  // d-vector
  RMat hess_omega;  // symmetric d x d
};

// Per-theta dispersion data: Vhat, Omega = Vhat^{1/2} and its band
// decomposition with derivatives, bands ordered by increasing omega.
struct SpectralPoint {
  RVec theta;
  Mat vhat;
  Mat omega_matrix;
  std::vector<Band> bands;
};

struct SpectralOptions {
  double fd_step = 1e-4;     // central-difference step for non-closed-form V
  double gap_tol = 1e-8;     // bands closer than this are one group; a split
                             // this fine means theta sits on the critical set
  double psd_tol = 1e-10;    // tolerated negative part of Vhat eigenvalues
  bool want_derivatives = true;
};

SpectralPoint spectral_data(const InteractionMatrix& V, const RVec& theta,
                            const SpectralOptions& opt = {});

// third derivative tensor d^3 omega_sigma / dtheta^3, nested central
// differences of the Hessian with the given step (d = 1 only)
double omega_third_derivative(const InteractionMatrix& V, const RVec& theta,
                              int band, double step = 1e-3);

// 1.0-safe upper bound for max_{theta,sigma} |grad omega| estimated on a grid
double max_group_speed(const InteractionMatrix& V, int grid = 256);

enum class CheckStatus { Pass, Fail, SampledPass, SampledFail };

struct ConditionEntry {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double margin = 0.0;
  std::vector<RVec> witnesses;
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;  // E1..E6
  std::vector<RVec> critical_samples;   // grid points flagged near the critical set
  bool all_pass() const;
  const ConditionEntry& entry(const std::string& name) const;
};

ConditionReport check_conditions(const InteractionMatrix& V, int grid_resolution);

}  // namespace hydrolat

#endif
