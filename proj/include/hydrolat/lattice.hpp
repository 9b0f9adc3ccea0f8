#ifndef HYDROLAT_LATTICE_HPP
#define HYDROLAT_LATTICE_HPP

#include "hydrolat/dispersion.hpp"
#include "hydrolat/fft.hpp"

namespace hydrolat {

// A pair (v0, v1) of n-vector fields on a periodic box; one sample of the
// phase-space variable X = (v(.,t), v'(.,t)). Matrices are n x |box| with
// one column per site. A half-space state vanishes on the plane z1 = 0 and
// axis 1 carries the odd-extension convention.
struct FieldState {
  Box box;
  RMat v0;
  RMat v1;
  bool half_space = false;

  int n() const { return static_cast<int>(v0.rows()); }
  void validate() const;
};

// 2n x 2n symbol of the flow: [[cos Omega t, sin(Omega t) Omega^{-1}],
// [-Omega sin Omega t, cos Omega t]]; unit determinant, identity at t = 0.
struct PropagatorSymbol {
  RVec theta;
  Mat ghat;  // 2n x 2n
};

PropagatorSymbol propagator_symbol(const SpectralPoint& sp, double t);

// Symbol table over a box grid, cached input to evolution and covariance
// propagation. Built by functional calculus on Vhat, so band crossings on the
// grid are harmless.
struct PropagatorTable {
  Box box;
  int n = 1;
  std::vector<Mat> ghat;  // per site index
};

PropagatorTable propagator_table(const InteractionMatrix& V, const Box& box, double t);

struct GreenFunction {
  Box box;
  int n = 1;
  std::vector<RMat> g;       // per site, 2n x 2n real
  double max_imag_residue = 0.0;
};

GreenFunction green_function(const InteractionMatrix& V, double t, const Box& box);

FieldState evolve(const InteractionMatrix& V, const FieldState& x0, double t);

// evolve with a prebuilt symbol table (amortizes the per-t setup across
// Monte Carlo samples)
FieldState apply_propagator(const PropagatorTable& tab, const FieldState& x0);

// Odd extension across z1 = 0 on a doubled axis-1 box, full-space evolution,
// restriction back to the half box. Requires V(z~) = V(z).
FieldState evolve_halfspace(const InteractionMatrix& V, const FieldState& y0, double t);

// odd extension of a half-space state onto the doubled axis-1 box, and the
// restriction back
FieldState odd_extension(const FieldState& y);
FieldState restrict_to_half(const FieldState& x, const Box& half);

double hamiltonian(const InteractionMatrix& V, const FieldState& x);

// weighted phase-space norm sum |X(z)|^2 (1+|z|^2)^alpha, diagnostic only
double phase_space_norm(const FieldState& x, double alpha);

}  // namespace hydrolat

#endif
