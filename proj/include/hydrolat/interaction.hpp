#ifndef HYDROLAT_INTERACTION_HPP
#define HYDROLAT_INTERACTION_HPP

#include <map>
#include <optional>

#include "hydrolat/common.hpp"

namespace hydrolat {

// Parameters of the nearest-neighbor family; kept on the interaction matrix
// so band derivatives can use the closed-form dispersion relation.
struct NearestNeighborParams {
  std::vector<double> gamma;
  std::vector<double> mass;
};

// Finite-support lattice kernel V(z) of real n x n blocks (the force matrix).
// Invariants: V(-z) = V(z)^T for all offsets; axis_symmetric additionally
// requires V((-z1, zbar)) = V((z1, zbar)), which the half-space model needs.
struct InteractionMatrix {
  int d = 1;
  int n = 1;
  std::map<std::vector<int>, RMat> support;
  bool axis_symmetric = false;
  std::optional<NearestNeighborParams> nn;

  RMat at(const std::vector<int>& z) const;
  int support_radius() const;  // max |z|_inf over the support
  void validate() const;       // E2 plus shape checks; throws on violation
};

// V_kk(0) = 2 d gamma_k + m_k^2, V_kk(+-e_j) = -gamma_k, all else zero.
InteractionMatrix build_nearest_neighbor(int d, const std::vector<double>& gammas,
                                         const std::vector<double>& masses);

// Vhat(theta) = sum_z V(z) e^{i z.theta}; real-analytic and Hermitian.
Mat fourier_symbol(const InteractionMatrix& V, const RVec& theta);

// d/dtheta_k of the symbol: sum_z i z_k V(z) e^{i z.theta}
Mat fourier_symbol_derivative(const InteractionMatrix& V, const RVec& theta, int axis);

}  // namespace hydrolat

#endif
