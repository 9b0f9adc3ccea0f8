#include "hydrolat/interaction.hpp"

#include <cmath>

namespace hydrolat {

RMat InteractionMatrix::at(const std::vector<int>& z) const {
  auto it = support.find(z);
  if (it == support.end()) return RMat::Zero(n, n);
  return it->second;
}

int InteractionMatrix::support_radius() const {
  int r = 0;
  for (const auto& [z, m] : support)
    for (int zi : z) r = std::max(r, std::abs(zi));
  return r;
}

void InteractionMatrix::validate() const {
  if (d < 1 || n < 1) throw InvalidParameterError("interaction: d and n must be positive");
  for (const auto& [z, m] : support) {
    if (static_cast<int>(z.size()) != d || m.rows() != n || m.cols() != n)
      throw InvalidParameterError("interaction: block shape mismatch");
    std::vector<int> neg(z);
    for (auto& c : neg) c = -c;
    if ((at(neg) - m.transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw ConditionViolationError("interaction: V(-z) != V(z)^T at an offset");
    if (axis_symmetric) {
      std::vector<int> tz(z);
      tz[0] = -tz[0];
      if ((at(tz) - m).cwiseAbs().maxCoeff() > 0.0)
        throw ModelViolationError("interaction: axis symmetry V(z~) = V(z) violated");
    }
  }
}

InteractionMatrix build_nearest_neighbor(int d, const std::vector<double>& gammas,
                                         const std::vector<double>& masses) {
  if (d < 1) throw InvalidParameterError("nearest_neighbor: d must be >= 1");
  int n = static_cast<int>(gammas.size());
  if (n < 1 || masses.size() != gammas.size())
    throw InvalidParameterError("nearest_neighbor: gamma/mass lists must match and be nonempty");
  for (double g : gammas)
    if (!(g > 0.0)) throw InvalidParameterError("nearest_neighbor: gamma_k must be positive");
  for (double m : masses)
    if (m < 0.0) throw InvalidParameterError("nearest_neighbor: m_k must be non-negative");

  InteractionMatrix V;
  V.d = d;
  V.n = n;
  V.axis_symmetric = true;
  V.nn = NearestNeighborParams{gammas, masses};

  RMat diag0 = RMat::Zero(n, n);
  for (int k = 0; k < n; ++k) diag0(k, k) = 2.0 * d * gammas[k] + masses[k] * masses[k];
  V.support[std::vector<int>(d, 0)] = diag0;

  for (int j = 0; j < d; ++j) {
    RMat hop = RMat::Zero(n, n);
    for (int k = 0; k < n; ++k) hop(k, k) = -gammas[k];
    std::vector<int> e(d, 0);
    e[j] = 1;
    V.support[e] = hop;
    e[j] = -1;
    V.support[e] = hop;
  }
  return V;
}

Mat fourier_symbol(const InteractionMatrix& V, const RVec& theta) {
  Mat out = Mat::Zero(V.n, V.n);
  for (const auto& [z, m] : V.support) {
    double phase = 0.0;
    for (int i = 0; i < V.d; ++i) phase += z[i] * theta[i];
    out += m.cast<cplx>() * std::exp(cplx(0.0, phase));
  }
  return out;
}

Mat fourier_symbol_derivative(const InteractionMatrix& V, const RVec& theta, int axis) {
  Mat out = Mat::Zero(V.n, V.n);
  for (const auto& [z, m] : V.support) {
    double phase = 0.0;
    for (int i = 0; i < V.d; ++i) phase += z[i] * theta[i];
    out += m.cast<cplx>() * (cplx(0.0, 1.0) * static_cast<double>(z[axis])) *
           std::exp(cplx(0.0, phase));
  }
  return out;
}

}  // namespace hydrolat
