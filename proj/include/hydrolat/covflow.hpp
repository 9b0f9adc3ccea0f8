#ifndef HYDROLAT_COVFLOW_HPP
#define HYDROLAT_COVFLOW_HPP

#include <map>

#include "hydrolat/profile.hpp"

namespace hydrolat {

// 2n x 2n complex block matrix indexed by (i,j) in {0,1}^2.
struct BlockCov {
  int n = 1;
  Mat m;  // 2n x 2n

  BlockCov() = default;
  BlockCov(int n_, Mat m_) : n(n_), m(std::move(m_)) {}
  static BlockCov zero(int n) { return BlockCov(n, Mat::Zero(2 * n, 2 * n)); }
  Mat block(int i, int j) const { return m.block(i * n, j * n, n, n); }
  void set_block(int i, int j, const Mat& b) { m.block(i * n, j * n, n, n) = b; }
};

using OffsetPair = std::pair<std::vector<int>, std::vector<int>>;
using PairCov = std::map<OffsetPair, BlockCov>;

// Observation request under hydrodynamic scaling: time tau/eps^kappa at sites
// [r/eps] + z for the listed offset pairs (z, z').
struct ScaledQuery {
  double tau = 1.0;
  double kappa = 1.0;  // 1 Euler, 2 diffusive; fractional values supported
  RVec r;
  double eps = 0.1;
  std::vector<OffsetPair> offsets;
  int min_box = 0;  // optional lower bound on the box extent

  double time() const { return tau / std::pow(eps, kappa); }
};

// all (z, z') with components in [-zmax, zmax], d-dimensional along axis 0
std::vector<OffsetPair> offset_range(int d, int zmax);

// Box large enough that wrap-around cannot pollute the observed sites:
// L >= 2 (c t + |[r/eps]| + max offset + q0 correlation length), c the group
// speed bound with a 10% margin, rounded up to a power of two.
Box auto_box(const InteractionMatrix& V, const CovarianceProfile& profile,
             const ScaledQuery& q, bool halfspace);

// Exact covariance of the evolved field by linear propagation of the initial
// covariance, Q(x,y) = sum_{a,b} G_t(x-a) Q_eps(a,b) G_t(y-b)^T, with the
// inner sums done as FFT convolutions against the product structure.
PairCov propagate_covariance(const InteractionMatrix& V, const CovarianceProfile& profile,
                             const ScaledQuery& q);

struct EmpiricalCov {
  BlockCov mean;
  BlockCov stderr_;  // entrywise standard error of the mean
};

std::map<OffsetPair, EmpiricalCov> empirical_covariance(const InteractionMatrix& V,
                                                        const CovarianceProfile& profile,
                                                        const ScaledQuery& q, int nsamples,
                                                        std::uint64_t seed, int jobs = 1);

// Half-space covariance through image evolution: the odd-extended propagation
// with the initial covariance restricted to x1, y1 > 0 and zero on the plane.
PairCov halfspace_covariance(const InteractionMatrix& V, const CovarianceProfile& profile,
                             const ScaledQuery& q);

// ---- shared machinery -------------------------------------------------
// E[(K1 * W xi)(x) ox (K2 * W xi)(y)] for the stationary 2n-field xi with
// spectral blocks diag(q00hat, q11hat) and scalar site weights W. Kernels
// are position-space matrix fields; conjugate_first applies to K1's factor.
class BilinearPropagator {
 public:
  BilinearPropagator(Box box, int n, std::vector<Mat> k1, std::vector<Mat> k2,
                     std::vector<double> weights, std::vector<Mat> q0hat,
                     bool conjugate_first = false);

  Mat eval(std::int64_t x_index, std::int64_t y_index) const;
  const Box& box() const { return box_; }

 private:
  Box box_;
  int n_;
  int m1_, m2_;
  std::vector<Mat> k1_, k2_;
  std::vector<double> w_;
  std::vector<Mat> q0hat_;
  bool conj1_;
  mutable std::map<std::int64_t, std::vector<Mat>> ycache_;  // y -> W.(q0 conv W K2row)
  const std::vector<Mat>& yfield(std::int64_t y_index) const;
};

// position kernel of a matrix symbol: inverse lattice Fourier transform
std::vector<Mat> kernel_from_symbol(const Box& box, int rows, int cols,
                                    const std::function<Mat(const RVec&)>& symbol);

std::vector<Mat> q0hat_table(const CovarianceProfile& profile, const Box& box);

}  // namespace hydrolat

#endif
