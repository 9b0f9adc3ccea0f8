#include "hydrolat/covflow.hpp"

#include <algorithm>
#include <cmath>

namespace hydrolat {

std::vector<OffsetPair> offset_range(int d, int zmax) {
  std::vector<std::vector<int>> singles;
  for (int z = -zmax; z <= zmax; ++z) {
    std::vector<int> v(d, 0);
    v[0] = z;
    singles.push_back(v);
  }
  std::vector<OffsetPair> out;
  for (const auto& a : singles)
    for (const auto& b : singles) out.emplace_back(a, b);
  return out;
}

namespace {

// smallest radius R with sum of |q0| over |z|_inf > R below 1e-8
int correlation_length(const CovarianceProfile& profile) {
  const auto& f = profile.q0_cached();
  int half = *std::min_element(f.box.extents.begin(), f.box.extents.end()) / 2;
  std::vector<double> shell_sum(half, 0.0);
  for (std::int64_t i = 0; i < f.box.size(); ++i) {
    std::vector<int> z = f.box.signed_coord(i);
    int zr = 0;
    for (int c : z) zr = std::max(zr, std::abs(c));
    if (zr < half)
      shell_sum[zr] += f.q00[i].cwiseAbs().sum() + f.q11[i].cwiseAbs().sum();
  }
  double tail = 0.0;
  int radius = half;
  for (int s = half - 1; s >= 1; --s) {
    tail += shell_sum[s];
    if (tail > 1e-8) break;
    radius = s;
  }
  if (radius >= half)
    throw BoxError("correlation_length: q0 tail mass exceeds 1e-8 at the realization box");
  return radius;
}

std::vector<int> floor_div(const RVec& r, double eps) {
  std::vector<int> out(r.size());
  for (int i = 0; i < r.size(); ++i) out[i] = static_cast<int>(std::floor(r[i] / eps));
  return out;
}

int max_offset(const ScaledQuery& q) {
  int m = 0;
  for (const auto& [z, zp] : q.offsets) {
    for (int c : z) m = std::max(m, std::abs(c));
    for (int c : zp) m = std::max(m, std::abs(c));
  }
  return m;
}

}  // namespace

Box auto_box(const InteractionMatrix& V, const CovarianceProfile& profile,
             const ScaledQuery& q, bool halfspace) {
  double c = 1.1 * max_group_speed(V);
  double t = std::abs(q.time());
  int corr = correlation_length(profile);
  std::vector<int> base = floor_div(q.r, q.eps);
  int rmax = 0;
  for (int b : base) rmax = std::max(rmax, std::abs(b));
  double need = 2.0 * (c * t + rmax + max_offset(q) + corr + 8.0);
  int L = next_pow2(std::max(need, static_cast<double>(q.min_box)));
  if (halfspace) {
    // half extent on axis 1, doubled by the odd extension afterwards
    double half_need = c * t + std::abs(base[0]) + max_offset(q) + corr + 8.0;
    Box box = Box::cubic(V.d, L);
    box.extents[0] = next_pow2(std::max(half_need, static_cast<double>(q.min_box) / 2.0));
    return box;
  }
  return Box::cubic(V.d, L);
}

std::vector<Mat> kernel_from_symbol(const Box& box, int rows, int cols,
                                    const std::function<Mat(const RVec&)>& symbol) {
  std::vector<Mat> out(box.size(), Mat::Zero(rows, cols));
  std::vector<cplx> buf(box.size());
  std::vector<Mat> sym(box.size());
  for (std::int64_t i = 0; i < box.size(); ++i) sym[i] = symbol(box.theta(i));
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) {
      for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = sym[i](a, b);
      fft_inverse(box, buf);
      for (std::int64_t i = 0; i < box.size(); ++i) out[i](a, b) = buf[i];
    }
  return out;
}

std::vector<Mat> q0hat_table(const CovarianceProfile& profile, const Box& box) {
  int n = profile.n;
  std::vector<Mat> out(box.size(), Mat::Zero(2 * n, 2 * n));
  for (std::int64_t i = 0; i < box.size(); ++i) {
    RVec th = box.theta(i);
    out[i].topLeftCorner(n, n) = profile.q00_hat(th);
    out[i].bottomRightCorner(n, n) = profile.q11_hat(th);
  }
  return out;
}

BilinearPropagator::BilinearPropagator(Box box, int n, std::vector<Mat> k1,
                                       std::vector<Mat> k2, std::vector<double> weights,
                                       std::vector<Mat> q0hat, bool conjugate_first)
    : box_(std::move(box)),
      n_(n),
      k1_(std::move(k1)),
      k2_(std::move(k2)),
      w_(std::move(weights)),
      q0hat_(std::move(q0hat)),
      conj1_(conjugate_first) {
  m1_ = static_cast<int>(k1_.front().rows());
  m2_ = static_cast<int>(k2_.front().rows());
}

const std::vector<Mat>& BilinearPropagator::yfield(std::int64_t y_index) const {
  auto it = ycache_.find(y_index);
  if (it != ycache_.end()) return it->second;

  const std::int64_t size = box_.size();
  std::vector<int> y = box_.unindex(y_index);

  // C(b) = W(b) K2(y-b)^T, then D = q0 conv C in Fourier, then E(a) = W(a) D(a)
  std::vector<Mat> C(size);
  for (std::int64_t b = 0; b < size; ++b) {
    std::vector<int> w = box_.unindex(b);
    for (int i = 0; i < box_.dim(); ++i) w[i] = y[i] - w[i];
    C[b] = w_[b] * k2_[box_.index(w)].transpose();  // 2n x m2
  }
  std::vector<cplx> buf(size);
  std::vector<Mat> D(size, Mat::Zero(2 * n_, m2_));
  for (int a = 0; a < 2 * n_; ++a)
    for (int c = 0; c < m2_; ++c) {
      for (std::int64_t b = 0; b < size; ++b) buf[b] = C[b](a, c);
      fft_forward(box_, buf);
      for (std::int64_t b = 0; b < size; ++b) C[b](a, c) = buf[b];
    }
  for (std::int64_t k = 0; k < size; ++k) C[k] = q0hat_[k] * C[k];
  for (int a = 0; a < 2 * n_; ++a)
    for (int c = 0; c < m2_; ++c) {
      for (std::int64_t b = 0; b < size; ++b) buf[b] = C[b](a, c);
      fft_inverse(box_, buf);
      for (std::int64_t b = 0; b < size; ++b) D[b](a, c) = buf[b];
    }
  for (std::int64_t b = 0; b < size; ++b) D[b] *= w_[b];

  return ycache_.emplace(y_index, std::move(D)).first->second;
}

Mat BilinearPropagator::eval(std::int64_t x_index, std::int64_t y_index) const {
  const std::vector<Mat>& E = yfield(y_index);
  std::vector<int> x = box_.unindex(x_index);
  Mat acc = Mat::Zero(m1_, m2_);
  const std::int64_t size = box_.size();
  for (std::int64_t a = 0; a < size; ++a) {
    std::vector<int> w = box_.unindex(a);
    for (int i = 0; i < box_.dim(); ++i) w[i] = x[i] - w[i];
    const Mat& kk = k1_[box_.index(w)];
    acc += (conj1_ ? kk.conjugate() : kk) * E[a];
  }
  return acc;
}

namespace {

std::vector<double> product_weights(const CovarianceProfile& profile, const Box& box,
                                    double eps) {
  std::vector<double> w(box.size());
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> z = box.signed_coord(i);
    RVec r(profile.d);
    for (int c = 0; c < profile.d; ++c) r[c] = eps * z[c];
    w[i] = std::sqrt(profile.T(r));
  }
  return w;
}

BlockCov realify(int n, const Mat& m, double tol = 1e-9) {
  double imax = m.imag().cwiseAbs().maxCoeff();
  if (imax > tol)
    throw BoxError("covariance propagation: imaginary residue " + std::to_string(imax));
  return BlockCov(n, m.real().cast<cplx>());
}

}  // namespace

PairCov propagate_covariance(const InteractionMatrix& V, const CovarianceProfile& profile,
                             const ScaledQuery& q) {
  V.validate();
  Box box = auto_box(V, profile, q, false);
  double t = q.time();
  PropagatorTable tab = propagator_table(V, box, t);
  std::vector<Mat> g(box.size());
  {
    // position-space Green kernel from the symbol table
    std::vector<cplx> buf(box.size());
    for (auto& m : g) m = Mat::Zero(2 * V.n, 2 * V.n);
    for (int a = 0; a < 2 * V.n; ++a)
      for (int b = 0; b < 2 * V.n; ++b) {
        for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = tab.ghat[i](a, b);
        fft_inverse(box, buf);
        for (std::int64_t i = 0; i < box.size(); ++i) g[i](a, b) = buf[i];
      }
  }
  BilinearPropagator bp(box, V.n, g, g, product_weights(profile, box, q.eps),
                        q0hat_table(profile, box));

  std::vector<int> base = floor_div(q.r, q.eps);
  PairCov out;
  for (const auto& pr : q.offsets) {
    std::vector<int> x(base), y(base);
    for (int i = 0; i < V.d; ++i) {
      x[i] += pr.first[i];
      y[i] += pr.second[i];
    }
    out.emplace(pr, realify(V.n, bp.eval(box.index(x), box.index(y))));
  }
  return out;
}

std::map<OffsetPair, EmpiricalCov> empirical_covariance(const InteractionMatrix& V,
                                                        const CovarianceProfile& profile,
                                                        const ScaledQuery& q, int nsamples,
                                                        std::uint64_t seed, int jobs) {
  if (nsamples < 100) throw InvalidParameterError("empirical_covariance: nsamples >= 100");
  V.validate();
  Box box = auto_box(V, profile, q, false);
  PropagatorTable tab = propagator_table(V, box, q.time());
  std::vector<int> base = floor_div(q.r, q.eps);

  std::vector<std::int64_t> xs, ys;
  for (const auto& pr : q.offsets) {
    std::vector<int> x(base), y(base);
    for (int i = 0; i < V.d; ++i) {
      x[i] += pr.first[i];
      y[i] += pr.second[i];
    }
    xs.push_back(box.index(x));
    ys.push_back(box.index(y));
  }

  const int npairs = static_cast<int>(q.offsets.size());
  const int n = V.n;
  // one slot per sample; reductions run in fixed order afterwards
  std::vector<std::vector<RMat>> slot(nsamples,
                                      std::vector<RMat>(npairs, RMat::Zero(2 * n, 2 * n)));
  CounterRng rng{seed};
  parallel_for(nsamples, jobs, [&](std::size_t s) {
    std::uint64_t sample_seed = rng.word(0x5eedULL, s, 0);
    FieldState x0 = sample_field(profile, q.eps, box, sample_seed);
    FieldState xt = apply_propagator(tab, x0);
    for (int p = 0; p < npairs; ++p) {
      Eigen::VectorXd vx(2 * n), vy(2 * n);
      vx.head(n) = xt.v0.col(xs[p]);
      vx.tail(n) = xt.v1.col(xs[p]);
      vy.head(n) = xt.v0.col(ys[p]);
      vy.tail(n) = xt.v1.col(ys[p]);
      slot[s][p] = vx * vy.transpose();
    }
  });

  std::map<OffsetPair, EmpiricalCov> out;
  for (int p = 0; p < npairs; ++p) {
    std::vector<RMat> vals(nsamples);
    for (int s = 0; s < nsamples; ++s) vals[s] = slot[s][p];
    RMat mean = pairwise_sum(vals) / nsamples;
    std::vector<RMat> sq(nsamples);
    for (int s = 0; s < nsamples; ++s)
      sq[s] = (vals[s] - mean).array().square().matrix();
    RMat var = pairwise_sum(sq) / (nsamples - 1);
    RMat se = (var / nsamples).array().sqrt().matrix();
    EmpiricalCov ec;
    ec.mean = BlockCov(n, mean.cast<cplx>());
    ec.stderr_ = BlockCov(n, se.cast<cplx>());
    out.emplace(q.offsets[p], ec);
  }
  return out;
}

PairCov halfspace_covariance(const InteractionMatrix& V, const CovarianceProfile& profile,
                             const ScaledQuery& q) {
  V.validate();
  if (!V.axis_symmetric)
    throw ModelViolationError("halfspace_covariance: V(z~) = V(z) required");
  if (q.r[0] < 0.0) throw InvalidParameterError("halfspace_covariance: r1 must be >= 0");

  Box half = auto_box(V, profile, q, true);
  Box box = half;
  const int L1 = half.extents[0];
  box.extents[0] = 2 * L1;

  double t = q.time();
  PropagatorTable tab = propagator_table(V, box, t);
  std::vector<Mat> g(box.size(), Mat::Zero(2 * V.n, 2 * V.n));
  {
    std::vector<cplx> buf(box.size());
    for (int a = 0; a < 2 * V.n; ++a)
      for (int b = 0; b < 2 * V.n; ++b) {
        for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = tab.ghat[i](a, b);
        fft_inverse(box, buf);
        for (std::int64_t i = 0; i < box.size(); ++i) g[i](a, b) = buf[i];
      }
  }

  // weights supported on the physical half z1 in [1, L1-1]; the initial
  // covariance vanishes on the boundary plane and on the image side
  std::vector<double> w(box.size(), 0.0);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> k = box.unindex(i);
    if (k[0] < 1 || k[0] >= L1) continue;
    RVec r(profile.d);
    r[0] = q.eps * k[0];
    std::vector<int> zc = box.signed_coord(i);
    for (int c = 1; c < profile.d; ++c) r[c] = q.eps * zc[c];
    w[i] = std::sqrt(profile.T(r));
  }

  BilinearPropagator bp(box, V.n, g, g, std::move(w), q0hat_table(profile, box));

  std::vector<int> base = floor_div(q.r, q.eps);
  auto mirror = [&](std::vector<int> site) {
    site[0] = (2 * L1 - site[0]) % (2 * L1);
    return site;
  };

  PairCov out;
  for (const auto& pr : q.offsets) {
    std::vector<int> x(base), y(base);
    for (int i = 0; i < V.d; ++i) {
      x[i] += pr.first[i];
      y[i] += pr.second[i];
    }
    if (x[0] < 0 || y[0] < 0 || x[0] >= L1 || y[0] >= L1)
      throw InvalidParameterError("halfspace_covariance: observed site outside the half box");
    std::int64_t ix = box.index(x), iy = box.index(y);
    std::int64_t ixm = box.index(mirror(x)), iym = box.index(mirror(y));
    Mat val = bp.eval(ix, iy) - bp.eval(ixm, iy) - bp.eval(ix, iym) + bp.eval(ixm, iym);
    out.emplace(pr, realify(V.n, val));
  }
  return out;
}

}  // namespace hydrolat
