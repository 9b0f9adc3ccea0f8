#include "hydrolat/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace hydrolat {

namespace {

// sin(w t)/w with the removable singularity expanded for small w
double sinc_omega(double w, double t) {
  if (w < 1e-6) return t - w * w * t * t * t / 6.0;
  return std::sin(w * t) / w;
}

Mat ghat_from_vhat(const Mat& vhat, double t, int n) {
  Eigen::SelfAdjointEigenSolver<Mat> es(vhat);
  Mat c = Mat::Zero(n, n), s_over = Mat::Zero(n, n), s_times = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double w = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    Mat proj = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    c += std::cos(w * t) * proj;
    s_over += sinc_omega(w, t) * proj;
    s_times += w * std::sin(w * t) * proj;
  }
  Mat ghat(2 * n, 2 * n);
  ghat.topLeftCorner(n, n) = c;
  ghat.topRightCorner(n, n) = s_over;
  ghat.bottomLeftCorner(n, n) = -s_times;
  ghat.bottomRightCorner(n, n) = c;
  return ghat;
}

}  // namespace

void FieldState::validate() const {
  if (v0.cols() != box.size() || v1.cols() != box.size() || v0.rows() != v1.rows())
    throw InvalidParameterError("FieldState: array shape does not match box");
  if (half_space) {
    for (std::int64_t i = 0; i < box.size(); ++i) {
      if (box.unindex(i)[0] != 0) continue;
      if (v0.col(i).cwiseAbs().maxCoeff() > 0.0 || v1.col(i).cwiseAbs().maxCoeff() > 0.0)
        throw ModelViolationError("FieldState: half-space state must vanish at z1 = 0");
    }
  }
}

PropagatorSymbol propagator_symbol(const SpectralPoint& sp, double t) {
  int n = static_cast<int>(sp.vhat.rows());
  Mat c = Mat::Zero(n, n), s_over = Mat::Zero(n, n), s_times = Mat::Zero(n, n);
  for (const Band& b : sp.bands) {
    c += std::cos(b.omega * t) * b.projector;
    s_over += sinc_omega(b.omega, t) * b.projector;
    s_times += b.omega * std::sin(b.omega * t) * b.projector;
  }
  PropagatorSymbol out;
  out.theta = sp.theta;
  out.ghat = Mat(2 * n, 2 * n);
  out.ghat.topLeftCorner(n, n) = c;
  out.ghat.topRightCorner(n, n) = s_over;
  out.ghat.bottomLeftCorner(n, n) = -s_times;
  out.ghat.bottomRightCorner(n, n) = c;
  return out;
}

PropagatorTable propagator_table(const InteractionMatrix& V, const Box& box, double t) {
  V.validate();
  PropagatorTable tab;
  tab.box = box;
  tab.n = V.n;
  tab.ghat.resize(box.size());
  parallel_for(box.size(), 2, [&](std::size_t i) {
    tab.ghat[i] = ghat_from_vhat(fourier_symbol(V, box.theta(i)), t, V.n);
  });
  return tab;
}

GreenFunction green_function(const InteractionMatrix& V, double t, const Box& box) {
  if (!box.power_of_two()) throw BoxError("green_function: box extents must be powers of two");
  if (2 * V.support_radius() >= *std::min_element(box.extents.begin(), box.extents.end()))
    throw BoxError("green_function: interaction support does not fit the box");
  PropagatorTable tab = propagator_table(V, box, t);
  int m = 2 * V.n;
  GreenFunction gf;
  gf.box = box;
  gf.n = V.n;
  gf.g.assign(box.size(), RMat::Zero(m, m));

  std::vector<cplx> buf(box.size());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = tab.ghat[i](a, b);
      fft_inverse(box, buf);
      for (std::int64_t i = 0; i < box.size(); ++i) {
        gf.max_imag_residue = std::max(gf.max_imag_residue, std::abs(buf[i].imag()));
        gf.g[i](a, b) = buf[i].real();
      }
    }
  if (gf.max_imag_residue > 1e-10)
    throw BoxError("green_function: imaginary residue above 1e-10");
  return gf;
}

FieldState evolve(const InteractionMatrix& V, const FieldState& x0, double t) {
  x0.validate();
  if (x0.half_space) throw InvalidParameterError("evolve: use evolve_halfspace for half-space states");
  if (x0.n() != V.n) throw InvalidParameterError("evolve: component count mismatch");
  if (2 * V.support_radius() >= *std::min_element(x0.box.extents.begin(), x0.box.extents.end()))
    throw BoxError("evolve: interaction support does not fit the box");
  return apply_propagator(propagator_table(V, x0.box, t), x0);
}

FieldState apply_propagator(const PropagatorTable& tab, const FieldState& x0) {
  const Box& box = x0.box;
  if (box.extents != tab.box.extents)
    throw BoxError("apply_propagator: table box mismatch");
  int n = tab.n;

  std::vector<std::vector<cplx>> hat(2 * n, std::vector<cplx>(box.size()));
  for (int c = 0; c < n; ++c) {
    for (std::int64_t i = 0; i < box.size(); ++i) {
      hat[c][i] = x0.v0(c, i);
      hat[n + c][i] = x0.v1(c, i);
    }
    fft_forward(box, hat[c]);
    fft_forward(box, hat[n + c]);
  }

  Eigen::VectorXcd tmp(2 * n);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    for (int a = 0; a < 2 * n; ++a) tmp[a] = hat[a][i];
    tmp = tab.ghat[i] * tmp;
    for (int a = 0; a < 2 * n; ++a) hat[a][i] = tmp[a];
  }

  FieldState out;
  out.box = box;
  out.v0.resize(n, box.size());
  out.v1.resize(n, box.size());
  for (int c = 0; c < n; ++c) {
    fft_inverse(box, hat[c]);
    fft_inverse(box, hat[n + c]);
    for (std::int64_t i = 0; i < box.size(); ++i) {
      out.v0(c, i) = hat[c][i].real();
      out.v1(c, i) = hat[n + c][i].real();
    }
  }
  return out;
}

FieldState odd_extension(const FieldState& y) {
  const Box& half = y.box;
  int L1 = half.extents[0];
  Box full = half;
  full.extents[0] = 2 * L1;
  int n = y.n();

  // w(z1) = Y(z1) for z1 in [0, L1), w(2 L1 - z1) = -Y(z1), which forces
  // w = 0 on both planes z1 = 0 and z1 = L1
  FieldState ext;
  ext.box = full;
  ext.v0 = RMat::Zero(n, full.size());
  ext.v1 = RMat::Zero(n, full.size());
  for (std::int64_t i = 0; i < half.size(); ++i) {
    std::vector<int> k = half.unindex(i);
    std::int64_t ip = full.index(k);
    ext.v0.col(ip) = y.v0.col(i);
    ext.v1.col(ip) = y.v1.col(i);
    if (k[0] != 0) {
      std::vector<int> km = k;
      km[0] = 2 * L1 - k[0];
      std::int64_t im = full.index(km);
      ext.v0.col(im) = -y.v0.col(i);
      ext.v1.col(im) = -y.v1.col(i);
    }
  }
  return ext;
}

FieldState restrict_to_half(const FieldState& x, const Box& half) {
  const Box& full = x.box;
  FieldState out;
  out.box = half;
  out.half_space = true;
  out.v0.resize(x.n(), half.size());
  out.v1.resize(x.n(), half.size());
  for (std::int64_t i = 0; i < half.size(); ++i) {
    std::int64_t ip = full.index(half.unindex(i));
    out.v0.col(i) = x.v0.col(ip);
    out.v1.col(i) = x.v1.col(ip);
  }
  return out;
}

FieldState evolve_halfspace(const InteractionMatrix& V, const FieldState& y0, double t) {
  y0.validate();
  if (!y0.half_space) throw InvalidParameterError("evolve_halfspace: state is not half-space");
  if (!V.axis_symmetric)
    throw ModelViolationError("evolve_halfspace: V(z~) = V(z) required for the image method");
  FieldState evolved = evolve(V, odd_extension(y0), t);
  return restrict_to_half(evolved, y0.box);
}

double hamiltonian(const InteractionMatrix& V, const FieldState& x) {
  x.validate();
  if (x.half_space) throw InvalidParameterError("hamiltonian: full-space states only");
  double kinetic = 0.5 * x.v1.squaredNorm();
  // potential term via direct convolution over the finite support (periodic)
  double potential = 0.0;
  const Box& box = x.box;
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> zi = box.unindex(i);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.n());
    for (const auto& [dz, m] : V.support) {
      std::vector<int> zj = zi;
      for (int a = 0; a < box.dim(); ++a) zj[a] -= dz[a];
      acc += m * x.v0.col(box.index(zj));
    }
    potential += x.v0.col(i).dot(acc);
  }
  return kinetic + 0.5 * potential;
}

double phase_space_norm(const FieldState& x, double alpha) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < x.box.size(); ++i) {
    std::vector<int> z = x.half_space ? x.box.unindex(i) : x.box.signed_coord(i);
    double r2 = 0.0;
    for (int c : z) r2 += static_cast<double>(c) * c;
    acc += (x.v0.col(i).squaredNorm() + x.v1.col(i).squaredNorm()) * std::pow(1.0 + r2, alpha);
  }
  return acc;
}

}  // namespace hydrolat
