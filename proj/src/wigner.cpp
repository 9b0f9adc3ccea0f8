#include "hydrolat/wigner.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace hydrolat {

namespace {

// Omega^{power} as a multiplier matrix at theta; rejects singular Vhat
Mat omega_power(const Mat& vhat, double power) {
  Eigen::SelfAdjointEigenSolver<Mat> es(vhat);
  int n = static_cast<int>(vhat.rows());
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < 1e-12)
      throw ConditionViolationError("a_field: Vhat not positive definite, fractional power undefined");
    out += std::pow(std::sqrt(lam), power) * es.eigenvectors().col(i) *
           es.eigenvectors().col(i).adjoint();
  }
  return out;
}

Eigen::MatrixXcd a_field_fullspace(const InteractionMatrix& V, const FieldState& x) {
  const Box& box = x.box;
  int n = V.n;
  std::vector<std::vector<cplx>> hat0(n, std::vector<cplx>(box.size()));
  std::vector<std::vector<cplx>> hat1(n, std::vector<cplx>(box.size()));
  for (int c = 0; c < n; ++c) {
    for (std::int64_t i = 0; i < box.size(); ++i) {
      hat0[c][i] = x.v0(c, i);
      hat1[c][i] = x.v1(c, i);
    }
    fft_forward(box, hat0[c]);
    fft_forward(box, hat1[c]);
  }
  const double inv_sqrt2 = 0.7071067811865476;
  Eigen::VectorXcd tmp0(n), tmp1(n);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    Mat vhat = fourier_symbol(V, box.theta(i));
    Mat half = omega_power(vhat, 0.5);
    Mat ihalf = omega_power(vhat, -0.5);
    for (int c = 0; c < n; ++c) {
      tmp0[c] = hat0[c][i];
      tmp1[c] = hat1[c][i];
    }
    Eigen::VectorXcd a = inv_sqrt2 * (half * tmp0 + cplx(0.0, 1.0) * (ihalf * tmp1));
    for (int c = 0; c < n; ++c) hat0[c][i] = a[c];
  }
  Eigen::MatrixXcd out(n, box.size());
  for (int c = 0; c < n; ++c) {
    fft_inverse(box, hat0[c]);
    for (std::int64_t i = 0; i < box.size(); ++i) out(c, i) = hat0[c][i];
  }
  return out;
}

double taper_factor(int y, const WignerOptions& opt) {
  double ay = std::abs(y);
  double y0 = (1.0 - opt.taper) * opt.y_max;
  if (ay <= y0) return 1.0;
  return 0.5 * (1.0 + std::cos(pi * (ay - y0) / (opt.y_max - y0)));
}

std::vector<int> window_offsets(const WignerOptions& opt) {
  std::vector<int> ys;
  int step = opt.even_y ? 2 : 1;
  for (int y = -opt.y_max; y <= opt.y_max; y += step) ys.push_back(y);
  return ys;
}

Box wigner_box(const InteractionMatrix& V, const CovarianceProfile& profile, double eps,
               double tau, const RVec& r, const WignerOptions& opt) {
  ScaledQuery q;
  q.tau = tau;
  q.kappa = 1.0;
  q.r = r;
  q.eps = eps;
  std::vector<int> z(V.d, 0), zp(V.d, 0);
  z[0] = opt.y_max / 2 + 1;
  zp[0] = -opt.y_max / 2 - 1;
  q.offsets = {{z, zp}};
  return auto_box(V, profile, q, false);
}

// site pair of the correlation at window offset y around r/eps
std::pair<std::int64_t, std::int64_t> pair_sites(const Box& box, const RVec& r, double eps,
                                                 int y, bool even_y) {
  std::vector<int> xp(box.dim(), 0), xm(box.dim(), 0);
  if (even_y) {
    int base = static_cast<int>(std::floor(r[0] / eps));
    xp[0] = base + y / 2;
    xm[0] = base - y / 2;
  } else {
    xp[0] = static_cast<int>(std::floor(r[0] / eps + 0.5 * y));
    xm[0] = static_cast<int>(std::floor(r[0] / eps - 0.5 * y));
  }
  for (int i = 1; i < box.dim(); ++i) {
    int base = static_cast<int>(std::floor(r[i] / eps));
    xp[i] = base;
    xm[i] = base;
  }
  return {box.index(xp), box.index(xm)};
}

WignerGrid theta_sum(const std::vector<double>& thetas, const std::vector<int>& ys,
                     const std::vector<Mat>& corr, const WignerOptions& opt, int n) {
  WignerGrid grid;
  grid.thetas = thetas;
  for (double th : thetas) {
    Mat acc = Mat::Zero(n, n);
    for (std::size_t j = 0; j < ys.size(); ++j)
      acc += taper_factor(ys[j], opt) * std::exp(cplx(0.0, th * ys[j])) * corr[j];
    grid.values.push_back(acc);
  }
  return grid;
}

}  // namespace

Eigen::MatrixXcd a_field(const InteractionMatrix& V, const FieldState& x) {
  x.validate();
  if (!x.half_space) return a_field_fullspace(V, x);
  if (!V.axis_symmetric)
    throw ModelViolationError("a_field: half-space multiplier needs V(z~) = V(z)");
  Eigen::MatrixXcd full = a_field_fullspace(V, odd_extension(x));
  const Box& half = x.box;
  Box fbox = half;
  fbox.extents[0] *= 2;
  Eigen::MatrixXcd out(V.n, half.size());
  for (std::int64_t i = 0; i < half.size(); ++i)
    out.col(i) = full.col(fbox.index(half.unindex(i)));
  return out;
}

WignerGrid wigner_empirical(const InteractionMatrix& V, const CovarianceProfile& profile,
                            double eps, double tau, const RVec& r,
                            const std::vector<double>& thetas, int nsamples,
                            std::uint64_t seed, const WignerOptions& opt) {
  if (V.d != 1) throw UnsupportedError("wigner_empirical: d = 1 windows only");
  if (nsamples < 100) throw InvalidParameterError("wigner_empirical: nsamples >= 100");
  Box box = wigner_box(V, profile, eps, tau, r, opt);
  PropagatorTable tab = propagator_table(V, box, tau / eps);
  std::vector<int> ys = window_offsets(opt);
  const int n = V.n;

  // estimated window tail from the fitted covariance decay: the correlation
  // length must sit well inside the window
  {
    const auto& f = profile.q0_cached();
    double tail = 0.0;
    for (std::int64_t i = 0; i < f.box.size(); ++i) {
      int z = std::abs(f.box.signed_coord(i)[0]);
      if (z > opt.y_max / 2)
        tail += f.q00[i].cwiseAbs().maxCoeff() + f.q11[i].cwiseAbs().maxCoeff();
    }
    if (tail > 1e-6)
      throw GridError("wigner_empirical: y window too small for the covariance decay");
  }

  std::vector<std::vector<Mat>> slot(nsamples);
  CounterRng rng{seed};
  parallel_for(nsamples, opt.jobs, [&](std::size_t s) {
    std::uint64_t sample_seed = rng.word(0x5eedULL, s, 0);
    FieldState x0 = sample_field(profile, eps, box, sample_seed);
    FieldState xt = apply_propagator(tab, x0);
    Eigen::MatrixXcd a = a_field(V, xt);
    std::vector<Mat>& corr = slot[s];
    corr.resize(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
      auto [ip, im] = pair_sites(box, r, eps, ys[j], opt.even_y);
      corr[j] = a.col(ip).conjugate() * a.col(im).transpose();
    }
  });

  // per-sample theta values, then fixed-order reduction for mean and stderr
  std::size_t nth = thetas.size();
  std::vector<std::vector<Mat>> wth(nsamples, std::vector<Mat>(nth));
  for (int s = 0; s < nsamples; ++s) {
    WignerGrid g = theta_sum(thetas, ys, slot[s], opt, n);
    for (std::size_t k = 0; k < nth; ++k) wth[s][k] = g.values[k];
  }

  WignerGrid grid;
  grid.variant = WignerGrid::Variant::Empirical;
  grid.eps = eps;
  grid.thetas = thetas;
  for (std::size_t k = 0; k < nth; ++k) {
    std::vector<Mat> vals(nsamples);
    for (int s = 0; s < nsamples; ++s) vals[s] = wth[s][k];
    Mat mean = pairwise_sum(vals) / static_cast<double>(nsamples);
    std::vector<RMat> sq(nsamples);
    for (int s = 0; s < nsamples; ++s) {
      Mat dv = vals[s] - mean;
      sq[s] = dv.real().array().square().matrix() + dv.imag().array().square().matrix();
    }
    RMat var = pairwise_sum(sq) / (nsamples - 1);
    grid.values.push_back(mean);
    grid.stderr_.push_back((var / nsamples).array().sqrt().matrix());
  }
  return grid;
}

WignerGrid wigner_deterministic(const InteractionMatrix& V, const CovarianceProfile& profile,
                                double eps, double tau, const RVec& r,
                                const std::vector<double>& thetas,
                                const WignerOptions& opt) {
  if (V.d != 1) throw UnsupportedError("wigner_deterministic: d = 1 windows only");
  Box box = wigner_box(V, profile, eps, tau, r, opt);
  double t = tau / eps;
  // a-field symbol N(theta) = (1/sqrt2) [Omega^{1/2}, i Omega^{-1/2}] Ghat_t
  PropagatorTable tab = propagator_table(V, box, t);
  const int n = V.n;
  std::vector<Mat> nker(box.size());
  {
    const double inv_sqrt2 = 0.7071067811865476;
    std::vector<Mat> sym(box.size());
    for (std::int64_t i = 0; i < box.size(); ++i) {
      Mat vhat = fourier_symbol(V, box.theta(i));
      Mat row(n, 2 * n);
      row.leftCols(n) = omega_power(vhat, 0.5);
      row.rightCols(n) = cplx(0.0, 1.0) * omega_power(vhat, -0.5);
      sym[i] = inv_sqrt2 * row * tab.ghat[i];
    }
    std::vector<cplx> buf(box.size());
    for (auto& m : nker) m = Mat::Zero(n, 2 * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < 2 * n; ++b) {
        for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = sym[i](a, b);
        fft_inverse(box, buf);
        for (std::int64_t i = 0; i < box.size(); ++i) nker[i](a, b) = buf[i];
      }
  }

  std::vector<double> w(box.size());
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> z = box.signed_coord(i);
    RVec rr(profile.d);
    for (int c = 0; c < profile.d; ++c) rr[c] = eps * z[c];
    w[i] = std::sqrt(profile.T(rr));
  }
  BilinearPropagator bp(box, n, nker, nker, std::move(w), q0hat_table(profile, box), true);

  std::vector<int> ys = window_offsets(opt);
  std::vector<Mat> corr(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    auto [ip, im] = pair_sites(box, r, eps, ys[j], opt.even_y);
    corr[j] = bp.eval(ip, im);
  }
  WignerGrid grid = theta_sum(thetas, ys, corr, opt, n);
  grid.variant = WignerGrid::Variant::Deterministic;
  grid.eps = eps;
  return grid;
}

Mat wigner_initial(const InteractionMatrix& V, const CovarianceProfile& profile,
                   const RVec& r, const RVec& theta) {
  Mat vhat = fourier_symbol(V, theta);
  Mat half = omega_power(vhat, 0.5);
  Mat ihalf = omega_power(vhat, -0.5);
  double tv = profile.T(r);
  Mat r00 = tv * profile.q00_hat(theta);
  Mat r11 = tv * profile.q11_hat(theta);
  return 0.5 * (half * r00 * half + ihalf * r11 * ihalf);
}

WignerLimit wigner_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                         double tau, const RVec& r, const RVec& theta, bool halfspace) {
  SpectralPoint sp = spectral_data(V, theta);
  int n = V.n;
  WignerLimit out;
  out.value = Mat::Zero(n, n);
  for (const Band& band : sp.bands) {
    if (!halfspace) {
      RVec shifted = r - tau * band.grad_omega;
      out.value += band.projector * wigner_initial(V, profile, shifted, theta) * band.projector;
      continue;
    }
    if (r[0] < 0.0) throw InvalidParameterError("wigner_limit: half-space needs r1 >= 0");
    double front = tau * band.grad_omega[0];
    if (r[0] == front) out.coincidence = true;
    if (r[0] > front || (r[0] == front && front <= 0.0)) {
      RVec shifted = r - tau * band.grad_omega;
      out.value += band.projector * wigner_initial(V, profile, shifted, theta) * band.projector;
    } else {
      // reflected characteristic: W(0, -r1 + tau d1(omega), rbar - tau
      // grad_bar(omega); theta~)
      RVec shifted = r - tau * band.grad_omega;
      shifted[0] = -r[0] + front;
      RVec theta_ref = theta;
      theta_ref[0] = -theta_ref[0];
      out.value +=
          band.projector * wigner_initial(V, profile, shifted, theta_ref) * band.projector;
    }
  }
  return out;
}

WignerField wigner_limit_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                              int band, double theta, double tau0, double h_tau, int nt,
                              double r0, double h_r, int nr, bool halfspace) {
  if (V.d != 1) throw UnsupportedError("wigner_limit_grid: d = 1 grids only");
  if (nt < 3 || nr < 3) throw GridError("wigner_limit_grid: need at least 3 points per axis");
  RVec tv(1);
  tv[0] = theta;
  SpectralPoint sp = spectral_data(V, tv);
  WignerField out;
  out.band = band;
  out.theta = theta;
  out.grad_omega = sp.bands[band].grad_omega[0];
  out.tau0 = tau0;
  out.h_tau = h_tau;
  out.r0 = r0;
  out.h_r = h_r;
  out.nt = nt;
  out.nr = nr;
  out.halfspace = halfspace;
  out.w.assign(nt, std::vector<Mat>(nr));
  Mat p = sp.bands[band].projector;
  for (int it = 0; it < nt; ++it)
    for (int ir = 0; ir < nr; ++ir) {
      RVec r(1);
      r[0] = r0 + ir * h_r;
      WignerLimit wl = wigner_limit(V, profile, tau0 + it * h_tau, r, tv, halfspace);
      out.w[it][ir] = p * wl.value * p;
    }
  return out;
}

TransportReport transport_residual(const InteractionMatrix& V, const CovarianceProfile& profile,
                                   const WignerField& field) {
  if (field.nt < 3 || field.nr < 3) throw GridError("transport_residual: grid too small");
  TransportReport rep;
  for (int it = 1; it + 1 < field.nt; ++it)
    for (int ir = 1; ir + 1 < field.nr; ++ir) {
      Mat dt = (field.w[it + 1][ir] - field.w[it - 1][ir]) / (2.0 * field.h_tau);
      Mat dr = (field.w[it][ir + 1] - field.w[it][ir - 1]) / (2.0 * field.h_r);
      rep.interior_residual = std::max(rep.interior_residual,
                                       sup_norm(Mat(dt + field.grad_omega * dr)));
    }
  if (!field.halfspace || field.r0 != 0.0) return rep;

  // boundary column against b_sigma and its symmetric-profile form
  RVec tv(1);
  tv[0] = field.theta;
  RVec tref(1);
  tref[0] = -field.theta;
  SpectralPoint sp = spectral_data(V, tv);
  const Band& band = sp.bands[field.band];
  Mat p = band.projector;
  double d1 = band.grad_omega[0];
  for (int it = 0; it < field.nt; ++it) {
    double tau = field.tau0 + it * field.h_tau;
    RVec rb(1);
    Mat b_sigma;
    if (d1 < 0.0) {
      rb[0] = -tau * d1;
      b_sigma = p * wigner_initial(V, profile, rb, tv) * p;
    } else {
      rb[0] = tau * d1;
      b_sigma = p * wigner_initial(V, profile, rb, tref) * p;
    }
    rep.boundary_mismatch =
        std::max(rep.boundary_mismatch, sup_norm(Mat(field.w[it][0] - b_sigma)));
    rb[0] = tau * std::abs(d1);
    Mat b_sym = p * wigner_initial(V, profile, rb, tv) * p;
    rep.boundary_mismatch_symmetric =
        std::max(rep.boundary_mismatch_symmetric, sup_norm(Mat(field.w[it][0] - b_sym)));
  }
  return rep;
}

}  // namespace hydrolat
