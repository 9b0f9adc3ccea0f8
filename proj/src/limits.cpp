#include "hydrolat/limits.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "hydrolat/oscquad.hpp"

namespace hydrolat {

Mat c_band(double omega, int n) {
  if (omega <= 0.0) throw CriticalSetError("c_band: omega must be positive");
  Mat c = Mat::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n) = (1.0 / omega) * Mat::Identity(n, n);
  c.bottomLeftCorner(n, n) = -omega * Mat::Identity(n, n);
  return c;
}

Mat sandwich_factor(double omega, int n, int b) {
  return Mat::Identity(2 * n, 2 * n) + cplx(0.0, static_cast<double>(b)) * c_band(omega, n);
}

namespace {

Mat block_projector(const Mat& proj) {
  int n = static_cast<int>(proj.rows());
  Mat p = Mat::Zero(2 * n, 2 * n);
  p.topLeftCorner(n, n) = proj;
  p.bottomRightCorner(n, n) = proj;
  return p;
}

Mat q0_block(const CovarianceProfile& profile, const RVec& theta) {
  int n = profile.n;
  Mat q = Mat::Zero(2 * n, 2 * n);
  q.topLeftCorner(n, n) = profile.q00_hat(theta);
  q.bottomRightCorner(n, n) = profile.q11_hat(theta);
  return q;
}

// qhat = 1/4 sum_sigma Pi [ sum_b U_b A_sigma^b U_b^+ ] Pi
BlockCov assemble_sandwich(const SpectralPoint& sp, int n,
                           const std::function<Mat(const Band&, int)>& a_of) {
  Mat q = Mat::Zero(2 * n, 2 * n);
  for (const Band& band : sp.bands) {
    Mat p = block_projector(band.projector);
    Mat inner = Mat::Zero(2 * n, 2 * n);
    for (int b : {+1, -1}) {
      Mat u = sandwich_factor(band.omega, n, b);
      inner += u * a_of(band, b) * u.adjoint();
    }
    q += 0.25 * p * inner * p;
  }
  return BlockCov(n, q);
}

}  // namespace

BlockCov euler_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                     double tau, const RVec& r, const RVec& theta, EulerBands* bands) {
  SpectralPoint sp = spectral_data(V, theta);
  int n = V.n;
  Mat q0 = q0_block(profile, theta);
  auto a_of = [&](const Band& band, int b) -> Mat {
    RVec shifted = r + b * tau * band.grad_omega;
    return profile.T(shifted) * q0;
  };
  BlockCov q = assemble_sandwich(sp, n, a_of);

  if (bands) {
    bands->f.clear();
    bands->m_plus.clear();
    bands->m_minus.clear();
    for (const Band& band : sp.bands) {
      Mat p = block_projector(band.projector);
      bands->f.push_back(p * q.m * p);
      Mat rp = 0.5 * (a_of(band, +1) + a_of(band, -1));
      Mat rm = 0.5 * (a_of(band, +1) - a_of(band, -1));
      Mat c = c_band(band.omega, n);
      bands->m_plus.push_back(0.5 * (rp + c * rp * c.adjoint()));
      bands->m_minus.push_back(0.5 * (c * rm - rm * c.adjoint()));
    }
  }
  return q;
}

cplx ns_kernel(double tau, const RMat& hess, const RVec& x, int sign_branch) {
  if (tau == 0.0) throw InvalidParameterError("ns_kernel: tau must be nonzero");
  if (tau < 0.0) return ns_kernel(-tau, hess, x, -sign_branch);
  int d = static_cast<int>(hess.rows());
  Eigen::SelfAdjointEigenSolver<RMat> es(hess);
  double det = 1.0;
  int signature = 0;
  for (int i = 0; i < d; ++i) {
    double lam = es.eigenvalues()[i];
    det *= lam;
    signature += lam > 0.0 ? 1 : -1;
  }
  if (std::abs(det) < 1e-12)
    throw CriticalSetError("ns_kernel: degenerate Hessian (E4 fails at this theta)");
  RVec xp = es.eigenvectors().transpose() * x;
  double quad = 0.0;
  for (int i = 0; i < d; ++i) quad += xp[i] * xp[i] / es.eigenvalues()[i];
  double b = static_cast<double>(sign_branch);
  cplx phase = std::exp(cplx(0.0, -b * pi * signature / 4.0)) *
               std::exp(cplx(0.0, b * quad / (2.0 * tau)));
  return phase / (std::pow(2.0 * pi * tau, 0.5 * d) * std::sqrt(std::abs(det)));
}

namespace {

// A^b for the named T families in the Fourier-in-r representation:
// the point mass of T-tilde passes through the quadratic phase unchanged
// and the Gaussian part closes to det(B)^{-1/2} exp(-u.B^{-1}u/4) with
// B = (w/4) I + i b (tau/2) H.
cplx ns_amplitude(const TProfile& T, int d, const RVec& u, double half_tau, int b,
                  const RMat& hess) {
  cplx amp(T.delta_weight(), 0.0);
  if (T.family == TProfile::Family::Constant) return amp;
  Eigen::SelfAdjointEigenSolver<RMat> es(hess);
  RVec up = es.eigenvectors().transpose() * u;
  cplx det_root(1.0, 0.0);
  cplx quad(0.0, 0.0);
  for (int i = 0; i < d; ++i) {
    cplx beta(T.w / 4.0, b * half_tau * es.eigenvalues()[i]);
    det_root *= std::sqrt(beta);
    quad += up[i] * up[i] / (4.0 * beta);
  }
  amp += T.a * std::pow(T.w / 4.0, 0.5 * d) / det_root * std::exp(-quad);
  return amp;
}

// order-k amplitude by damped oscillatory quadrature (d = 1):
// delta part + (1/2pi) int Tsmooth(s) e^{-i u s} e^{-i b c2 s^2 - i b c3 s^3} e^{-eta s^2} ds
cplx higher_amplitude_damped(const TProfile& T, double u, int b, double c2, double c3,
                             double eta) {
  double w = T.w;
  double s_max = std::sqrt(4.0 * 42.0 / w);
  auto integrand = [&](double s) -> cplx {
    RVec sv(1);
    sv[0] = s;
    double phase = -u * s - b * (c2 * s * s + c3 * s * s * s);
    return T.smooth_transform(sv, 1) * std::exp(-eta * s * s) * std::exp(cplx(0.0, phase));
  };
  auto freq = [&](double s) {
    double as = std::abs(s);
    return std::abs(u) + 2.0 * std::abs(c2) * as + 3.0 * std::abs(c3) * as * as +
           2.0 * eta * as + 0.5 * w * as;
  };
  return oscillatory_integral(integrand, freq, -s_max, s_max) / (2.0 * pi) +
         cplx(T.delta_weight(), 0.0);
}

cplx higher_amplitude(const TProfile& T, double u, int b, double c2, double c3, int k) {
  if (T.family == TProfile::Family::Constant) return cplx(T.delta_weight(), 0.0);
  if (k == 2) return higher_amplitude_damped(T, u, b, c2, 0.0, 0.0);
  // cubic kernels carry no closed form; Gaussian damping with Richardson
  // extrapolation eta -> 0
  std::vector<double> etas{1e-2, 5e-3, 2.5e-3};
  std::vector<cplx> vals;
  for (double eta : etas) vals.push_back(higher_amplitude_damped(T, u, b, c2, c3, eta));
  return extrapolate_to_zero(etas, vals);
}

bool supported_family(const TProfile& T) {
  return T.family == TProfile::Family::Constant || T.family == TProfile::Family::GaussianBump;
}

BlockCov ns_hat_unchecked(const InteractionMatrix& V, const CovarianceProfile& profile,
                          double tau, const RVec& r, const RVec& theta, double eps) {
  SpectralPoint sp = spectral_data(V, theta);
  Mat q0 = q0_block(profile, theta);
  auto a_of = [&](const Band& band, int b) -> Mat {
    RVec u = r + (b * tau / eps) * band.grad_omega;
    return ns_amplitude(profile.T, V.d, u, 0.5 * tau, b, band.hess_omega) * q0;
  };
  return assemble_sandwich(sp, V.n, a_of);
}

}  // namespace

BlockCov ns_correction(const InteractionMatrix& V, const CovarianceProfile& profile,
                       double tau, const RVec& r, const RVec& theta, double eps) {
  if (!supported_family(profile.T)) throw UnsupportedError("ns_correction: unsupported T family");
  SpectralPoint sp = spectral_data(V, theta);
  for (const Band& band : sp.bands)
    if (std::abs(band.hess_omega.determinant()) < 1e-12)
      throw CriticalSetError("ns_correction: degenerate Hessian at this theta");
  return ns_hat_unchecked(V, profile, tau, r, theta, eps);
}

BlockCov higher_correction(const InteractionMatrix& V, const CovarianceProfile& profile,
                           double tau, const RVec& r, const RVec& theta, double eps, int k) {
  if (k < 2 || k > 3) throw InvalidParameterError("higher_correction: k must be 2 or 3");
  if (!supported_family(profile.T))
    throw UnsupportedError("higher_correction: unsupported T family");
  if (V.d != 1) throw UnsupportedError("higher_correction: quadrature path is d = 1 only");
  SpectralPoint sp = spectral_data(V, theta);
  Mat q0 = q0_block(profile, theta);
  double scale = std::pow(eps, k - 2);  // phase prefactor tau / eps^{k-2}
  auto a_of = [&](const Band& band, int b) -> Mat {
    double u = r[0] + b * band.grad_omega[0] * tau / std::pow(eps, k - 1);
    double c2 = (tau / scale) * band.hess_omega(0, 0) / 2.0;
    double c3 = 0.0;
    if (k == 3) {
      RVec th = sp.theta;
      int idx = static_cast<int>(&band - sp.bands.data());
      c3 = (tau / scale) * omega_third_derivative(V, th, idx) / 6.0;
    }
    return higher_amplitude(profile.T, u, b, c2, c3, k) * q0;
  };
  return assemble_sandwich(sp, V.n, a_of);
}

namespace {

double chi_indicator(double r1, double b_d1omega_tau, bool* hit) {
  double arg = r1 + b_d1omega_tau;
  if (arg == 0.0 && hit) *hit = true;
  return 0.5 * (1.0 + sign0(arg));
}

}  // namespace

HalfspaceHat halfspace_euler_hat(const InteractionMatrix& V, const CovarianceProfile& profile,
                                 double tau, const RVec& r, const RVec& theta) {
  if (!V.axis_symmetric) throw ModelViolationError("halfspace_euler: V(z~) = V(z) required");
  SpectralPoint sp = spectral_data(V, theta);
  Mat q0 = q0_block(profile, theta);
  HalfspaceHat out;
  auto a_of = [&](const Band& band, int b) -> Mat {
    RVec shifted = r + b * tau * band.grad_omega;
    double chi = chi_indicator(r[0], b * band.grad_omega[0] * tau, &out.chi_coincidence);
    return profile.T(shifted) * chi * q0;
  };
  out.ghat = assemble_sandwich(sp, V.n, a_of);
  return out;
}

HalfspaceHat halfspace_ns_hat(const InteractionMatrix& V, const CovarianceProfile& profile,
                              double tau, const RVec& r, const RVec& theta, double eps) {
  if (!V.axis_symmetric) throw ModelViolationError("halfspace_ns: V(z~) = V(z) required");
  if (!supported_family(profile.T)) throw UnsupportedError("halfspace_ns: unsupported T family");
  SpectralPoint sp = spectral_data(V, theta);
  Mat q0 = q0_block(profile, theta);
  HalfspaceHat out;
  auto a_of = [&](const Band& band, int b) -> Mat {
    RVec u = r + (b * tau / eps) * band.grad_omega;
    cplx amp = ns_amplitude(profile.T, V.d, u, 0.5 * tau, b, band.hess_omega);
    double chi =
        chi_indicator(r[0], b * band.grad_omega[0] * tau / eps, &out.chi_coincidence);
    return amp * chi * q0;
  };
  out.ghat = assemble_sandwich(sp, V.n, a_of);
  return out;
}

// ---- position space ----------------------------------------------------

namespace {

using HatFn = std::function<Mat(const RVec&)>;

// breakpoints of the chi indicators on [-pi, pi) for d = 1
std::vector<double> chi_breakpoints(const InteractionMatrix& V, double tau, double r1,
                                    double scale) {
  std::vector<double> pts{-pi, pi};
  const int m0 = 4096;
  auto val = [&](double th, int b, int band) {
    RVec tv(1);
    tv[0] = th;
    SpectralPoint sp = spectral_data(V, tv);
    return r1 + b * sp.bands[band].grad_omega[0] * tau * scale;
  };
  int nbands = 1;
  {
    RVec tv(1);
    tv[0] = 0.1234;
    nbands = static_cast<int>(spectral_data(V, tv).bands.size());
  }
  for (int band = 0; band < nbands; ++band)
    for (int b : {+1, -1}) {
      double prev = val(-pi, b, band);
      for (int i = 1; i <= m0; ++i) {
        double th = -pi + 2.0 * pi * i / m0;
        double cur = val(th, b, band);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
          double lo = th - 2.0 * pi / m0, hi = th;
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((val(lo, b, band) < 0.0) == (val(mid, b, band) < 0.0))
              lo = mid;
            else
              hi = mid;
          }
          pts.push_back(0.5 * (lo + hi));
        }
        prev = cur;
      }
    }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// (2pi)^{-1} int e^{-i w theta} hat(theta) dtheta over smooth pieces,
// Gauss-Legendre panels per piece (d = 1)
std::map<int, Mat> inverse_transform_1d(const HatFn& hat, const std::vector<double>& breaks,
                                        const std::vector<int>& ws, int rows) {
  std::map<int, Mat> out;
  for (int w : ws) out[w] = Mat::Zero(rows, rows);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double lo = breaks[p], hi = breaks[p + 1];
    if (hi - lo < 1e-13) continue;
    // shrink by a hair so nodes avoid the discontinuity itself
    lo += 1e-12;
    hi -= 1e-12;
    int wmax = 1;
    for (int w : ws) wmax = std::max(wmax, std::abs(w));
    int panels = std::max(8, static_cast<int>((hi - lo) * (wmax + 8) / 4.0));
    for (int q = 0; q < panels; ++q) {
      double a = lo + (hi - lo) * q / panels;
      double b = lo + (hi - lo) * (q + 1) / panels;
      double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
      for (int i = 0; i < 16; ++i) {
        double th = mid + rad * gl_node(i);
        RVec tv(1);
        tv[0] = th;
        Mat h = hat(tv);
        for (int w : ws)
          out[w] += (gl_weight(i) * rad / (2.0 * pi)) * std::exp(cplx(0.0, -w * th)) * h;
      }
    }
  }
  return out;
}

// d >= 2 fallback: plain tensor Riemann sum
std::map<std::vector<int>, Mat> inverse_transform_grid(const HatFn& hat, int d,
                                                       const std::vector<std::vector<int>>& ws,
                                                       int rows, int mgrid) {
  std::map<std::vector<int>, Mat> out;
  for (const auto& w : ws) out[w] = Mat::Zero(rows, rows);
  ThetaGrid tg{d, mgrid};
  for (std::int64_t i = 0; i < tg.size(); ++i) {
    RVec th = tg.point(i);
    Mat h = hat(th);
    for (const auto& w : ws) {
      double phase = 0.0;
      for (int c = 0; c < d; ++c) phase -= w[c] * th[c];
      out[w] += std::exp(cplx(0.0, phase)) * h;
    }
  }
  for (auto& [w, m] : out) m /= static_cast<double>(tg.size());
  return out;
}

std::vector<int> tilde(const std::vector<int>& z) {
  std::vector<int> t(z);
  t[0] = -t[0];
  return t;
}

std::vector<int> diff(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] - b[i];
  return w;
}

// shared assembly of the Theorem 5.2 / 5.6 image combinations
PairCov halfspace_position(const InteractionMatrix& V, int n, double tau, const RVec& r,
                           const std::vector<OffsetPair>& offsets, const HatFn& hat_at_r,
                           const HatFn& hat_at_rt, double chi_scale, int mgrid) {
  if (r[0] < 0.0) throw InvalidParameterError("halfspace limit: r1 must be >= 0");
  const bool boundary = r[0] == 0.0;
  const int d = static_cast<int>(r.size());

  std::vector<std::vector<int>> ws;
  auto require = [&](const std::vector<int>& w) {
    if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
  };
  for (const auto& [z, zp] : offsets) {
    std::vector<int> w = diff(z, zp);
    if (boundary) {
      require(w);
      require(diff(z, tilde(zp)));
      require(diff(tilde(z), zp));
      require(tilde(w));
    } else {
      require(w);
      require(tilde(w));
    }
  }

  std::map<std::vector<int>, Mat> g_r, g_rt;
  if (d == 1) {
    std::vector<int> ws1;
    for (const auto& w : ws) ws1.push_back(w[0]);
    std::vector<double> br = chi_breakpoints(V, tau, r[0], chi_scale);
    std::map<int, Mat> a = inverse_transform_1d(hat_at_r, br, ws1, 2 * n);
    for (const auto& [w, m] : a) g_r[{w}] = m;
    if (!boundary) {
      std::vector<double> brt = chi_breakpoints(V, tau, -r[0], chi_scale);
      std::map<int, Mat> b = inverse_transform_1d(hat_at_rt, brt, ws1, 2 * n);
      for (const auto& [w, m] : b) g_rt[{w}] = m;
    }
  } else {
    g_r = inverse_transform_grid(hat_at_r, d, ws, 2 * n, mgrid);
    if (!boundary) g_rt = inverse_transform_grid(hat_at_rt, d, ws, 2 * n, mgrid);
  }

  PairCov out;
  for (const auto& pr : offsets) {
    const auto& [z, zp] = pr;
    std::vector<int> w = diff(z, zp);
    Mat val;
    if (boundary) {
      val = g_r[w] - g_r[diff(z, tilde(zp))] - g_r[diff(tilde(z), zp)] + g_r[tilde(w)];
    } else {
      val = g_r[w] + g_rt[tilde(w)];
    }
    out.emplace(pr, BlockCov(n, std::move(val)));
  }
  return out;
}

}  // namespace

PairCov halfspace_euler(const InteractionMatrix& V, const CovarianceProfile& profile,
                        double tau, const RVec& r, const std::vector<OffsetPair>& offsets) {
  RVec rt = r;
  rt[0] = -rt[0];
  HatFn at_r = [&](const RVec& th) { return halfspace_euler_hat(V, profile, tau, r, th).ghat.m; };
  HatFn at_rt = [&](const RVec& th) {
    return halfspace_euler_hat(V, profile, tau, rt, th).ghat.m;
  };
  return halfspace_position(V, V.n, tau, r, offsets, at_r, at_rt, 1.0, 128);
}

PairCov halfspace_ns(const InteractionMatrix& V, const CovarianceProfile& profile,
                     double tau, const RVec& r, double eps,
                     const std::vector<OffsetPair>& offsets) {
  RVec rt = r;
  rt[0] = -rt[0];
  HatFn at_r = [&](const RVec& th) {
    return halfspace_ns_hat(V, profile, tau, r, th, eps).ghat.m;
  };
  HatFn at_rt = [&](const RVec& th) {
    return halfspace_ns_hat(V, profile, tau, rt, th, eps).ghat.m;
  };
  return halfspace_position(V, V.n, tau, r, offsets, at_r, at_rt, 1.0 / eps, 128);
}

PairCov limit_position_pairs(LimitKind kind, const InteractionMatrix& V,
                             const CovarianceProfile& profile, double tau, const RVec& r,
                             double eps, int k, const std::vector<OffsetPair>& offsets,
                             int mgrid) {
  HatFn hat;
  switch (kind) {
    case LimitKind::Euler:
      hat = [&](const RVec& th) { return euler_limit(V, profile, tau, r, th).m; };
      break;
    case LimitKind::NavierStokes:
      hat = [&](const RVec& th) { return ns_hat_unchecked(V, profile, tau, r, th, eps).m; };
      break;
    case LimitKind::Higher:
      hat = [&](const RVec& th) { return higher_correction(V, profile, tau, r, th, eps, k).m; };
      break;
    case LimitKind::KernelFree:
      // A^b replaced by Rhat_0(r + b grad(omega) tau/eps, theta): the Euler
      // sandwich at the stretched time tau/eps
      hat = [&](const RVec& th) { return euler_limit(V, profile, tau / eps, r, th).m; };
      break;
  }

  std::vector<std::vector<int>> ws;
  for (const auto& [z, zp] : offsets) {
    std::vector<int> w = diff(z, zp);
    if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
  }
  std::map<std::vector<int>, Mat> table = inverse_transform_grid(hat, V.d, ws, 2 * V.n, mgrid);
  PairCov out;
  for (const auto& pr : offsets)
    out.emplace(pr, BlockCov(V.n, table[diff(pr.first, pr.second)]));
  return out;
}

// ---- transport-equation residuals ---------------------------------------

LimitField euler_field_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                            int band, double theta, double tau0, double h_tau, int nt,
                            double r0, double h_r, int nr) {
  if (V.d != 1) throw UnsupportedError("euler_field_grid: d = 1 grids only");
  if (nt < 3 || nr < 3) throw GridError("euler_field_grid: need at least 3 points per axis");
  RVec tv(1);
  tv[0] = theta;
  SpectralPoint sp = spectral_data(V, tv);
  LimitField out;
  out.band = band;
  out.n = V.n;
  out.omega = sp.bands[band].omega;
  out.grad_omega = sp.bands[band].grad_omega[0];
  out.hess_omega = sp.bands[band].hess_omega(0, 0);
  out.tau0 = tau0;
  out.h_tau = h_tau;
  out.r0 = r0;
  out.h_r = h_r;
  out.nt = nt;
  out.nr = nr;
  Mat p = block_projector(sp.bands[band].projector);
  out.f.assign(nt, std::vector<Mat>(nr));
  for (int it = 0; it < nt; ++it)
    for (int ir = 0; ir < nr; ++ir) {
      RVec r(1);
      r[0] = r0 + ir * h_r;
      Mat q = euler_limit(V, profile, tau0 + it * h_tau, r, tv).m;
      out.f[it][ir] = p * q * p;
    }
  return out;
}

LimitField ns_field_grid(const InteractionMatrix& V, const CovarianceProfile& profile,
                         int band, double theta, double eps, double t0, double h_t, int nt,
                         double r0, double h_r, int nr) {
  if (V.d != 1) throw UnsupportedError("ns_field_grid: d = 1 grids only");
  if (nt < 3 || nr < 3) throw GridError("ns_field_grid: need at least 3 points per axis");
  RVec tv(1);
  tv[0] = theta;
  SpectralPoint sp = spectral_data(V, tv);
  LimitField out;
  out.band = band;
  out.n = V.n;
  out.omega = sp.bands[band].omega;
  out.grad_omega = sp.bands[band].grad_omega[0];
  out.hess_omega = sp.bands[band].hess_omega(0, 0);
  out.tau0 = t0;
  out.h_tau = h_t;
  out.r0 = r0;
  out.h_r = h_r;
  out.nt = nt;
  out.nr = nr;
  Mat p = block_projector(sp.bands[band].projector);
  out.f.assign(nt, std::vector<Mat>(nr));
  for (int it = 0; it < nt; ++it)
    for (int ir = 0; ir < nr; ++ir) {
      RVec r(1);
      r[0] = r0 + ir * h_r;
      double t = t0 + it * h_t;
      Mat q = ns_hat_unchecked(V, profile, eps * t, r, tv, eps).m;
      out.f[it][ir] = p * q * p;
    }
  return out;
}

namespace {

double pde_residual(const LimitField& field, double eps, bool with_hessian_term) {
  if (field.nt < 3 || field.nr < 3) throw GridError("pde_residual: grid too small");
  int n = field.n;
  Mat c = c_band(field.omega, n);
  double worst = 0.0;
  for (int it = 1; it + 1 < field.nt; ++it)
    for (int ir = 1; ir + 1 < field.nr; ++ir) {
      Mat dt = (field.f[it + 1][ir] - field.f[it - 1][ir]) / (2.0 * field.h_tau);
      Mat dr = (field.f[it][ir + 1] - field.f[it][ir - 1]) / (2.0 * field.h_r);
      Mat rhs_arg = field.grad_omega * dr;
      if (with_hessian_term) {
        Mat drr = (field.f[it][ir + 1] - 2.0 * field.f[it][ir] + field.f[it][ir - 1]) /
                  (field.h_r * field.h_r);
        rhs_arg += cplx(0.0, 0.5 * eps) * field.hess_omega * drr;
      }
      Mat res = dt - cplx(0.0, 1.0) * c * rhs_arg;
      worst = std::max(worst, sup_norm(res));
    }
  return worst;
}

}  // namespace

double euler_pde_residual(const LimitField& field) { return pde_residual(field, 0.0, false); }

double ns_pde_residual(const LimitField& field, double eps) {
  return pde_residual(field, eps, true);
}

double equilibrium_residual(const BlockCov& q, const SpectralPoint& sp) {
  int n = q.n;
  double res = equilibrium_core_residual(q, sp);
  for (int i = 0; i < 2; ++i) {
    Mat qi = q.block(i, i);
    res = std::max(res, sup_norm(Mat(qi - qi.adjoint())));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (qi + qi.adjoint()));
    res = std::max(res, std::max(0.0, -es.eigenvalues().minCoeff()));
  }
  (void)n;
  return res;
}

double equilibrium_core_residual(const BlockCov& q, const SpectralPoint& sp) {
  Mat omega2 = sp.vhat;  // Omega^2 = Vhat
  double res = sup_norm(Mat(q.block(1, 1) - omega2 * q.block(0, 0)));
  res = std::max(res, sup_norm(Mat(q.block(0, 1) + q.block(1, 0))));
  return res;
}

}  // namespace hydrolat
