#include "hydrolat/profile.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace hydrolat {

double TProfile::operator()(const RVec& r) const {
  if (family == Family::Constant) return c;
  return 1.0 + a * std::exp(-r.squaredNorm() / w);
}

double TProfile::smooth_transform(const RVec& s, int d) const {
  if (family == Family::Constant) return 0.0;
  return a * std::pow(pi * w, 0.5 * d) * std::exp(-w * s.squaredNorm() / 4.0);
}

TProfile TProfile::constant(double c) {
  if (c < 0.0) throw InvalidParameterError("TProfile: constant must be non-negative");
  TProfile t;
  t.family = Family::Constant;
  t.c = c;
  return t;
}

TProfile TProfile::gaussian_bump(double a, double w) {
  if (1.0 + a < 0.0 || w <= 0.0)
    throw InvalidParameterError("TProfile: gaussian bump must stay non-negative with positive width");
  TProfile t;
  t.family = Family::GaussianBump;
  t.a = a;
  t.w = w;
  return t;
}

Mat CovarianceProfile::r0_hat(const RVec& r, const RVec& theta) const {
  Mat out = Mat::Zero(2 * n, 2 * n);
  double tv = T(r);
  out.topLeftCorner(n, n) = tv * q00_hat(theta);
  out.bottomRightCorner(n, n) = tv * q11_hat(theta);
  return out;
}

CovarianceProfile::Q0Field CovarianceProfile::realize_q0(const Box& box) const {
  Q0Field f;
  f.box = box;
  f.q00.assign(box.size(), RMat::Zero(n, n));
  f.q11.assign(box.size(), RMat::Zero(n, n));
  std::vector<cplx> buf(box.size());
  for (int blk = 0; blk < 2; ++blk) {
    const auto& qh = blk == 0 ? q00_hat : q11_hat;
    auto& dst = blk == 0 ? f.q00 : f.q11;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (std::int64_t i = 0; i < box.size(); ++i) buf[i] = qh(box.theta(i))(a, b);
        fft_inverse(box, buf);
        for (std::int64_t i = 0; i < box.size(); ++i) dst[i](a, b) = buf[i].real();
      }
  }
  int quarter = *std::min_element(box.extents.begin(), box.extents.end()) / 4;
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> z = box.signed_coord(i);
    int zmax = 0;
    for (int c : z) zmax = std::max(zmax, std::abs(c));
    if (zmax > quarter)
      f.periodization_tail += f.q00[i].cwiseAbs().maxCoeff() + f.q11[i].cwiseAbs().maxCoeff();
  }
  return f;
}

const CovarianceProfile::Q0Field& CovarianceProfile::q0_cached() const {
  if (!q0_memo_) q0_memo_ = std::make_shared<Q0Field>(realize_q0(default_q0_box()));
  return *q0_memo_;
}

Box CovarianceProfile::default_q0_box() const {
  int ext = d == 1 ? 1024 : (d == 2 ? 128 : 32);
  return Box::cubic(d, ext);
}

CovarianceProfile gibbs_spectral(const InteractionMatrix& V, double T0) {
  V.validate();
  if (!(T0 > 0.0)) throw InvalidParameterError("gibbs_spectral: T0 must be positive");
  // Gibbs needs det Vhat != 0 everywhere (C_0 empty); probe a grid
  ThetaGrid tg{V.d, 64};
  for (std::int64_t i = 0; i < tg.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Mat> es(fourier_symbol(V, tg.point(i)));
    if (es.eigenvalues().minCoeff() < 1e-9)
      throw InvalidParameterError("gibbs_spectral: Vhat singular on the grid, Gibbs covariance undefined");
  }
  CovarianceProfile p;
  p.d = V.d;
  p.n = V.n;
  p.T = TProfile::constant(1.0);
  p.provenance = CovarianceProfile::Provenance::Gibbs;
  p.gibbs_T0 = T0;
  InteractionMatrix Vc = V;
  p.q00_hat = [Vc, T0](const RVec& th) -> Mat {
    return T0 * fourier_symbol(Vc, th).inverse();
  };
  int n = V.n;
  p.q11_hat = [n, T0](const RVec&) -> Mat { return T0 * Mat::Identity(n, n); };
  return p;
}

CovarianceProfile product_profile(const TProfile& T, const CovarianceProfile& spectral) {
  CovarianceProfile p = spectral;
  p.T = T;
  return p;
}

Mat covariance_Q(const CovarianceProfile& profile, double eps,
                 const std::vector<int>& z, const std::vector<int>& zp) {
  if (!(eps > 0.0)) throw InvalidParameterError("covariance_Q: eps must be positive");
  const auto& f = profile.q0_cached();
  std::vector<int> w(profile.d);
  RVec rz(profile.d), rzp(profile.d);
  for (int i = 0; i < profile.d; ++i) {
    w[i] = z[i] - zp[i];
    rz[i] = eps * z[i];
    rzp[i] = eps * zp[i];
  }
  double amp = std::sqrt(profile.T(rz) * profile.T(rzp));
  std::int64_t iw = f.box.index(w);
  int n = profile.n;
  Mat out = Mat::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = amp * f.q00[iw].cast<cplx>();
  out.bottomRightCorner(n, n) = amp * f.q11[iw].cast<cplx>();
  return out;
}

namespace {

// Hermitian PSD square root; small negative eigenvalues are clamped, larger
// ones reject the density.
Mat psd_sqrt(const Mat& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < -1e-10) throw SamplingError(std::string(what) + ": spectral density not PSD");
    out += std::sqrt(std::max(0.0, lam)) * es.eigenvectors().col(i) *
           es.eigenvectors().col(i).adjoint();
  }
  return out;
}

}  // namespace

FieldState sample_field(const CovarianceProfile& profile, double eps, const Box& box,
                        std::uint64_t seed) {
  if (!(eps > 0.0)) throw InvalidParameterError("sample_field: eps must be positive");
  if (!box.power_of_two()) throw BoxError("sample_field: box extents must be powers of two");
  int n = profile.n;
  CounterRng rng{seed};

  FieldState out;
  out.box = box;
  out.v0.resize(n, box.size());
  out.v1.resize(n, box.size());

  std::vector<std::vector<cplx>> hat(n, std::vector<cplx>(box.size()));
  double root_size = std::sqrt(static_cast<double>(box.size()));

  for (int blk = 0; blk < 2; ++blk) {
    const auto& qh = blk == 0 ? profile.q00_hat : profile.q11_hat;
    for (auto& h : hat) std::fill(h.begin(), h.end(), cplx(0.0, 0.0));

    for (std::int64_t i = 0; i < box.size(); ++i) {
      // conjugate partner of the mode: -k mod L
      std::vector<int> k = box.unindex(i);
      std::vector<int> km(k);
      for (auto& c : km) c = -c;
      std::int64_t ic = box.index(km);
      if (ic < i) continue;  // filled when its partner was visited

      Mat amp = psd_sqrt(qh(box.theta(i)), "sample_field");
      Eigen::VectorXcd eta(n);
      std::uint64_t stream = static_cast<std::uint64_t>(blk);
      if (ic == i) {
        for (int c = 0; c < n; ++c)
          eta[c] = rng.normal(stream, static_cast<std::uint64_t>(i) * n + c);
      } else {
        const double inv_sqrt2 = 0.7071067811865476;
        for (int c = 0; c < n; ++c)
          eta[c] = rng.normal_pair(stream, static_cast<std::uint64_t>(i) * n + c) * inv_sqrt2;
      }
      Eigen::VectorXcd mode = root_size * (amp * eta);
      for (int c = 0; c < n; ++c) {
        hat[c][i] = mode[c];
        if (ic != i) hat[c][ic] = std::conj(mode[c]);
      }
    }

    for (int c = 0; c < n; ++c) {
      fft_inverse(box, hat[c]);
      for (std::int64_t i = 0; i < box.size(); ++i) {
        if (std::abs(hat[c][i].imag()) > 1e-12 * root_size)
          throw SamplingError("sample_field: synthesis imaginary residue too large");
        double v = hat[c][i].real();
        if (blk == 0)
          out.v0(c, i) = v;
        else
          out.v1(c, i) = v;
      }
    }
  }

  // product construction: v_i(z) = sqrt(T(eps z)) xi_i(z)
  for (std::int64_t i = 0; i < box.size(); ++i) {
    std::vector<int> z = box.signed_coord(i);
    RVec r(profile.d);
    for (int c = 0; c < profile.d; ++c) r[c] = eps * z[c];
    double s = std::sqrt(profile.T(r));
    out.v0.col(i) *= s;
    out.v1.col(i) *= s;
  }
  return out;
}

bool ProfileReport::all_pass() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::Fail || e.status == CheckStatus::SampledFail) return false;
  return true;
}

const ConditionEntry& ProfileReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw InvalidParameterError("ProfileReport: no entry " + name);
}

ProfileReport verify_profile(const CovarianceProfile& profile,
                             const std::vector<double>& eps_list) {
  ProfileReport rep;
  const int d = profile.d;
  Box qbox = profile.default_q0_box();
  CovarianceProfile::Q0Field f = profile.realize_q0(qbox);

  // shell maxima of |q_0| as a function of |z|_inf
  int half = *std::min_element(qbox.extents.begin(), qbox.extents.end()) / 2;
  std::vector<double> shell(half, 0.0);
  for (std::int64_t i = 0; i < qbox.size(); ++i) {
    std::vector<int> z = qbox.signed_coord(i);
    int zmax = 0;
    for (int c : z) zmax = std::max(zmax, std::abs(c));
    if (zmax < half) {
      double v = std::max(f.q00[i].cwiseAbs().maxCoeff(), f.q11[i].cwiseAbs().maxCoeff());
      shell[zmax] = std::max(shell[zmax], v);
    }
  }

  // I1: fit |q_0(z)| <= C (1+|z|)^{-gamma}; least squares on log-log over a
  // mid range, ignoring shells at roundoff level. A tail that never decays
  // below 1e-3 of the head fails outright.
  {
    ConditionEntry e{"I1", CheckStatus::SampledPass, 0.0, {}, ""};
    double head = std::max(shell[0], 1e-300);
    double tail = 0.0;
    for (int zr = half / 4; zr < half; ++zr)
      if (zr < static_cast<int>(shell.size())) tail = std::max(tail, shell[zr]);
    std::vector<double> lx, ly;
    for (int zr = 2; zr < half / 2; ++zr) {
      if (shell[zr] < 1e-14) break;
      lx.push_back(std::log(1.0 + zr));
      ly.push_back(std::log(shell[zr]));
    }
    if (tail / head > 1e-3) {
      e.status = CheckStatus::SampledFail;
      e.margin = 0.0;
      e.note = "covariance does not decay across the box";
    } else if (lx.size() < 4) {
      e.note = "decay below roundoff within a few shells (super-polynomial)";
      e.margin = 1e3;
    } else {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
      }
      double m = static_cast<double>(lx.size());
      double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      e.margin = -slope;  // fitted gamma
      if (e.margin <= d) {
        e.status = CheckStatus::SampledFail;
        e.note = "fitted decay exponent does not exceed d";
      } else {
        e.note = "fitted decay exponent";
      }
    }
    rep.entries.push_back(e);
  }

  // I2/I3: spectral densities Hermitian PSD on a grid (cross terms are zero
  // by construction, so the 2n block is PSD iff the diagonal blocks are)
  {
    ConditionEntry e2{"I2", CheckStatus::SampledPass, 1e300, {}, "qhat^{ii} >= 0 on grid"};
    ConditionEntry e3{"I3", CheckStatus::SampledPass, 1e300, {}, "Rhat_0 block PSD on grid"};
    ThetaGrid tg{d, 64};
    for (std::int64_t i = 0; i < tg.size(); ++i) {
      RVec th = tg.point(i);
      for (int blk = 0; blk < 2; ++blk) {
        Mat q = blk == 0 ? profile.q00_hat(th) : profile.q11_hat(th);
        double herm = (q - q.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Mat> es(q);
        double lam = es.eigenvalues().minCoeff();
        e2.margin = std::min(e2.margin, lam);
        e3.margin = std::min(e3.margin, lam - herm);
        if (lam < -1e-10 || herm > 1e-10) {
          e2.status = CheckStatus::Fail;
          e3.status = CheckStatus::Fail;
          if (e2.witnesses.size() < 4) e2.witnesses.push_back(th);
        }
      }
    }
    rep.entries.push_back(e2);
    rep.entries.push_back(e3);
  }

  // I4: T bounded with bounded derivatives up to order d (closed-form
  // families; sampled sup over a range)
  {
    ConditionEntry e{"I4", CheckStatus::SampledPass, 0.0, {}, "sup |D^a T| on [-8,8]^d"};
    double step = 0.05;
    double sup = 0.0;
    int npts = static_cast<int>(16.0 / step);
    for (int i = 0; i <= npts; ++i) {
      RVec r = RVec::Constant(d, -8.0 + i * step);
      sup = std::max(sup, profile.T(r));
      RVec rp = r, rm = r;
      rp[0] += step;
      rm[0] -= step;
      sup = std::max(sup, std::abs(profile.T(rp) - profile.T(rm)) / (2 * step));
    }
    e.margin = sup;
    rep.entries.push_back(e);
  }

  // I4': Fourier decay of T; effective exponent N at |s| = 10
  {
    ConditionEntry e{"I4'", CheckStatus::SampledPass, 0.0, {}, ""};
    if (profile.T.family == TProfile::Family::Constant) {
      e.margin = 1e3;
      e.note = "point mass at s = 0, decay trivial";
    } else {
      RVec s0 = RVec::Zero(d), s1 = RVec::Constant(d, 10.0 / std::sqrt(double(d)));
      double ratio = profile.T.smooth_transform(s1, d) / profile.T.smooth_transform(s0, d);
      e.margin = -std::log(std::max(ratio, 1e-300)) / std::log(1.0 + 10.0);
      e.note = "effective decay exponent N at |s| = 10";
      if (e.margin <= d + 3) e.status = CheckStatus::SampledFail;
    }
    rep.entries.push_back(e);
  }

  // V1/V2 on sampled (z, z', eps) triples for the product construction
  {
    ConditionEntry v1{"V1", CheckStatus::SampledPass, 0.0, {}, "max LHS/bound over samples"};
    ConditionEntry v2{"V2", CheckStatus::SampledPass, 0.0, {}, "max |Q_eps| (1+|z-z'|)^gamma"};
    double gamma_fit = std::min(rep.entries[0].margin, 20.0);
    for (double eps : eps_list.empty() ? std::vector<double>{0.1} : eps_list) {
      for (int zr = 0; zr < std::min(half - 1, 40); zr += 3) {
        std::vector<int> z(d, 0), zp(d, 0);
        z[0] = 5 + zr;
        zp[0] = 5;
        Mat q = covariance_Q(profile, eps, z, zp);
        RVec rz(d);
        for (int i = 0; i < d; ++i) rz[i] = eps * z[i];
        // R_0(eps z, z - z') for the product family
        double tq = profile.T(rz);
        std::int64_t iw = qbox.index([&] {
          std::vector<int> w(d);
          for (int i = 0; i < d; ++i) w[i] = z[i] - zp[i];
          return w;
        }());
        double lhs = 0.0;
        lhs = std::max(lhs, (q.topLeftCorner(profile.n, profile.n).real() - tq * f.q00[iw])
                                .cwiseAbs()
                                .maxCoeff());
        lhs = std::max(lhs,
                       (q.bottomRightCorner(profile.n, profile.n).real() - tq * f.q11[iw])
                           .cwiseAbs()
                           .maxCoeff());
        double dist = std::abs(zr);
        double bound = std::min(std::pow(1.0 + dist, -gamma_fit), eps * dist);
        if (bound > 0.0) v1.margin = std::max(v1.margin, lhs / bound);
        double qmag = q.cwiseAbs().maxCoeff();
        v2.margin = std::max(v2.margin, qmag * std::pow(1.0 + dist, gamma_fit));
      }
    }
    if (!std::isfinite(v1.margin)) v1.status = CheckStatus::SampledFail;
    rep.entries.push_back(v1);
    rep.entries.push_back(v2);
  }

  return rep;
}

}  // namespace hydrolat
