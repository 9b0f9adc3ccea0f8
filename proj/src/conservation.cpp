#include "hydrolat/conservation.hpp"

#include <algorithm>
#include <cmath>

namespace hydrolat {

namespace {

struct ThetaSweep {
  std::vector<RVec> points;
  double excluded_fraction = 0.0;
};

// grid points where the limit formula is evaluable; near-critical cells are
// excluded and their measure recorded
ThetaSweep usable_grid(const InteractionMatrix& V, int m) {
  ThetaGrid tg{V.d, m};
  ThetaSweep sweep;
  std::int64_t excluded = 0;
  for (std::int64_t i = 0; i < tg.size(); ++i) {
    RVec th = tg.point(i);
    try {
      spectral_data(V, th);
      sweep.points.push_back(th);
    } catch (const Error&) {
      ++excluded;
    }
  }
  sweep.excluded_fraction = static_cast<double>(excluded) / tg.size();
  if (sweep.points.empty()) throw CriticalSetError("usable_grid: no evaluable theta cells");
  return sweep;
}

}  // namespace

EnergyDensity energy_density_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                                   double tau, const RVec& r, int theta_grid) {
  ThetaSweep sweep = usable_grid(V, theta_grid);
  cplx one_term(0.0, 0.0), two_term(0.0, 0.0);
  for (const RVec& th : sweep.points) {
    BlockCov q = euler_limit(V, profile, tau, r, th);
    Mat vhat = fourier_symbol(V, th);
    one_term += q.block(1, 1).trace();
    two_term += 0.5 * (q.block(1, 1).trace() + (q.block(0, 0) * vhat.adjoint()).trace());
  }
  EnergyDensity e;
  e.value = one_term.real() / sweep.points.size();
  e.two_term_value = two_term.real() / sweep.points.size();
  return e;
}

RVec energy_current_limit(const InteractionMatrix& V, const CovarianceProfile& profile,
                          double tau, const RVec& r, int theta_grid) {
  ThetaSweep sweep = usable_grid(V, theta_grid);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(V.d);
  for (const RVec& th : sweep.points) {
    BlockCov q = euler_limit(V, profile, tau, r, th);
    for (int k = 0; k < V.d; ++k) {
      Mat dv = fourier_symbol_derivative(V, th, k);
      acc[k] += (q.block(1, 0) * dv).trace();
    }
  }
  acc *= cplx(0.0, -0.5) / static_cast<double>(sweep.points.size());
  RVec j(V.d);
  for (int k = 0; k < V.d; ++k) j[k] = acc[k].real();
  return j;
}

double continuity_residual(const InteractionMatrix& V, const CovarianceProfile& profile,
                           double tau0, double h_tau, int nt, double r0, double h_r, int nr,
                           int theta_grid) {
  if (V.d != 1) throw UnsupportedError("continuity_residual: d = 1 grids only");
  if (nt < 3 || nr < 3) throw GridError("continuity_residual: need at least 3 points per axis");
  std::vector<std::vector<double>> e(nt, std::vector<double>(nr));
  std::vector<std::vector<double>> j(nt, std::vector<double>(nr));
  for (int it = 0; it < nt; ++it)
    for (int ir = 0; ir < nr; ++ir) {
      RVec r(1);
      r[0] = r0 + ir * h_r;
      double tau = tau0 + it * h_tau;
      e[it][ir] = energy_density_limit(V, profile, tau, r, theta_grid).value;
      j[it][ir] = energy_current_limit(V, profile, tau, r, theta_grid)[0];
    }
  double worst = 0.0;
  for (int it = 1; it + 1 < nt; ++it)
    for (int ir = 1; ir + 1 < nr; ++ir) {
      double de = (e[it + 1][ir] - e[it - 1][ir]) / (2.0 * h_tau);
      double dj = (j[it][ir + 1] - j[it][ir - 1]) / (2.0 * h_r);
      worst = std::max(worst, std::abs(de + dj));
    }
  return worst;
}

double microscopic_energy(const InteractionMatrix& V, const CovarianceProfile& profile,
                          double tau, const RVec& r, double eps) {
  ScaledQuery q;
  q.tau = tau;
  q.kappa = 1.0;
  q.r = r;
  q.eps = eps;
  std::vector<int> zero(V.d, 0);
  q.offsets.emplace_back(zero, zero);
  for (const auto& [dz, m] : V.support) {
    std::vector<int> zp(V.d);
    for (int i = 0; i < V.d; ++i) zp[i] = -dz[i];
    q.offsets.emplace_back(zero, zp);
  }
  PairCov cov = propagate_covariance(V, profile, q);
  cplx acc = cov.at({zero, zero}).block(1, 1).trace();
  for (const auto& [dz, m] : V.support) {
    std::vector<int> zp(V.d);
    for (int i = 0; i < V.d; ++i) zp[i] = -dz[i];
    acc += (cov.at({zero, zp}).block(0, 0) * m.transpose().cast<cplx>()).trace();
  }
  return 0.5 * acc.real();
}

RVec microscopic_current(const InteractionMatrix& V, const CovarianceProfile& profile,
                         double tau, const RVec& r, double eps) {
  if (V.d > 2) throw UnsupportedError("microscopic_current: d <= 2 only");
  int R = V.support_radius();

  // collect the (m,p,yperp) terms of the double series; both sums terminate
  // because the interaction has finite support
  struct Term {
    std::vector<int> za, zb;  // offsets of the Q^{10} arguments
    RMat v;                   // V(w) with w the interaction offset
    double sign;
  };
  std::vector<Term> terms;
  ScaledQuery q;
  q.tau = tau;
  q.kappa = 1.0;
  q.r = r;
  q.eps = eps;

  RVec j = RVec::Zero(V.d);
  for (int k = 0; k < V.d; ++k) {
    terms.clear();
    // y' runs over the plane y'_k = 0 within the support reach
    std::vector<std::vector<int>> yperp;
    if (V.d == 1) {
      yperp.push_back(std::vector<int>(1, 0));
    } else {
      for (int c = -R; c <= R; ++c) {
        std::vector<int> y(2, 0);
        y[1 - k] = c;
        yperp.push_back(y);
      }
    }
    for (const auto& y : yperp)
      for (int s = -R; s <= R; ++s) {
        if (s == 0) continue;
        std::vector<int> w(V.d);
        for (int i = 0; i < V.d; ++i) w[i] = -y[i];
        w[k] += s;
        RMat vm = V.at(w);
        if (vm.cwiseAbs().maxCoeff() == 0.0) continue;
        // pairs (m, p) with m - p = s and the half-line constraints
        if (s < 0) {
          for (int m = s + 1; m <= 0; ++m) {
            Term t;
            t.za = std::vector<int>(V.d, 0);
            t.za[k] = m;
            t.zb = y;
            t.zb[k] += m - s;
            t.v = vm;
            t.sign = +0.5;
            terms.push_back(t);
          }
        } else {
          for (int m = 1; m <= s; ++m) {
            Term t;
            t.za = std::vector<int>(V.d, 0);
            t.za[k] = m;
            t.zb = y;
            t.zb[k] += m - s;
            t.v = vm;
            t.sign = -0.5;
            terms.push_back(t);
          }
        }
      }

    q.offsets.clear();
    for (const Term& t : terms) q.offsets.emplace_back(t.za, t.zb);
    PairCov cov = propagate_covariance(V, profile, q);
    cplx acc(0.0, 0.0);
    for (const Term& t : terms)
      acc += t.sign * (cov.at({t.za, t.zb}).block(1, 0) * t.v.transpose().cast<cplx>()).trace();
    j[k] = acc.real();
  }
  return j;
}

double TestFunction::operator()(double r) const {
  double x = (r - center) / scale;
  if (family == Family::GaussianBump) return std::exp(-x * x);
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double TestFunction::half_width() const {
  return family == Family::GaussianBump ? 8.0 * scale : scale;
}

namespace {

double test_function_derivative(const TestFunction& phi, double r) {
  double h = 1e-6;
  return (phi(r + h) - phi(r - h)) / (2.0 * h);
}

Mat limit_E_hat(const InteractionMatrix& V, const CovarianceProfile& profile,
                const std::function<double(double)>& phi, double lo, double hi, double tau,
                const RVec& theta, bool momentum_block) {
  const int nq = 400;
  double h = (hi - lo) / nq;
  Mat acc = Mat::Zero(V.n, V.n);
  for (int i = 0; i <= nq; ++i) {
    double r = lo + i * h;
    double wgt = (i == 0 || i == nq) ? 0.5 : 1.0;
    RVec rv(1);
    rv[0] = r;
    BlockCov q = euler_limit(V, profile, tau, rv, theta);
    acc += wgt * h * phi(r) * (momentum_block ? q.block(1, 1) : q.block(0, 1));
  }
  return acc;
}

}  // namespace

ConservedQuantities conserved_quantities(const InteractionMatrix& V,
                                         const CovarianceProfile& profile,
                                         const TestFunction& phi, double tau,
                                         const std::vector<double>& thetas, double eps,
                                         int h_max) {
  if (V.d != 1) throw UnsupportedError("conserved_quantities: d = 1 only");
  ConservedQuantities out;
  out.thetas = thetas;
  double lo = phi.center - phi.half_width();
  double hi = phi.center + phi.half_width();

  for (double th : thetas) {
    RVec tv(1);
    tv[0] = th;
    out.e_hat.push_back(limit_E_hat(
        V, profile, [&](double r) { return phi(r); }, lo, hi, tau, tv, true));
    out.a_hat.push_back(limit_E_hat(
        V, profile, [&](double r) { return phi(r); }, lo, hi, tau, tv, false));
  }

  // microscopic lattice sums over the propagated covariance
  int zlo = static_cast<int>(std::floor(lo / eps)) - 1;
  int zhi = static_cast<int>(std::ceil(hi / eps)) + 1;
  ScaledQuery q;
  q.tau = tau;
  q.kappa = 1.0;
  q.r = RVec::Zero(1);
  q.eps = eps;
  for (int h = -h_max; h <= h_max; ++h)
    for (int z = zlo; z <= zhi; ++z) {
      q.offsets.emplace_back(std::vector<int>{z + h}, std::vector<int>{z});
      for (const auto& [dz, m] : V.support)
        q.offsets.emplace_back(std::vector<int>{z + h}, std::vector<int>{z - dz[0]});
    }
  std::sort(q.offsets.begin(), q.offsets.end());
  q.offsets.erase(std::unique(q.offsets.begin(), q.offsets.end()), q.offsets.end());
  PairCov cov = propagate_covariance(V, profile, q);

  for (int h = -h_max; h <= h_max; ++h) {
    Mat xh = Mat::Zero(V.n, V.n), yh = Mat::Zero(V.n, V.n);
    for (int z = zlo; z <= zhi; ++z) {
      double w = eps * phi(eps * z);
      const BlockCov& c0 = cov.at({{z + h}, {z}});
      Mat e_val = c0.block(1, 1);
      for (const auto& [dz, m] : V.support)
        e_val += cov.at({{z + h}, {z - dz[0]}}).block(0, 0) * m.transpose().cast<cplx>();
      xh += w * 0.5 * e_val;
      yh += w * 0.5 * (c0.block(0, 1) - c0.block(1, 0));
    }
    out.h_offsets.push_back(h);
    out.x_micro.push_back(xh);
    out.y_micro.push_back(yh);
  }

  for (std::size_t k = 0; k < thetas.size(); ++k) {
    Mat eh = Mat::Zero(V.n, V.n), ah = Mat::Zero(V.n, V.n);
    for (std::size_t j = 0; j < out.h_offsets.size(); ++j) {
      cplx ph = std::exp(cplx(0.0, thetas[k] * out.h_offsets[j]));
      eh += ph * out.x_micro[j];
      ah += ph * out.y_micro[j];
    }
    out.e_micro_hat.push_back(eh);
    out.a_micro_hat.push_back(ah);
    out.max_difference_e = std::max(out.max_difference_e, sup_norm(Mat(eh - out.e_hat[k])));
    out.max_difference_a = std::max(out.max_difference_a, sup_norm(Mat(ah - out.a_hat[k])));
  }
  return out;
}

ConservedIdentityResidual conserved_identity_residual(const InteractionMatrix& V,
                                                      const CovarianceProfile& profile,
                                                      const TestFunction& phi, double tau,
                                                      double theta, double h_tau) {
  if (V.d != 1 || V.n != 1)
    throw UnsupportedError("conserved_identity_residual: scalar chain only");
  RVec tv(1);
  tv[0] = theta;
  SpectralPoint sp = spectral_data(V, tv);
  double omega = sp.bands[0].omega;
  double domega = sp.bands[0].grad_omega[0];
  double lo = phi.center - phi.half_width();
  double hi = phi.center + phi.half_width();

  auto e_at = [&](double t) {
    return limit_E_hat(V, profile, [&](double r) { return phi(r); }, lo, hi, t, tv, true);
  };
  auto a_at = [&](double t) {
    return limit_E_hat(V, profile, [&](double r) { return phi(r); }, lo, hi, t, tv, false);
  };
  auto e_grad = [&](double t) {
    return limit_E_hat(
        V, profile, [&](double r) { return test_function_derivative(phi, r); }, lo, hi, t, tv,
        true);
  };
  auto a_grad = [&](double t) {
    return limit_E_hat(
        V, profile, [&](double r) { return test_function_derivative(phi, r); }, lo, hi, t, tv,
        false);
  };

  Mat de = (e_at(tau + h_tau) - e_at(tau - h_tau)) / (2.0 * h_tau);
  Mat da = (a_at(tau + h_tau) - a_at(tau - h_tau)) / (2.0 * h_tau);
  ConservedIdentityResidual res;
  res.e_identity = sup_norm(Mat(de - cplx(0.0, 1.0) * omega * domega * a_grad(tau)));
  res.a_identity = sup_norm(Mat(da + cplx(0.0, 1.0) * (domega / omega) * e_grad(tau)));
  return res;
}

}  // namespace hydrolat
