// Acceptance suite: runs every verification criterion of the build at its
// pinned tolerance and prints one pass/fail line per criterion.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "hydrolat/conservation.hpp"
#include "hydrolat/rng.hpp"
#include "hydrolat/wigner.hpp"
#include "oracles.hpp"

using namespace hydrolat;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

InteractionMatrix chain() { return build_nearest_neighbor(1, {1.0}, {1.0}); }

CovarianceProfile bump_profile() {
  return product_profile(TProfile::gaussian_bump(0.5), gibbs_spectral(chain(), 1.0));
}

CovarianceProfile flat_profile() {
  return product_profile(TProfile::constant(1.0), gibbs_spectral(chain(), 1.0));
}

RVec vec1(double x) { return RVec::Constant(1, x); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double pair_err(const PairCov& micro, const PairCov& limit) {
  double err = 0.0;
  for (const auto& [pr, c] : micro) err = std::max(err, sup_norm(Mat(c.m - limit.at(pr).m)));
  return err;
}

ScaledQuery make_query(double tau, double kappa, double r, double eps,
                       const std::vector<OffsetPair>& offs) {
  ScaledQuery q;
  q.tau = tau;
  q.kappa = kappa;
  q.r = vec1(r);
  q.eps = eps;
  q.offsets = offs;
  return q;
}

// ---- criterion 1: Euler limit sweep --------------------------------------
void criterion_euler() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  std::vector<OffsetPair> offs = offset_range(1, 2);
  double tau = 1.0, r = 0.5;
  PairCov limit = limit_position_pairs(LimitKind::Euler, v, p, tau, vec1(r), 0.1, 0, offs, 1024);

  std::vector<double> errs;
  for (double eps : {0.1, 0.05, 0.025})
    errs.push_back(pair_err(propagate_covariance(v, p, make_query(tau, 1.0, r, eps, offs)), limit));
  bool ok = errs[1] < errs[0] && errs[2] < errs[1] && errs[2] <= 0.6 * errs[0];
  report(1, "Euler limit convergence", ok,
         fmt("err = %.3e, %.3e, %.3e", errs[0], errs[1], errs[2]));
}

// ---- criterion 2: Navier-Stokes refinement -------------------------------
// The offsets keep the first site pinned at [r/eps] so the covariance is
// probed in the anchoring of the one-sided limit object; symmetric offset
// sets sample the midpoint anchoring, where the kernel phase cancels at
// finite eps and the refinement is invisible.
void criterion_ns() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  std::vector<OffsetPair> offs;
  for (int w = -32; w <= 32; ++w) offs.push_back({{0}, {-w}});
  double tau = 0.5, r = 0.5;

  std::vector<double> errs;
  double err_kf = 0.0;
  for (double eps : {0.1, 0.05}) {
    PairCov micro = propagate_covariance(v, p, make_query(tau, 2.0, r, eps, offs));
    PairCov ns =
        limit_position_pairs(LimitKind::NavierStokes, v, p, tau, vec1(r), eps, 0, offs, 2048);
    errs.push_back(pair_err(micro, ns));
    if (eps == 0.05) {
      PairCov kf =
          limit_position_pairs(LimitKind::KernelFree, v, p, tau, vec1(r), eps, 0, offs, 2048);
      err_kf = pair_err(micro, kf);
    }
  }
  bool ok = errs[1] < err_kf && errs[1] < errs[0];
  report(2, "Navier-Stokes refinement beats the kernel-free variant", ok,
         fmt("ns err = %.3e -> %.3e, kernel-free err = %.3e", errs[0], errs[1], err_kf));
}

// ---- criterion 3: higher-order corrections -------------------------------
void criterion_higher() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();

  // k = 2 coincides with the closed-form diffusive correction
  double worst2 = 0.0;
  for (int j = 0; j < 8; ++j) {
    RVec th = vec1(-pi + 2.0 * pi * (j + 0.5) / 8.0);
    Mat a = higher_correction(v, p, 0.5, vec1(0.2), th, 0.1, 2).m;
    Mat b = ns_correction(v, p, 0.5, vec1(0.2), th, 0.1).m;
    worst2 = std::max(worst2, sup_norm(Mat(a - b)));
  }

  // k = 3 at kappa = 3 against the microscopic covariance, two eps values
  std::vector<OffsetPair> offs = offset_range(1, 1);
  double tau = 0.5, r = 0.0;
  std::vector<double> errs;
  for (double eps : {0.1, 0.05}) {
    PairCov micro = propagate_covariance(v, p, make_query(tau, 3.0, r, eps, offs));
    int mgrid = eps < 0.08 ? 4096 : 2048;
    PairCov lim =
        limit_position_pairs(LimitKind::Higher, v, p, tau, vec1(r), eps, 3, offs, mgrid);
    errs.push_back(pair_err(micro, lim));
  }
  bool ok = worst2 <= 1e-8 && errs[1] < errs[0];
  report(3, "higher-order corrections (k=2 match, k=3 sweep)", ok,
         fmt("k2 vs ns = %.2e, k3 err = %.3e -> %.3e", worst2, errs[0], errs[1]));
}

// ---- criterion 4: half-space Euler limit ----------------------------------
void criterion_halfspace_euler() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  double tau = 1.0;
  bool ok = true;
  std::string detail;

  for (double r1 : {0.5, 0.0}) {
    std::vector<OffsetPair> offs;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) offs.push_back({{a}, {b}});
    PairCov limit = halfspace_euler(v, p, tau, vec1(r1), offs);
    std::vector<double> errs;
    for (double eps : {0.1, 0.05, 0.025}) {
      PairCov micro = halfspace_covariance(v, p, make_query(tau, 1.0, r1, eps, offs));
      errs.push_back(pair_err(micro, limit));
    }
    ok = ok && errs[1] < errs[0] && errs[2] < errs[1];
    detail += fmt("r1=%.1f: %.2e,%.2e,", r1, errs[0]) + fmt("%.2e,%.2e  ", errs[1], errs[2]);
    if (r1 == 0.0) {
      double boundary = std::max(sup_norm(limit.at({{0}, {0}}).m),
                                 sup_norm(limit.at({{0}, {2}}).m));
      ok = ok && boundary <= 1e-12;
      detail += fmt("boundary = %.1e", boundary);
    }
  }
  report(4, "half-space Euler limit convergence", ok, detail);
}

// ---- criterion 5: half-space Navier-Stokes --------------------------------
void criterion_halfspace_ns() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  double tau = 0.5, r1 = 0.5, eps = 0.05;
  // first site pinned (see criterion 2); the probed sites stay at least
  // r1/2 from the wall, where the fixed-r1 limit describes the data
  int base = static_cast<int>(std::floor(r1 / eps));
  std::vector<OffsetPair> offs;
  for (int w = -32; w <= base / 2; ++w) offs.push_back({{0}, {-w}});

  PairCov micro = halfspace_covariance(v, p, make_query(tau, 2.0, r1, eps, offs));
  PairCov ns = halfspace_ns(v, p, tau, vec1(r1), eps, offs);
  PairCov kf = halfspace_euler(v, p, tau / eps, vec1(r1), offs);
  double err_ns = pair_err(micro, ns);
  double err_kf = pair_err(micro, kf);
  bool ok = err_ns < err_kf;
  report(5, "half-space Navier-Stokes improvement", ok,
         fmt("ns err = %.3e vs kernel-free %.3e", err_ns, err_kf));
}

// ---- criterion 6: equilibrium condition ------------------------------------
void criterion_equilibrium() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  double worst_core = 0.0, worst_full = 0.0;
  for (int j = 0; j < 64; ++j) {
    RVec th = vec1(-pi + 2.0 * pi * (j + 0.5) / 64.0);
    SpectralPoint sp = spectral_data(v, th);

    BlockCov eu = euler_limit(v, p, 1.0, vec1(0.5), th);
    BlockCov ns = ns_correction(v, p, 0.5, vec1(0.0), th, 0.05);
    BlockCov h3 = higher_correction(v, p, 0.5, vec1(0.0), th, 0.1, 3);
    BlockCov ge0 = halfspace_euler_hat(v, p, 1.0, vec1(0.0), th).ghat;
    BlockCov ge1 = halfspace_euler_hat(v, p, 1.0, vec1(0.5), th).ghat;
    BlockCov gn = halfspace_ns_hat(v, p, 0.5, vec1(0.5), th, 0.05).ghat;

    // the equilibrium identities hold for every produced limit matrix
    for (const BlockCov* q : {&eu, &ns, &h3, &ge0, &ge1, &gn})
      worst_core = std::max(worst_core, equilibrium_core_residual(*q, sp));
    // Hermiticity and positivity where the limits are exact covariances
    for (const BlockCov* q : {&eu, &ns, &h3, &ge0, &ge1})
      worst_full = std::max(worst_full, equilibrium_residual(*q, sp));
  }
  bool ok = worst_core <= 1e-12 && worst_full <= 1e-12;
  report(6, "equilibrium condition across the 64-point panel", ok,
         fmt("core = %.2e, full = %.2e", worst_core, worst_full));
}

// ---- criterion 7: stationary-phase kernel identity -------------------------
void criterion_kernel() {
  CounterRng rng{20260809};
  double worst = 0.0;
  int idx = 0;
  for (double tau : {0.5, 1.0, 2.0}) {
    for (int d : {1, 2}) {
      for (int rep = 0; rep < 2; ++rep) {
        // random nondegenerate symmetric H with eigenvalues in +-[0.3, 2.0]
        RMat h;
        if (d == 1) {
          double lam = 0.3 + 1.7 * rng.uniform(1, idx, 0);
          if (rng.uniform(1, idx, 1) < 0.5) lam = -lam;
          h = RMat::Constant(1, 1, lam);
        } else {
          double l1 = 0.3 + 1.7 * rng.uniform(1, idx, 0);
          double l2 = 0.3 + 1.7 * rng.uniform(1, idx, 1);
          if (rng.uniform(1, idx, 2) < 0.5) l2 = -l2;
          double ang = 2.0 * pi * rng.uniform(1, idx, 3);
          RMat rot(2, 2);
          rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
          RMat diag = RMat::Zero(2, 2);
          diag(0, 0) = l1;
          diag(1, 1) = l2;
          h = rot * diag * rot.transpose();
        }
        for (int xi = 0; xi < 5; ++xi) {
          RVec x(d);
          for (int c = 0; c < d; ++c) x[c] = -2.0 + 4.0 * rng.uniform(2, idx * 8 + xi, c);
          for (int b : {+1, -1}) {
            cplx closed = ns_kernel(tau, h, x, b);
            cplx quad = oracles::kernel_oracle(tau, h, x, b);
            worst = std::max(worst, std::abs(closed - quad) / std::abs(closed));
          }
        }
        ++idx;
      }
    }
  }
  report(7, "kernel closed form vs damped-quadrature oracle", worst <= 1e-6,
         fmt("max rel err = %.2e over the panel", worst));
}

// ---- criterion 8: dynamics invariants --------------------------------------
void criterion_dynamics() {
  InteractionMatrix v = chain();
  Box box = Box::cubic(1, 256);
  double worst_h = 0.0;
  CounterRng rng{11};
  for (int seed = 0; seed < 100; ++seed) {
    FieldState x;
    x.box = box;
    x.v0.resize(1, box.size());
    x.v1.resize(1, box.size());
    for (std::int64_t i = 0; i < box.size(); ++i) {
      x.v0(0, i) = rng.normal(seed * 2, i);
      x.v1(0, i) = rng.normal(seed * 2 + 1, i);
    }
    double h0 = hamiltonian(v, x);
    for (double t : {1.0, 10.0, 100.0}) {
      FieldState xt = evolve(v, x, t);
      worst_h = std::max(worst_h, std::abs(hamiltonian(v, xt) - h0) / std::max(h0, 1.0));
    }
  }

  FieldState x0;
  x0.box = box;
  x0.v0.resize(1, box.size());
  x0.v1.resize(1, box.size());
  for (std::int64_t i = 0; i < box.size(); ++i) {
    x0.v0(0, i) = rng.normal(777, i);
    x0.v1(0, i) = rng.normal(778, i);
  }
  FieldState ab = evolve(v, evolve(v, x0, 4.0), 6.0);
  FieldState once = evolve(v, x0, 10.0);
  double group = std::max((ab.v0 - once.v0).cwiseAbs().maxCoeff(),
                          (ab.v1 - once.v1).cwiseAbs().maxCoeff());

  FieldState y0;
  y0.box = Box::cubic(1, 128);
  y0.half_space = true;
  y0.v0 = RMat::Zero(1, 128);
  y0.v1 = RMat::Zero(1, 128);
  for (int z = 30; z < 90; ++z) {
    y0.v0(0, z) = rng.normal(900, z);
    y0.v1(0, z) = rng.normal(901, z);
  }
  double boundary = 0.0;
  for (double t : {1.0, 7.0, 19.0}) {
    FieldState yt = evolve_halfspace(v, y0, t);
    boundary = std::max(boundary, std::abs(yt.v0(0, 0)));
    boundary = std::max(boundary, std::abs(yt.v1(0, 0)));
  }
  bool ok = worst_h <= 1e-10 && group <= 1e-10 && boundary <= 1e-12;
  report(8, "dynamics invariants (energy, group law, boundary)", ok,
         fmt("dH = %.2e, group = %.2e, boundary = %.2e", worst_h, group, boundary));
}

// ---- criterion 9: transport-equation residuals -----------------------------
void criterion_pde() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  double theta = pi / 2;

  LimitField e1 = euler_field_grid(v, p, 0, theta, 1.0, 0.02, 5, 0.3, 0.02, 5);
  LimitField e2 = euler_field_grid(v, p, 0, theta, 1.0, 0.01, 5, 0.3, 0.01, 5);
  double euler_ratio = euler_pde_residual(e1) / euler_pde_residual(e2);

  LimitField n1 = ns_field_grid(v, p, 0, theta, 0.1, 1.0, 0.02, 5, 0.3, 0.02, 5);
  LimitField n2 = ns_field_grid(v, p, 0, theta, 0.1, 1.0, 0.01, 5, 0.3, 0.01, 5);
  double ns_ratio = ns_pde_residual(n1, 0.1) / ns_pde_residual(n2, 0.1);

  WignerField w1 = wigner_limit_grid(v, p, 0, theta, 1.0, 0.02, 5, 1.0, 0.02, 5, false);
  WignerField w2 = wigner_limit_grid(v, p, 0, theta, 1.0, 0.01, 5, 1.0, 0.01, 5, false);
  double tr_ratio = transport_residual(v, p, w1).interior_residual /
                    transport_residual(v, p, w2).interior_residual;

  WignerField wh = wigner_limit_grid(v, p, 0, theta, 1.0, 0.05, 4, 0.0, 0.05, 6, true);
  TransportReport rep = transport_residual(v, p, wh);

  auto in_band = [](double x) { return x >= 3.5 && x <= 4.5; };
  bool ok = in_band(euler_ratio) && in_band(ns_ratio) && in_band(tr_ratio) &&
            rep.boundary_mismatch <= 1e-10 && rep.boundary_mismatch_symmetric <= 1e-10;
  report(9, "transport residuals O(h^2), boundary matched", ok,
         fmt("ratios = %.2f, %.2f, %.2f", euler_ratio, ns_ratio, tr_ratio) +
             fmt(", boundary = %.1e", rep.boundary_mismatch));
}

// ---- criterion 10: local conservation law ----------------------------------
void criterion_conservation() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  CovarianceProfile flat = flat_profile();

  double c1 = continuity_residual(v, p, 0.7, 0.04, 5, 0.3, 0.04, 5, 256);
  double c2 = continuity_residual(v, p, 0.7, 0.02, 5, 0.3, 0.02, 5, 256);
  double cont_ratio = c1 / c2;

  // constant T: zero current, constant density
  double jflat = std::abs(energy_current_limit(v, flat, 0.7, vec1(0.3), 256)[0]);
  double e_a = energy_density_limit(v, flat, 0.7, vec1(0.3), 256).value;
  double e_b = energy_density_limit(v, flat, 2.9, vec1(-0.8), 256).value;
  double eflat = std::max(std::abs(e_a - 1.0), std::abs(e_b - 1.0));

  // microscopic average energy converges
  double e_limit = energy_density_limit(v, p, 0.5, vec1(0.3), 512).value;
  std::vector<double> errs;
  for (double eps : {0.1, 0.05, 0.025})
    errs.push_back(std::abs(microscopic_energy(v, p, 0.5, vec1(0.3), eps) - e_limit));

  // coupled identities under step halving
  TestFunction phi;
  phi.center = 0.3;
  ConservedIdentityResidual ra = conserved_identity_residual(v, p, phi, 0.5, 0.9, 0.04);
  ConservedIdentityResidual rb = conserved_identity_residual(v, p, phi, 0.5, 0.9, 0.02);
  double id_e = ra.e_identity / rb.e_identity;
  double id_a = ra.a_identity / rb.a_identity;

  auto in_band = [](double x) { return x >= 3.5 && x <= 4.5; };
  bool ok = in_band(cont_ratio) && jflat <= 1e-12 && eflat <= 1e-12 && errs[1] < errs[0] &&
            errs[2] < errs[1] && in_band(id_e) && in_band(id_a);
  report(10, "conservation: continuity, equilibrium, micro energy, identities", ok,
         fmt("cont ratio = %.2f, micro errs = %.2e -> %.2e", cont_ratio, errs[0], errs[2]) +
             fmt(", id ratios = %.2f, %.2f", id_e, id_a));
}

// ---- criterion 11: Monte Carlo consistency ---------------------------------
void criterion_monte_carlo() {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();

  ScaledQuery q = make_query(1.0, 1.0, 0.5, 0.1, offset_range(1, 1));
  PairCov det = propagate_covariance(v, p, q);
  auto emp = empirical_covariance(v, p, q, 2000, 8675309, 2);
  int hits = 0, cells = 0;
  for (const auto& [pr, e] : emp) {
    const Mat& expect = det.at(pr).m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double se = std::max(e.stderr_.m(i, j).real(), 1e-15);
        ++cells;
        if (std::abs(e.mean.m(i, j).real() - expect(i, j).real()) <= 3.0 * se) ++hits;
      }
  }
  double cov_frac = static_cast<double>(hits) / cells;

  std::vector<double> thetas;
  for (int k = 0; k < 12; ++k) thetas.push_back(-pi + 2.0 * pi * (k + 0.5) / 12.0);
  WignerOptions opt;
  opt.jobs = 2;
  WignerGrid wd = wigner_deterministic(v, p, 0.1, 0.5, vec1(0.3), thetas, opt);
  WignerGrid we = wigner_empirical(v, p, 0.1, 0.5, vec1(0.3), thetas, 2000, 24601, opt);
  int whits = 0;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    double se = std::max(we.stderr_[k](0, 0), 1e-15);
    if (std::abs(we.values[k](0, 0) - wd.values[k](0, 0)) <= 3.0 * se) ++whits;
  }
  double wig_frac = static_cast<double>(whits) / thetas.size();

  // stderr scaling fit across doubling sample counts
  std::vector<int> sizes{500, 1000, 2000};
  std::vector<double> lse, ln;
  for (int ns : sizes) {
    auto e = empirical_covariance(v, p, q, ns, 5150, 2);
    double acc = 0.0;
    int cnt = 0;
    for (const auto& [pr, ec] : e) {
      acc += ec.stderr_.m.real().mean();
      ++cnt;
    }
    lse.push_back(std::log(acc / cnt));
    ln.push_back(std::log(static_cast<double>(ns)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lse.size(); ++i) {
    sx += ln[i]; sy += lse[i]; sxx += ln[i] * ln[i]; sxy += ln[i] * lse[i];
  }
  double m = static_cast<double>(lse.size());
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  bool ok = cov_frac >= 0.95 && wig_frac >= 0.95 && slope >= -0.6 && slope <= -0.4;
  report(11, "Monte Carlo consistency and stderr scaling", ok,
         fmt("cov = %.0f%%, wigner = %.0f%%, slope = %.3f", 100 * cov_frac, 100 * wig_frac,
             slope));
}

// ---- criterion 12: Gibbs invariance ----------------------------------------
void criterion_gibbs() {
  InteractionMatrix v = chain();
  CovarianceProfile flat = flat_profile();

  double flow = 0.0;
  for (double t : {1.0, 10.0}) {
    ScaledQuery q = make_query(t, 1.0, 0.0, 1.0, offset_range(1, 2));
    PairCov cov = propagate_covariance(v, flat, q);
    for (const auto& [pr, c] : cov)
      flow = std::max(flow, sup_norm(Mat(c.m - covariance_Q(flat, 1.0, pr.first, pr.second))));
  }

  // fixed point of the Euler sandwich: qhat_{tau,r} equals the Gibbs block
  double fixed = 0.0;
  for (int j = 0; j < 16; ++j) {
    RVec th = vec1(-pi + 2.0 * pi * (j + 0.5) / 16.0);
    Mat vhat = fourier_symbol(v, th);
    for (double tau : {0.0, 0.7, 3.0}) {
      BlockCov q = euler_limit(v, flat, tau, vec1(0.4), th);
      Mat expect = Mat::Zero(2, 2);
      expect(0, 0) = 1.0 / vhat(0, 0);
      expect(1, 1) = 1.0;
      fixed = std::max(fixed, sup_norm(Mat(q.m - expect)));
    }
  }
  bool ok = flow <= 1e-9 && fixed <= 1e-12;
  report(12, "Gibbs invariance (flow and sandwich fixed point)", ok,
         fmt("flow = %.2e, fixed point = %.2e", flow, fixed));
}

}  // namespace

int main() {
  std::printf("acceptance suite: reference chain (nearest-neighbor, n=1, gamma=1, m=1),\n");
  std::printf("Gibbs product profile T(r) = 1 + 0.5 exp(-r^2)\n\n");
  criterion_euler();
  criterion_ns();
  criterion_higher();
  criterion_halfspace_euler();
  criterion_halfspace_ns();
  criterion_equilibrium();
  criterion_kernel();
  criterion_dynamics();
  criterion_pde();
  criterion_conservation();
  criterion_monte_carlo();
  criterion_gibbs();
  std::printf("\n%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
