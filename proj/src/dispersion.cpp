#include "hydrolat/dispersion.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace hydrolat {

namespace {

struct EigenData {
  std::vector<double> omega;           // ascending
  std::vector<Mat> vectors;            // unit eigenvectors of Vhat
};

EigenData omega_eigen(const InteractionMatrix& V, const RVec& theta, double psd_tol) {
  Mat vhat = fourier_symbol(V, theta);
  Eigen::SelfAdjointEigenSolver<Mat> es(vhat);
  EigenData out;
  for (int i = 0; i < V.n; ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < -psd_tol)
      throw ConditionViolationError("spectral_data: Vhat has a negative eigenvalue (E3) at lambda=" +
                                    std::to_string(lam));
    out.omega.push_back(std::sqrt(std::max(0.0, lam)));
    out.vectors.push_back(es.eigenvectors().col(i));
  }
  return out;
}

// group ascending eigenvalues that agree up to eigensolver noise
std::vector<std::pair<int, int>> group_bands(const std::vector<double>& omega, double group_tol) {
  std::vector<std::pair<int, int>> groups;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(omega.size()); ++i) {
    if (i == static_cast<int>(omega.size()) || omega[i] - omega[i - 1] > group_tol) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  return groups;
}

double group_omega(const EigenData& ed, int lo, int hi) {
  double s = 0.0;
  for (int i = lo; i < hi; ++i) s += ed.omega[i];
  return s / (hi - lo);
}

// nearest-neighbor dispersion and its closed-form derivatives
struct NnBand {
  double omega, gamma;
};

NnBand nn_band(const NearestNeighborParams& p, const RVec& theta, int comp) {
  double s = p.mass[comp] * p.mass[comp];
  for (int j = 0; j < theta.size(); ++j) s += 2.0 * p.gamma[comp] * (1.0 - std::cos(theta[j]));
  return {std::sqrt(s), p.gamma[comp]};
}

}  // namespace

SpectralPoint spectral_data(const InteractionMatrix& V, const RVec& theta,
                            const SpectralOptions& opt) {
  V.validate();
  if (theta.size() != V.d) throw InvalidParameterError("spectral_data: theta dimension mismatch");

  SpectralPoint sp;
  sp.theta = theta;
  sp.vhat = fourier_symbol(V, theta);

  EigenData ed = omega_eigen(V, theta, opt.psd_tol);
  double scale = std::max(1.0, ed.omega.back());
  double group_tol = 1e-12 * scale;
  auto groups = group_bands(ed.omega, group_tol);

  // a gap finer than gap_tol but above solver noise means theta is near a
  // band crossing: refuse rather than silently merge
  for (std::size_t g = 1; g < groups.size(); ++g) {
    double gap = ed.omega[groups[g].first] - ed.omega[groups[g].second - 1];
    if (gap < opt.gap_tol)
      throw CriticalSetError("spectral_data: band gap " + std::to_string(gap) +
                             " below tolerance; move theta off the critical set");
  }

  sp.omega_matrix = Mat::Zero(V.n, V.n);
  for (auto [lo, hi] : groups) {
    Band b;
    b.omega = group_omega(ed, lo, hi);
    b.multiplicity = hi - lo;
    b.projector = Mat::Zero(V.n, V.n);
    for (int i = lo; i < hi; ++i) b.projector += ed.vectors[i] * ed.vectors[i].adjoint();
    sp.omega_matrix += b.omega * b.projector;
    sp.bands.push_back(std::move(b));
  }

  if (!opt.want_derivatives) return sp;

  for (std::size_t g = 0; g < groups.size(); ++g) {
    Band& b = sp.bands[g];
    b.grad_omega = RVec::Zero(V.d);
    b.hess_omega = RMat::Zero(V.d, V.d);

    if (V.nn) {
      // identify the component carried by this band and use the closed form
      int comp = 0;
      double best = -1.0;
      for (int c = 0; c < V.n; ++c) {
        double w = std::abs(ed.vectors[groups[g].first](c));
        if (w > best) { best = w; comp = c; }
      }
      NnBand nb = nn_band(*V.nn, theta, comp);
      if (nb.omega < 1e-8)
        throw CriticalSetError("spectral_data: omega vanishes, derivatives undefined");
      for (int i = 0; i < V.d; ++i) b.grad_omega[i] = nb.gamma * std::sin(theta[i]) / nb.omega;
      for (int i = 0; i < V.d; ++i)
        for (int j = 0; j < V.d; ++j) {
          double v = -nb.gamma * std::sin(theta[i]) * nb.gamma * std::sin(theta[j]) /
                     (nb.omega * nb.omega * nb.omega);
          if (i == j) v += nb.gamma * std::cos(theta[i]) / nb.omega;
          b.hess_omega(i, j) = v;
        }
      continue;
    }

    if (b.omega < 1e-8)
      throw CriticalSetError("spectral_data: omega vanishes, derivatives undefined");

    // central differences on the grouped eigenvalue; the band is matched by
    // its index pattern, valid off the critical set where multiplicity is
    // locally constant
    double h = opt.fd_step;
    auto omega_at = [&](const RVec& th) {
      EigenData e = omega_eigen(V, th, opt.psd_tol);
      auto gr = group_bands(e.omega, group_tol);
      if (gr.size() != groups.size() || gr[g] != groups[g])
        throw CriticalSetError("spectral_data: band multiplicity changes within fd stencil");
      return group_omega(e, gr[g].first, gr[g].second);
    };
    double w0 = b.omega;
    for (int i = 0; i < V.d; ++i) {
      RVec tp = theta, tm = theta;
      tp[i] += h;
      tm[i] -= h;
      double wp = omega_at(tp), wm = omega_at(tm);
      b.grad_omega[i] = (wp - wm) / (2.0 * h);
      b.hess_omega(i, i) = (wp - 2.0 * w0 + wm) / (h * h);
    }
    for (int i = 0; i < V.d; ++i)
      for (int j = i + 1; j < V.d; ++j) {
        RVec tpp = theta, tpm = theta, tmp = theta, tmm = theta;
        tpp[i] += h; tpp[j] += h;
        tpm[i] += h; tpm[j] -= h;
        tmp[i] -= h; tmp[j] += h;
        tmm[i] -= h; tmm[j] -= h;
        double v = (omega_at(tpp) - omega_at(tpm) - omega_at(tmp) + omega_at(tmm)) / (4.0 * h * h);
        b.hess_omega(i, j) = v;
        b.hess_omega(j, i) = v;
      }
  }
  return sp;
}

double omega_third_derivative(const InteractionMatrix& V, const RVec& theta,
                              int band, double step) {
  if (V.d != 1) throw UnsupportedError("omega_third_derivative: only d = 1 supported");
  auto hess_at = [&](double th) {
    RVec t(1);
    t[0] = th;
    SpectralPoint sp = spectral_data(V, t);
    if (band >= static_cast<int>(sp.bands.size()))
      throw InvalidParameterError("omega_third_derivative: band index out of range");
    return sp.bands[band].hess_omega(0, 0);
  };
  return (hess_at(theta[0] + step) - hess_at(theta[0] - step)) / (2.0 * step);
}

double max_group_speed(const InteractionMatrix& V, int grid) {
  ThetaGrid tg{V.d, grid};
  double best = 0.0;
  for (std::int64_t i = 0; i < tg.size(); ++i) {
    try {
      SpectralPoint sp = spectral_data(V, tg.point(i));
      for (const Band& b : sp.bands) best = std::max(best, b.grad_omega.norm());
    } catch (const Error&) {
      // critical grid point; speed bound comes from its neighbors
    }
  }
  if (best == 0.0) throw CriticalSetError("max_group_speed: no usable grid point");
  return best;
}

bool ConditionReport::all_pass() const {
  for (const auto& e : entries)
    if (e.status == CheckStatus::Fail || e.status == CheckStatus::SampledFail) return false;
  return true;
}

const ConditionEntry& ConditionReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw InvalidParameterError("ConditionReport: no entry " + name);
}

ConditionReport check_conditions(const InteractionMatrix& V, int grid_resolution) {
  if (grid_resolution < 8) throw InvalidParameterError("check_conditions: grid_resolution >= 8");
  ConditionReport rep;

  // E1: supplied kernels have finite support by construction
  {
    ConditionEntry e{"E1", CheckStatus::Pass, static_cast<double>(V.support_radius()), {}, "finite support"};
    rep.entries.push_back(e);
  }

  // E2: exact on the finite support
  {
    ConditionEntry e{"E2", CheckStatus::Pass, 0.0, {}, "V(-z) = V(z)^T"};
    for (const auto& [z, m] : V.support) {
      std::vector<int> neg(z);
      for (auto& c : neg) c = -c;
      double dev = (V.at(neg) - m.transpose()).cwiseAbs().maxCoeff();
      e.margin = std::max(e.margin, dev);
      if (dev > 0.0) {
        e.status = CheckStatus::Fail;
        RVec w(V.d);
        for (int i = 0; i < V.d; ++i) w[i] = z[i];
        e.witnesses.push_back(w);
      }
    }
    rep.entries.push_back(e);
  }

  ThetaGrid tg{V.d, grid_resolution};

  // E3 sampled: min eigenvalue of Vhat over the grid
  {
    ConditionEntry e{"E3", CheckStatus::SampledPass, 1e300, {}, "Vhat >= 0 on grid"};
    for (std::int64_t i = 0; i < tg.size(); ++i) {
      RVec th = tg.point(i);
      Eigen::SelfAdjointEigenSolver<Mat> es(fourier_symbol(V, th));
      double lam = es.eigenvalues().minCoeff();
      if (lam < e.margin) e.margin = lam;
      if (lam < -1e-10) {
        e.status = CheckStatus::Fail;
        if (e.witnesses.size() < 8) e.witnesses.push_back(th);
      }
    }
    rep.entries.push_back(e);
  }

  // band sweep shared by E4/E5 and the critical-set sample
  int nbands = 0;
  std::vector<double> max_det;                 // per band index
  std::vector<std::vector<double>> sum_min, sum_max, dif_min, dif_max;
  const double crit_tol = 1e-6;
  for (std::int64_t i = 0; i < tg.size(); ++i) {
    RVec th = tg.point(i);
    SpectralPoint sp;
    try {
      sp = spectral_data(V, th);
    } catch (const Error&) {
      rep.critical_samples.push_back(th);
      continue;
    }
    int s = static_cast<int>(sp.bands.size());
    if (s > nbands) {
      nbands = s;
      max_det.resize(s, 0.0);
      sum_min.assign(s, std::vector<double>(s, 1e300));
      sum_max.assign(s, std::vector<double>(s, -1e300));
      dif_min.assign(s, std::vector<double>(s, 1e300));
      dif_max.assign(s, std::vector<double>(s, -1e300));
    }
    bool crit = false;
    for (int a = 0; a < s; ++a) {
      double det = sp.bands[a].hess_omega.determinant();
      max_det[a] = std::max(max_det[a], std::abs(det));
      if (std::abs(det) < crit_tol) crit = true;
      if (std::abs(sp.bands[a].grad_omega[0]) < crit_tol) crit = true;
      for (int j = 0; j < V.d; ++j)
        if (std::abs(sp.bands[a].hess_omega(j, j)) < crit_tol) crit = true;
      for (int bnd = a + 1; bnd < s; ++bnd) {
        double su = sp.bands[a].omega + sp.bands[bnd].omega;
        double di = sp.bands[a].omega - sp.bands[bnd].omega;
        sum_min[a][bnd] = std::min(sum_min[a][bnd], su);
        sum_max[a][bnd] = std::max(sum_max[a][bnd], su);
        dif_min[a][bnd] = std::min(dif_min[a][bnd], di);
        dif_max[a][bnd] = std::max(dif_max[a][bnd], di);
      }
    }
    double detv = std::abs(sp.vhat.determinant());
    if (detv < crit_tol) crit = true;
    if (crit) rep.critical_samples.push_back(th);
  }

  // E4: det grad^2 omega not identically zero per band
  {
    ConditionEntry e{"E4", CheckStatus::SampledPass, 1e300, {}, "det hess omega != 0 somewhere"};
    for (int a = 0; a < nbands; ++a) {
      e.margin = std::min(e.margin, max_det[a]);
      if (max_det[a] <= 1e-12) e.status = CheckStatus::SampledFail;
    }
    if (nbands == 0) e.status = CheckStatus::SampledFail;
    rep.entries.push_back(e);
  }

  // E5: omega_a +- omega_b not constant (vacuous for a single band)
  {
    ConditionEntry e{"E5", CheckStatus::SampledPass, 1e300, {}, "no constant band sums/differences"};
    if (nbands <= 1) {
      e.margin = 0.0;
      e.note = "single band, trivially true";
    }
    for (int a = 0; a < nbands; ++a)
      for (int b = a + 1; b < nbands; ++b) {
        double var_s = sum_max[a][b] - sum_min[a][b];
        double var_d = dif_max[a][b] - dif_min[a][b];
        double mean_s = 0.5 * (sum_max[a][b] + sum_min[a][b]);
        double mean_d = 0.5 * (dif_max[a][b] + dif_min[a][b]);
        e.margin = std::min(e.margin, std::min(var_s, var_d));
        if ((var_s < 1e-9 && std::abs(mean_s) > 1e-9) ||
            (var_d < 1e-9 && std::abs(mean_d) > 1e-9))
          e.status = CheckStatus::SampledFail;
      }
    rep.entries.push_back(e);
  }

  // E6: Riemann sums of |Vhat^{-1}| at two resolutions; a growing sum flags a
  // non-integrable singularity
  {
    ConditionEntry e{"E6", CheckStatus::SampledPass, 0.0, {}, "|Vhat^{-1}| integrable (sampled)"};
    auto riemann = [&](int m) {
      ThetaGrid g{V.d, m};
      double acc = 0.0;
      std::int64_t used = 0;
      for (std::int64_t i = 0; i < g.size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(fourier_symbol(V, g.point(i)));
        double lam = es.eigenvalues().minCoeff();
        if (lam < 1e-9) continue;  // singular cell excluded
        acc += 1.0 / lam;
        ++used;
      }
      if (used == 0) return 1e300;
      return acc / static_cast<double>(g.size());
    };
    double s1 = riemann(grid_resolution);
    double s2 = riemann(2 * grid_resolution);
    e.margin = s2 / s1;
    if (e.margin > 1.5) {
      e.status = CheckStatus::SampledFail;
      e.note = "Riemann sum grows under refinement";
    }
    rep.entries.push_back(e);
  }

  return rep;
}

}  // namespace hydrolat
