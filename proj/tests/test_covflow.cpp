#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "hydrolat/covflow.hpp"

using namespace hydrolat;

namespace {

InteractionMatrix chain() { return build_nearest_neighbor(1, {1.0}, {1.0}); }

CovarianceProfile bump_profile() {
  return product_profile(TProfile::gaussian_bump(0.5), gibbs_spectral(chain(), 1.0));
}

CovarianceProfile flat_profile() {
  return product_profile(TProfile::constant(1.0), gibbs_spectral(chain(), 1.0));
}

ScaledQuery query(double tau, double kappa, double r, double eps, int zmax) {
  ScaledQuery q;
  q.tau = tau;
  q.kappa = kappa;
  q.r = RVec::Constant(1, r);
  q.eps = eps;
  q.offsets = offset_range(1, zmax);
  return q;
}

}  // namespace

TEST_CASE("propagation at t = 0 returns the initial covariance") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  ScaledQuery q = query(0.0, 1.0, 0.4, 0.1, 2);
  PairCov cov = propagate_covariance(v, p, q);
  int base = static_cast<int>(std::floor(0.4 / 0.1));
  for (const auto& [pr, c] : cov) {
    Mat expect = covariance_Q(p, 0.1, {base + pr.first[0]}, {base + pr.second[0]});
    CHECK(sup_norm(Mat(c.m - expect)) < 1e-9);
  }
}

TEST_CASE("Gibbs equilibrium covariance is flow-invariant") {
  InteractionMatrix v = chain();
  CovarianceProfile p = flat_profile();
  for (double t : {1.0, 10.0}) {
    ScaledQuery q = query(t, 1.0, 0.0, 1.0, 2);  // time() = t
    PairCov cov = propagate_covariance(v, p, q);
    for (const auto& [pr, c] : cov) {
      Mat expect = covariance_Q(p, 1.0, pr.first, pr.second);
      CHECK(sup_norm(Mat(c.m - expect)) < 1e-9);
    }
  }
}

TEST_CASE("self-adjointness and PSD diagonal of propagated covariances") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  ScaledQuery q = query(1.0, 1.0, 0.5, 0.1, 2);
  PairCov cov = propagate_covariance(v, p, q);

  for (const auto& [pr, c] : cov) {
    OffsetPair swapped{pr.second, pr.first};
    const BlockCov& ct = cov.at(swapped);
    // Q^{ij}(x,y) = Q^{ji}(y,x)^T as a block identity on the 2n matrix
    CHECK(sup_norm(Mat(c.m - ct.m.transpose())) < 1e-12);
  }

  // diagonal pair: full 2n block PSD within tolerance
  const BlockCov& diag = cov.at({{0}, {0}});
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (diag.m + diag.m.adjoint())));
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  // entries stay bounded (uniform boundedness across the sweep)
  for (const auto& [pr, c] : cov) CHECK(sup_norm(c.m) < 10.0);
}

TEST_CASE("auto box accommodates propagation and observation") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  ScaledQuery q = query(1.0, 1.0, 0.5, 0.1, 2);
  Box box = auto_box(v, p, q, false);
  double speed = 1.1 * max_group_speed(v);
  CHECK(box.extents[0] >= 2 * (speed * 10.0 + 5 + 2));
  CHECK(box.power_of_two());
}

TEST_CASE("empirical covariance agrees with deterministic propagation") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  ScaledQuery q = query(1.0, 1.0, 0.5, 0.1, 1);
  PairCov det = propagate_covariance(v, p, q);
  auto emp = empirical_covariance(v, p, q, 2000, 31337, 2);

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
  CHECK(static_cast<double>(hits) / cells >= 0.95);
}

TEST_CASE("empirical covariance is deterministic and stderr scales as n^{-1/2}") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  ScaledQuery q = query(0.5, 1.0, 0.3, 0.1, 1);

  auto a = empirical_covariance(v, p, q, 200, 99, 1);
  auto b = empirical_covariance(v, p, q, 200, 99, 2);
  for (const auto& [pr, ea] : a) {
    CHECK(sup_norm(Mat(ea.mean.m - b.at(pr).mean.m)) == 0.0);
    CHECK(sup_norm(Mat(ea.stderr_.m - b.at(pr).stderr_.m)) == 0.0);
  }

  std::vector<int> sizes{200, 400, 800};
  std::vector<double> lse;
  for (int ns : sizes) {
    auto e = empirical_covariance(v, p, q, ns, 1234, 2);
    double acc = 0.0;
    int cnt = 0;
    for (const auto& [pr, ec] : e) {
      acc += ec.stderr_.m.real().mean();
      ++cnt;
    }
    lse.push_back(std::log(acc / cnt));
  }
  double slope = (lse[2] - lse[0]) / (std::log(800.0) - std::log(200.0));
  CHECK(slope < -0.4);
  CHECK(slope > -0.6);
}

TEST_CASE("half-space covariance: boundary zeros and t = 0 restriction") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();

  // r1 = 0: base site on the boundary; offsets with z1 = 0 hit the plane
  ScaledQuery q = query(1.0, 1.0, 0.0, 0.1, 0);
  q.offsets = {{{0}, {0}}, {{0}, {2}}, {{1}, {0}}, {{1}, {2}}, {{2}, {3}}};
  PairCov cov = halfspace_covariance(v, p, q);
  CHECK(sup_norm(cov.at({{0}, {0}}).m) < 1e-12);
  CHECK(sup_norm(cov.at({{0}, {2}}).m) < 1e-12);
  CHECK(sup_norm(cov.at({{1}, {0}}).m) < 1e-12);
  CHECK(sup_norm(cov.at({{1}, {2}}).m) > 1e-4);

  // t = 0: restricted covariance with boundary zeroing
  ScaledQuery q0 = query(0.0, 1.0, 0.8, 0.1, 0);
  q0.offsets = {{{0}, {0}}, {{0}, {1}}, {{-2}, {3}}};
  PairCov c0 = halfspace_covariance(v, p, q0);
  int base = 8;
  for (const auto& [pr, c] : c0) {
    Mat expect = covariance_Q(p, 0.1, {base + pr.first[0]}, {base + pr.second[0]});
    CHECK(sup_norm(Mat(c.m - expect)) < 1e-9);
  }

  CHECK_THROWS_AS(halfspace_covariance(v, p, query(1.0, 1.0, -0.5, 0.1, 1)),
                  InvalidParameterError);
}

TEST_CASE("half-space covariance far from the boundary matches full space") {
  InteractionMatrix v = chain();
  CovarianceProfile p = bump_profile();
  // r1/eps = 60 sites with tau/eps = 5 time units: images cannot matter
  ScaledQuery q = query(0.5, 1.0, 6.0, 0.1, 1);
  PairCov half = halfspace_covariance(v, p, q);
  PairCov full = propagate_covariance(v, p, q);
  for (const auto& [pr, c] : half)
    CHECK(sup_norm(Mat(c.m - full.at(pr).m)) < 1e-8);
}
