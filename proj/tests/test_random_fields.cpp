#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hydrolat/profile.hpp"

using namespace hydrolat;

namespace {

InteractionMatrix chain() { return build_nearest_neighbor(1, {1.0}, {1.0}); }

RVec theta1(double t) {
  RVec v(1);
  v[0] = t;
  return v;
}

CovarianceProfile bump_profile() {
  return product_profile(TProfile::gaussian_bump(0.5), gibbs_spectral(chain(), 1.0));
}

}  // namespace

TEST_CASE("gibbs spectral densities") {
  CovarianceProfile g = gibbs_spectral(chain(), 1.0);
  // Vhat(pi) = 5, so q00 = 1/5 and q11 = 1
  CHECK(g.q00_hat(theta1(pi))(0, 0).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(g.q11_hat(theta1(pi))(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.q00_hat(theta1(0.0))(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

  CovarianceProfile g2 = gibbs_spectral(chain(), 2.0);
  CHECK(g2.q00_hat(theta1(pi))(0, 0).real() == doctest::Approx(0.4).epsilon(1e-12));

  // massless d=1 has singular Vhat at 0: Gibbs covariance undefined
  CHECK_THROWS_AS(gibbs_spectral(build_nearest_neighbor(1, {1.0}, {0.0}), 1.0),
                  InvalidParameterError);
}

TEST_CASE("product profile covariance values") {
  CovarianceProfile p = bump_profile();

  // stationary part: T == 1 gives dependence on z - z' only
  CovarianceProfile flat = product_profile(TProfile::constant(1.0), gibbs_spectral(chain(), 1.0));
  Mat a = covariance_Q(flat, 0.1, {3}, {1});
  Mat b = covariance_Q(flat, 0.1, {12}, {10});
  CHECK(sup_norm(Mat(a - b)) < 1e-12);

  // q0(0) from the spectral density oracle: q11(0) = mean of qhat11 = 1
  Mat c = covariance_Q(p, 0.1, {0}, {0});
  CHECK(c(1, 1).real() == doctest::Approx(1.5).epsilon(1e-9));  // T(0) * q11(0)

  // cross blocks vanish for Gibbs
  CHECK(std::abs(c(0, 1)) < 1e-12);
  CHECK(std::abs(c(1, 0)) < 1e-12);

  // product formula at separated sites: sqrt(T(1) T(-1)) q0(20)
  Mat far = covariance_Q(p, 0.1, {10}, {-10});
  const auto& f = p.q0_cached();
  double expected = std::sqrt(p.T((RVec(1) << 1.0).finished()) *
                              p.T((RVec(1) << -1.0).finished())) *
                    f.q00[f.box.index({20})](0, 0);
  CHECK(far(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));

  // diagonal covariance blocks are PSD at z = z'
  CHECK(c(0, 0).real() > 0.0);
  CHECK(c(1, 1).real() > 0.0);

  // self-adjointness Q^{ij}(z,z') = Q^{ji}(z',z)^T
  Mat q1 = covariance_Q(p, 0.1, {4}, {-2});
  Mat q2 = covariance_Q(p, 0.1, {-2}, {4});
  CHECK(sup_norm(Mat(q1 - q2.transpose())) < 1e-12);
}

TEST_CASE("sampler: determinism, realness, variance") {
  CovarianceProfile p = bump_profile();
  Box box = Box::cubic(1, 256);

  FieldState s1 = sample_field(p, 0.1, box, 2024);
  FieldState s2 = sample_field(p, 0.1, box, 2024);
  CHECK((s1.v0 - s2.v0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.v1 - s2.v1).cwiseAbs().maxCoeff() == 0.0);

  FieldState s3 = sample_field(p, 0.1, box, 2025);
  CHECK((s1.v0 - s3.v0).cwiseAbs().maxCoeff() > 1e-3);

  // empirical variance of v1 at the origin: T(0) * q11(0) = 1.5
  int nsamples = 4000;
  double acc = 0.0, acc2 = 0.0;
  std::int64_t origin = box.index({0});
  for (int s = 0; s < nsamples; ++s) {
    FieldState x = sample_field(p, 0.1, box, 5000 + s);
    double v = x.v1(0, origin);
    acc += v * v;
    acc2 += v * v * v * v;
  }
  double mean = acc / nsamples;
  double var_of_sq = acc2 / nsamples - mean * mean;
  double se = std::sqrt(var_of_sq / nsamples);
  CHECK(std::abs(mean - 1.5) < 3.0 * se);

  // constant profile: Var(v1) = 1
  CovarianceProfile flat = product_profile(TProfile::constant(1.0), gibbs_spectral(chain(), 1.0));
  acc = 0.0;
  for (int s = 0; s < nsamples; ++s) {
    FieldState x = sample_field(flat, 0.1, box, 9000 + s);
    acc += x.v1(0, origin) * x.v1(0, origin);
  }
  CHECK(std::abs(acc / nsamples - 1.0) < 0.08);
}

TEST_CASE("sampler covariance matches covariance_Q on a panel") {
  CovarianceProfile p = bump_profile();
  Box box = Box::cubic(1, 128);
  const int nsamples = 3000;
  std::vector<std::pair<int, int>> panel{{0, 0}, {1, 0}, {3, 0}, {0, -2}, {5, 2}, {-4, -4}};

  std::vector<RMat> acc(panel.size(), RMat::Zero(2, 2));
  std::vector<RMat> acc2(panel.size(), RMat::Zero(2, 2));
  for (int s = 0; s < nsamples; ++s) {
    FieldState x = sample_field(p, 0.1, box, 777 + s);
    for (std::size_t k = 0; k < panel.size(); ++k) {
      auto [za, zb] = panel[k];
      std::int64_t ia = box.index({za}), ib = box.index({zb});
      RMat outer(2, 2);
      outer(0, 0) = x.v0(0, ia) * x.v0(0, ib);
      outer(0, 1) = x.v0(0, ia) * x.v1(0, ib);
      outer(1, 0) = x.v1(0, ia) * x.v0(0, ib);
      outer(1, 1) = x.v1(0, ia) * x.v1(0, ib);
      acc[k] += outer;
      acc2[k] += outer.array().square().matrix();
    }
  }
  int hits = 0, cells = 0;
  for (std::size_t k = 0; k < panel.size(); ++k) {
    auto [za, zb] = panel[k];
    Mat expect = covariance_Q(p, 0.1, {za}, {zb});
    RMat mean = acc[k] / nsamples;
    RMat var = acc2[k] / nsamples - mean.array().square().matrix();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double se = std::sqrt(std::max(var(i, j), 1e-30) / nsamples);
        ++cells;
        if (std::abs(mean(i, j) - expect(i, j).real()) <= 3.0 * se) ++hits;
      }
  }
  CHECK(static_cast<double>(hits) / cells >= 0.95);
}

TEST_CASE("periodization tail is recorded and small for the massive chain") {
  CovarianceProfile p = bump_profile();
  const auto& f = p.q0_cached();
  CHECK(f.periodization_tail < 1e-8);
}

TEST_CASE("profile verification") {
  ProfileReport rep = verify_profile(bump_profile(), {0.1, 0.05});
  CHECK(rep.entry("I1").status == CheckStatus::SampledPass);
  CHECK(rep.entry("I1").margin > 1.0);  // decays faster than (1+|z|)^{-d}
  CHECK(rep.entry("I2").status == CheckStatus::SampledPass);
  CHECK(rep.entry("I3").status == CheckStatus::SampledPass);
  CHECK(rep.entry("I4'").status == CheckStatus::SampledPass);
  CHECK(rep.entry("I4'").margin > 4.0);  // N > d + 3
  CHECK(rep.all_pass());

  // massless d=1: spectral density is singular, the realized q0 does not
  // decay, and I1 must be flagged
  CovarianceProfile bad;
  bad.d = 1;
  bad.n = 1;
  bad.T = TProfile::gaussian_bump(0.5);
  InteractionMatrix v0 = build_nearest_neighbor(1, {1.0}, {0.0});
  bad.q00_hat = [v0](const RVec& th) -> Mat {
    Mat m = fourier_symbol(v0, th);
    if (std::abs(m(0, 0)) < 1e-9) return Mat::Zero(1, 1);
    return m.inverse();
  };
  bad.q11_hat = [](const RVec&) -> Mat { return Mat::Identity(1, 1); };
  ProfileReport brep = verify_profile(bad, {0.1});
  CHECK(brep.entry("I1").status == CheckStatus::SampledFail);
}
