#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hydrolat/dispersion.hpp"

using namespace hydrolat;

namespace {

RVec theta1(double t) {
  RVec v(1);
  v[0] = t;
  return v;
}

InteractionMatrix chain(double gamma, double m) {
  return build_nearest_neighbor(1, {gamma}, {m});
}

}  // namespace

TEST_CASE("nearest-neighbor interaction blocks") {
  InteractionMatrix v = build_nearest_neighbor(1, {1.0}, {0.0});
  CHECK(v.at({0})(0, 0) == doctest::Approx(2.0));
  CHECK(v.at({1})(0, 0) == doctest::Approx(-1.0));
  CHECK(v.at({-1})(0, 0) == doctest::Approx(-1.0));
  CHECK(v.at({2})(0, 0) == doctest::Approx(0.0));

  InteractionMatrix vm = chain(1.0, 1.0);
  CHECK(vm.at({0})(0, 0) == doctest::Approx(3.0));

  InteractionMatrix v2 = build_nearest_neighbor(2, {1.0}, {0.0});
  CHECK(v2.at({0, 0})(0, 0) == doctest::Approx(4.0));
  CHECK(v2.at({1, 0})(0, 0) == doctest::Approx(-1.0));
  CHECK(v2.at({0, -1})(0, 0) == doctest::Approx(-1.0));
  CHECK(v2.at({1, 1})(0, 0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(build_nearest_neighbor(1, {-1.0}, {0.0}), InvalidParameterError);
  CHECK_THROWS_AS(build_nearest_neighbor(1, {0.0}, {0.0}), InvalidParameterError);
}

TEST_CASE("fourier symbol of the chain") {
  // 2 gamma (1 - cos theta) + m^2
  CHECK(fourier_symbol(chain(1.0, 0.0), theta1(pi))(0, 0).real() == doctest::Approx(4.0));
  CHECK(fourier_symbol(chain(1.0, 1.0), theta1(0.0))(0, 0).real() == doctest::Approx(1.0));

  InteractionMatrix v2 = build_nearest_neighbor(2, {1.0}, {0.0});
  RVec th(2);
  th << pi / 2, pi / 2;
  CHECK(fourier_symbol(v2, th)(0, 0).real() == doctest::Approx(4.0));

  // Hermitian within 1e-12 on a sample of angles
  for (double t : {0.3, 1.1, 2.7}) {
    Mat m = fourier_symbol(v2, (RVec(2) << t, 0.4 * t).finished());
    CHECK(sup_norm(Mat(m - m.adjoint())) < 1e-12);
  }
}

TEST_CASE("spectral data of the massive chain") {
  InteractionMatrix v = chain(1.0, 1.0);
  SpectralPoint sp = spectral_data(v, theta1(pi / 2));
  REQUIRE(sp.bands.size() == 1);
  // omega = sqrt(3 - 2 cos theta), derivatives from the closed form
  double w = std::sqrt(3.0);
  CHECK(sp.bands[0].omega == doctest::Approx(w).epsilon(1e-12));
  CHECK(sp.bands[0].grad_omega[0] == doctest::Approx(1.0 / w).epsilon(1e-10));
  CHECK(sp.bands[0].hess_omega(0, 0) == doctest::Approx(-1.0 / (3.0 * w)).epsilon(1e-10));

  SpectralPoint sp0 = spectral_data(chain(1.0, 0.0), theta1(pi / 2));
  CHECK(sp0.bands[0].omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("projector algebra across a theta sample") {
  std::vector<double> gammas{1.0, 2.0};
  std::vector<double> masses{1.0, 0.5};
  InteractionMatrix v = build_nearest_neighbor(1, gammas, masses);
  for (int k = 1; k < 16; ++k) {
    RVec th = theta1(-pi + 2.0 * pi * k / 16.0 + 0.013);
    SpectralPoint sp;
    try {
      sp = spectral_data(v, th);
    } catch (const CriticalSetError&) {
      continue;
    }
    Mat sum = Mat::Zero(v.n, v.n);
    Mat rebuilt = Mat::Zero(v.n, v.n);
    double prev = -1.0;
    for (const Band& b : sp.bands) {
      CHECK(b.omega > prev);
      prev = b.omega;
      sum += b.projector;
      rebuilt += b.omega * b.projector;
      CHECK(sup_norm(Mat(b.projector * b.projector - b.projector)) < 1e-10);
    }
    CHECK(sup_norm(Mat(sum - Mat::Identity(v.n, v.n))) < 1e-10);
    CHECK(sup_norm(Mat(rebuilt - sp.omega_matrix)) < 1e-10);
    CHECK(sup_norm(Mat(sp.omega_matrix * sp.omega_matrix - sp.vhat)) < 1e-10);
    // orthogonality between distinct bands
    for (std::size_t a = 0; a < sp.bands.size(); ++a)
      for (std::size_t b2 = a + 1; b2 < sp.bands.size(); ++b2)
        CHECK(sup_norm(Mat(sp.bands[a].projector * sp.bands[b2].projector)) < 1e-10);
  }
}

TEST_CASE("finite differences converge to the closed-form derivatives at O(h^2)") {
  // run the generic fd path by dropping the family tag
  InteractionMatrix v = chain(1.0, 1.0);
  InteractionMatrix generic = v;
  generic.nn.reset();

  SpectralPoint exact = spectral_data(v, theta1(0.9));
  SpectralOptions o1;
  o1.fd_step = 1e-3;
  SpectralOptions o2;
  o2.fd_step = 5e-4;
  SpectralPoint fd1 = spectral_data(generic, theta1(0.9), o1);
  SpectralPoint fd2 = spectral_data(generic, theta1(0.9), o2);

  double e1 = std::abs(fd1.bands[0].hess_omega(0, 0) - exact.bands[0].hess_omega(0, 0));
  double e2 = std::abs(fd2.bands[0].hess_omega(0, 0) - exact.bands[0].hess_omega(0, 0));
  double ratio = e1 / e2;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  CHECK(std::abs(fd1.bands[0].grad_omega[0] - exact.bands[0].grad_omega[0]) < 1e-6);
}

TEST_CASE("symbol is even for the nearest-neighbor family") {
  InteractionMatrix v = build_nearest_neighbor(2, {1.0, 0.7}, {1.0, 0.2});
  for (double t : {0.4, 1.3}) {
    RVec th(2);
    th << t, -0.7 * t;
    CHECK(sup_norm(Mat(fourier_symbol(v, th) - fourier_symbol(v, RVec(-th)))) < 1e-12);
  }
}

TEST_CASE("condition report: massive chain passes, massless d=1 fails E6") {
  ConditionReport good = check_conditions(chain(1.0, 1.0), 64);
  CHECK(good.all_pass());
  // C_0 empty: Vhat(0) = m^2 = 1
  CHECK(std::abs(fourier_symbol(chain(1.0, 1.0), theta1(0.0))(0, 0)) > 0.5);

  ConditionReport massless = check_conditions(chain(1.0, 0.0), 64);
  CHECK(massless.entry("E6").status == CheckStatus::SampledFail);

  // constructed E2 violation carries a witness
  InteractionMatrix bad = chain(1.0, 1.0);
  bad.nn.reset();
  bad.support[{1}](0, 0) = -0.5;  // V(-1) != V(1)^T now
  ConditionReport rep = check_conditions(bad, 16);
  CHECK(rep.entry("E2").status == CheckStatus::Fail);
  CHECK(!rep.entry("E2").witnesses.empty());
}

TEST_CASE("third derivative matches an independent difference of the closed form") {
  InteractionMatrix v = chain(1.0, 1.0);
  double th = 1.1;
  auto omega = [&](double t) { return std::sqrt(3.0 - 2.0 * std::cos(t)); };
  double h = 1e-4;
  // five-point third derivative of omega directly
  double ref = (omega(th + 2 * h) - 2 * omega(th + h) + 2 * omega(th - h) - omega(th - 2 * h)) /
               (2 * h * h * h);
  double got = omega_third_derivative(v, theta1(th), 0);
  CHECK(got == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("max group speed of the reference chain") {
  // max |omega'| = sqrt((1 - u^2)/(3 - 2u)) at u = (3 - sqrt 5)/2
  double u = (3.0 - std::sqrt(5.0)) / 2.0;
  double expected = std::sqrt((1.0 - u * u) / (3.0 - 2.0 * u));
  CHECK(max_group_speed(chain(1.0, 1.0)) == doctest::Approx(expected).epsilon(1e-3));
}
