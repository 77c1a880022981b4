#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "qbl/error.hpp"

using namespace qbl;
using qbl::test::gaussian_cfg;
constexpr double kPi = std::numbers::pi;

TEST_CASE("B components at theta = pi/2") {
  // eps = 1 itself is outside (0, 1); the largest double below it changes nothing at 1e-12.
  KernelConfig c{std::nextafter(1.0, 0.0), Statistics::BoseEinstein, gaussian_cfg(0.5).potential};
  double e1 = std::exp(-1.0);
  CHECK(eval_B_component(c, 1, 1, kPi / 2) == doctest::Approx(e1).epsilon(1e-12));
  CHECK(eval_B_component(c, 3, 1, kPi / 2) == doctest::Approx(e1).epsilon(1e-12));
  CHECK(eval_B_component(c, 2, 1, kPi / 2) == doctest::Approx(2 * e1).epsilon(1e-12));
  KernelConfig fd{c.eps, Statistics::FermiDirac, c.potential};
  CHECK(eval_B(fd, 1, kPi / 2) == doctest::Approx(0.0));
}

TEST_CASE("B vanishes at z = 0 and rejects theta outside [0, pi/2]") {
  auto c = gaussian_cfg(0.5);
  CHECK(eval_B(c, 0, 0.3) == 0.0);
  CHECK_THROWS_AS(eval_B(c, 1, 2.0), DomainError);
  CHECK_THROWS_AS(eval_B_component(c, 1, 1, -0.1), DomainError);
}

TEST_CASE("psi and alpha") {
  for (double th : {0.0, 0.4, 1.1, kPi / 2}) {
    CHECK(psi_kappa(0, th) == doctest::Approx(1.0));
    CHECK(alpha_kappa(2, th) == 0.0);
    for (double k : {0.3, 1.0, 1.7}) {
      double p = psi_kappa(k, th);
      CHECK(p >= 1.0);
      CHECK(p <= std::sqrt(2.0) + 1e-15);
    }
  }
  CHECK_THROWS_AS(psi_kappa(2.5, 0.1), DomainError);
}

// Raw theta oracle: 2 pi int_0^{pi/2} B_3 sin(theta) dtheta by the trapezoid rule.
TEST_CASE("B3 sigma integral against a brute-force theta quadrature") {
  KernelConfig c{std::nextafter(1.0, 0.0), Statistics::FermiDirac, gaussian_cfg(0.5).potential};
  double z = 10;
  const int n = 1000000;
  double h = (kPi / 2) / n, acc = 0;
  for (int i = 0; i <= n; ++i) {
    double th = i * h;
    double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * eval_B_component(c, 3, z, th) * std::sin(th);
  }
  acc *= 2 * kPi * h;
  AngularQuadrature q(32, 4);
  CHECK(sigma_integral(c, Component::B3, z, 0, q) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("sigma integral of B1 sin^2 saturates at 8 pi I3") {
  auto c = gaussian_cfg(0.5);
  AngularQuadrature q(32, 4);
  double I3 = c.phi().moment_I(3), prev = 0;
  for (double z : {0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    double v = sigma_integral(c, Component::B1, z, 2, q) * z * z * z;
    CHECK(v >= prev - 1e-14);
    CHECK(v <= 8 * kPi * I3 * (1 + 1e-12));
    prev = v;
  }
  CHECK(prev == doctest::Approx(8 * kPi * I3).epsilon(1e-8));
}

TEST_CASE("cancellation kernel norm is independent of eps") {
  for (double e : {0.9, 0.5, 0.1}) {
    auto c = gaussian_cfg(e);
    CHECK(l1_norm_J(c) == doctest::Approx(2 * kPi * kPi).epsilon(1e-6));
    CHECK(cancellation_J(c, 0) == 0.0);
  }
}

TEST_CASE("landau matrix annihilates z") {
  Mat3 a = landau_a(0.125, {1, 2, -0.5});
  Vec3 z{1, 2, -0.5};
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j) s += a[3 * i + j] * (j == 0 ? z.x : j == 1 ? z.y : z.z);
    CHECK(std::abs(s) < 1e-15);
  }
}

TEST_CASE("change of variable at kappa = 0 is exact") {
  auto c = gaussian_cfg(0.5);
  TestFunction f;
  AngularQuadrature q(8, 8);
  auto r = change_of_variable_residual(c, f, 0.0, q, {0, 0, 0});
  CHECK(r.residual <= 1e-12 * std::max(1.0, std::abs(r.lhs)));
}
