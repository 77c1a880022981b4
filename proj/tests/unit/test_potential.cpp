#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qbl/error.hpp"
#include "qbl/potential.hpp"

using namespace qbl;
constexpr double kPi = std::numbers::pi;

TEST_CASE("gaussian moments match closed forms") {
  Potential p = Potential::gaussian(1, 1);
  // int exp(-2 r^2) r^a dr = Gamma((a+1)/2) / (2 * 2^((a+1)/2))
  for (double a : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    double exact = std::tgamma((a + 1) / 2) / (2 * std::pow(2.0, (a + 1) / 2));
    CHECK(p.moment_I(a) == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK(p.moment_I(3) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(p.moment_I(0) == doctest::Approx(std::sqrt(kPi / 8)).epsilon(1e-12));
}

TEST_CASE("bump I3 is 1/60") {
  Potential p = Potential::bump(1);
  CHECK(p.moment_I(3) == doctest::Approx(1.0 / 60).epsilon(1e-10));
  CHECK(p.eval(1.5) == 0.0);
}

TEST_CASE("tabulated potential reproduces its samples") {
  std::vector<double> r{0, 0.5, 1, 1.5, 2}, v{1, 0.8, 0.4, 0.1, 0};
  Potential p = Potential::tabulated(r, v);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(p.eval(r[i]) == doctest::Approx(v[i]).epsilon(1e-14));
  CHECK(p.eval(3.0) == 0.0);
}

TEST_CASE("assumption report for the gaussian") {
  AssumptionReport r = Potential::gaussian(1, 1).check_assumptions(1.0);
  CHECK(r.a1_holds);
  REQUIRE(r.a2_theta.has_value());
  CHECK(*r.a2_theta == doctest::Approx(1.0));
}

TEST_CASE("zero potential has zero moments") {
  Potential p = Potential::gaussian(0, 1);
  CHECK(p.is_zero());
  CHECK(p.moment_I(3) == 0.0);
}
