#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "qbl/error.hpp"
#include "qbl/limit.hpp"

using namespace qbl;
using namespace qbl::test;

TEST_CASE("fit_rate recovers a synthetic power law") {
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05}, err;
  for (double e : eps) err.push_back(3.0 * std::pow(e, 1.5));
  auto fit = fit_rate(eps, err);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("fit_rate needs two positive errors") {
  CHECK_THROWS_AS(fit_rate({0.4, 0.2}, {1e-3, 0.0}), DegenerateFitError);
  CHECK_THROWS_AS(fit_rate({0.4}, {1e-3}), DegenerateFitError);
}

TEST_CASE("Landau substitute audit reports a degenerate study") {
  VelocityGrid g(8, 5);
  auto f0 = sample([](const Vec3& v) { return perturbed_maxwellian(v, 0.5); }, g);
  EvolutionConfig ec;
  ec.t_final = 0.01;
  LimitStudyOptions opt;
  opt.quad = small_quad();
  opt.substitute_landau = true;
  opt.floor_control = false;
  auto r = limit_study(f0, gaussian_cfg(0.5), {0.4, 0.2}, ec, {0, 2, 2}, 1.0, opt);
  CHECK(r.degenerate);
  for (double e : r.errors) CHECK(e == 0.0);
}

TEST_CASE("limit study validates its inputs") {
  VelocityGrid g(8, 5);
  auto f0 = sample([](const Vec3& v) { return perturbed_maxwellian(v, 0.5); }, g);
  EvolutionConfig ec;
  ec.t_final = 0.01;
  CHECK_THROWS(limit_study(f0, gaussian_cfg(0.5), {0.4, 1.5}, ec, {0, 2, 2}, 1.0));
  CHECK_THROWS(limit_study(f0, gaussian_cfg(0.5), {0.4, 0.2}, ec, {0, 2, 2}, -1.0));
}
