#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "qbl/error.hpp"
#include "qbl/evolve.hpp"

using namespace qbl;
using namespace qbl::test;

TEST_CASE("RK4 on f' = -f has fourth-order error") {
  VelocityGrid g(8, 5);
  DistributionField f0(g);
  for (double& v : f0.values) v = 1.0;
  Model m = Model::from([](const DistributionField& f) {
    DistributionField r = f;
    for (double& v : r.values) v = -v;
    return r;
  });
  double errs[2];
  int k = 0;
  for (double dt : {0.1, 0.05}) {
    DistributionField f = f0;
    int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int s = 0; s < steps; ++s) f = rk4_step(f, dt, m, false, false);
    errs[k++] = std::abs(f[0] - std::exp(-1.0));
  }
  CHECK(errs[0] < 1e-6);
  CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("run hits t_final exactly and records diagnostics") {
  VelocityGrid g(8, 5);
  auto f0 = sample([](const Vec3& v) { return maxwellian(v, 1, {0, 0, 0}, 1); }, g);
  EvolutionConfig ec;
  ec.t_final = 0.03;
  ec.dt = 0.007;
  auto r = run(f0, Model::landau(0.125), ec);
  CHECK_FALSE(r.blew_up);
  CHECK(r.steps * r.dt == doctest::Approx(0.03).epsilon(1e-14));
  CHECK(r.dt <= 0.007);
  CHECK(r.diagnostics.back().t == doctest::Approx(0.03));
  CHECK(r.diagnostics.front().mass == doctest::Approx(r.diagnostics.back().mass).epsilon(1e-10));
}

TEST_CASE("Fermi-Dirac evolution keeps the ceiling") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.5);
  auto f0 = sample([](const Vec3& v) { return 7.5 * std::exp(-dot(v, v)); }, g);
  EvolutionConfig ec;
  ec.t_final = 0.05;
  auto r = run(f0, Model::uu(cfg, small_quad()), ec);
  CHECK(r.final_state.max() <= 8.0 * (1 + 1e-8));
}

TEST_CASE("Fermi-Dirac initial data above eps^-3 is rejected") {
  VelocityGrid g(8, 5);
  auto f0 = sample([](const Vec3& v) { return 9.0 * std::exp(-dot(v, v)); }, g);
  CHECK_THROWS_AS(run(f0, Model::uu(gaussian_cfg(0.5), small_quad()), EvolutionConfig{}), PreconditionError);
}

TEST_CASE("blow-up is reported, not thrown") {
  VelocityGrid g(8, 5);
  DistributionField f0(g);
  for (double& v : f0.values) v = 1.0;
  Model m = Model::from([](const DistributionField& f) {
    DistributionField r = f;
    for (double& v : r.values) v = 50 * v * v;
    return r;
  });
  EvolutionConfig ec;
  ec.t_final = 1.0;
  ec.dt = 0.01;
  auto r = run(f0, m, ec);
  CHECK(r.blew_up);
  CHECK(r.blowup_time < 1.0);
}
