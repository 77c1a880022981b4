#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "qbl/error.hpp"

using namespace qbl;
using namespace qbl::test;

namespace {

DistributionField bump_field(const VelocityGrid& g, Vec3 c, double amp) {
  return sample([=](const Vec3& v) { return amp * std::exp(-0.7 * dot(v - c, v - c)); }, g);
}

DistributionField swap_xy(const DistributionField& f) {
  DistributionField out(f.grid);
  int n = f.grid.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out[f.grid.index(j, i, k)] = f[f.grid.index(i, j, k)];
  return out;
}

}  // namespace

TEST_CASE("decomposition and gain-loss identities") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.5);
  auto q = small_quad();
  auto f = bump_field(g, {0.2, -0.1, 0.3}, 1.0);
  auto full = eval_Q_UU(f, cfg, q);
  auto gl = eval_gain_loss(f, cfg, q);
  double s = operator_scale(gl);
  DistributionField sum(g), diff(g);
  auto q1 = eval_Q_bilinear(f, f, 1, cfg, q), q2 = eval_Q_bilinear(f, f, 2, cfg, q),
       q3 = eval_Q_bilinear(f, f, 3, cfg, q);
  auto r = eval_R(f, f, f, cfg, q);
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum[i] = q1.field[i] + q2.field[i] + q3.field[i] + r.field[i];
    diff[i] = gl.gain.field[i] - gl.loss.field[i];
  }
  CHECK(max_diff(full.field, sum) <= 1e-12 * s);
  CHECK(max_diff(full.field, diff) <= 1e-12 * s);
  CHECK(full.kernel_evals > 0);
}

// Thresholding picks v* from the data, so exact linearity holds for the full-grid sum only.
TEST_CASE("bilinear forms are linear in each slot for signed data") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.4, Statistics::BoseEinstein);
  auto q = small_quad();
  q.vstar_mode = VstarMode::FullGrid;
  auto a = bump_field(g, {0.5, 0, 0}, 1.0), b = bump_field(g, {-0.4, 0.3, 0}, -0.6),
       h = bump_field(g, {0, 0, 0.2}, 0.8);
  DistributionField ab(g);
  for (std::size_t i = 0; i < g.size(); ++i) ab[i] = 2 * a[i] - 3 * b[i];
  for (int c : {1, 2, 3}) {
    auto lhs = eval_Q_bilinear(ab, h, c, cfg, q).field;
    auto qa = eval_Q_bilinear(a, h, c, cfg, q).field, qb = eval_Q_bilinear(b, h, c, cfg, q).field;
    DistributionField rhs(g);
    for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = 2 * qa[i] - 3 * qb[i];
    CHECK(max_diff(lhs, rhs) <= 1e-12 * std::max(1e-300, rhs.max_abs()));
  }
}

TEST_CASE("weak form conserves mass, momentum and energy") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.5);
  auto q = small_quad();
  auto f = bump_field(g, {0.3, 0.1, -0.2}, 1.0);
  const TestFn phis[] = {[](double, double, double) { return 1.0; },
                         [](double x, double, double) { return x; },
                         [](double, double, double z) { return z; },
                         [](double x, double y, double z) { return x * x + y * y + z * z; }};
  for (const auto& phi : phis) {
    auto w = weak_form(f, phi, cfg, q);
    CHECK(std::abs(w.value) <= 1e-12 * w.scale);
  }
  auto w = weak_form(f, [](double x, double, double) { return x * x * x * x; }, cfg, q);
  CHECK(std::abs(w.value) > 1e-8 * w.scale);
}

TEST_CASE("Q_UU commutes with the x-y axis swap") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.5);
  auto q = small_quad();
  auto f = bump_field(g, {0.4, -0.3, 0.1}, 1.0);
  auto a = swap_xy(eval_Q_UU(f, cfg, q).field);
  auto b = eval_Q_UU(swap_xy(f), cfg, q).field;
  CHECK(max_diff(a, b) <= 1e-12 * a.max_abs());
}

TEST_CASE("Fermi-Dirac input outside [0, eps^-3] is rejected") {
  VelocityGrid g(8, 5);
  auto cfg = gaussian_cfg(0.5);
  auto f = bump_field(g, {0, 0, 0}, 9.0);
  CHECK_THROWS_AS(eval_Q_UU(f, cfg, small_quad()), PreconditionError);
  f[0] = -1;
  CHECK_THROWS_AS(eval_gain_loss(f, cfg, small_quad()), PreconditionError);
}

TEST_CASE("gain-loss split requires Fermi-Dirac") {
  VelocityGrid g(8, 5);
  auto f = bump_field(g, {0, 0, 0}, 1.0);
  CHECK_THROWS_AS(eval_gain_loss(f, gaussian_cfg(0.5, Statistics::BoseEinstein), small_quad()), DomainError);
}

TEST_CASE("Landau operator annihilates the Maxwellian up to spectral error") {
  VelocityGrid g(16, 6);
  auto M = sample([](const Vec3& v) { return maxwellian(v, 1, {0, 0, 0}, 1); }, g);
  auto ql = eval_Q_L(M, M, 0.125);
  CHECK(ql.field.max_abs() <= 1e-3 * ql.scale);
  auto pc = check_landau_matrix(0.125, 200, 7);
  CHECK(pc.max_az < 1e-12);
  CHECK(pc.min_eigen >= -1e-12);
}

TEST_CASE("conservation projection zeroes the five moments") {
  VelocityGrid g(8, 5);
  auto w = bump_field(g, {0, 0, 0}, 1.0);
  auto q = bump_field(g, {0.5, 0.2, 0}, 0.3);
  auto p = project_conservation(q, w);
  Moments m = moments(p);
  CHECK(std::abs(m.mass) < 1e-12);
  CHECK(std::abs(m.momentum.x) < 1e-12);
  CHECK(std::abs(m.energy) < 1e-12);
}
