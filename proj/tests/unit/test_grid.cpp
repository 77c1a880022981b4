#include <cmath>
#include <filesystem>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "qbl/error.hpp"

using namespace qbl;
constexpr double kPi = std::numbers::pi;

TEST_CASE("maxwellian moments on the grid") {
  VelocityGrid g(24, 7);
  Vec3 u{0.3, -0.2, 0.1};
  auto f = sample([&](const Vec3& v) { return maxwellian(v, 2.0, u, 0.8); }, g);
  Moments m = moments(f);
  CHECK(m.mass == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m.momentum.x == doctest::Approx(2.0 * u.x).epsilon(1e-10));
  CHECK(m.momentum.y == doctest::Approx(2.0 * u.y).epsilon(1e-10));
  // energy = rho (|u|^2 + 3T)
  CHECK(m.energy == doctest::Approx(2.0 * (dot(u, u) + 3 * 0.8)).epsilon(1e-10));
}

TEST_CASE("spectral derivative of a gaussian") {
  // h = 0.25 puts the Nyquist tail of exp(-|v|^2) near 1e-17
  VelocityGrid g(64, 8);
  auto f = sample([](const Vec3& v) { return std::exp(-dot(v, v)); }, g);
  auto d = spectral_derivative(f, {1, 0, 1});
  double err = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = g.node(i);
    err = std::max(err, std::abs(d[i] - 4 * v.x * v.z * f[i]));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("interpolation reproduces nodes and low-degree polynomials") {
  VelocityGrid g(12, 6);
  auto f = sample([](const Vec3& v) { return 1 + 0.5 * v.x - 0.25 * v.y * v.z; }, g);
  for (auto s : {Interpolation::Trilinear, Interpolation::Tricubic}) {
    CHECK(interpolate(f, g.node(g.index(5, 6, 7)), s) == doctest::Approx(f[g.index(5, 6, 7)]).epsilon(1e-14));
    Vec3 p{0.3, -0.7, 1.1};  // interior, away from the padded boundary
    CHECK(interpolate(f, p, s) == doctest::Approx(1 + 0.15 + 0.25 * 0.77).epsilon(1e-12));
  }
  CHECK(interpolate(f, {9, 0, 0}, Interpolation::Tricubic) == 0.0);
}

TEST_CASE("weighted L2 norm of a gaussian") {
  VelocityGrid g(32, 8);
  auto f = sample([](const Vec3& v) { return std::exp(-0.5 * dot(v, v)); }, g);
  // || f ||_{L^2} = (pi^{3/2})^{1/2}
  CHECK(weighted_norm(f, {0, 0, 2}) == doctest::Approx(std::pow(kPi, 0.75)).epsilon(1e-10));
  CHECK(weighted_norm(f, {0, 0, INFINITY}) == doctest::Approx(f.max_abs()));
}

TEST_CASE("pairwise sum") {
  std::vector<double> x(1000, 0.1);
  CHECK(pairwise_sum(x.data(), x.size()) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("snapshot round trip") {
  VelocityGrid g(8, 5);
  auto f = sample([](const Vec3& v) { return std::exp(-dot(v, v)) * (1 + v.x); }, g);
  auto p = std::filesystem::temp_directory_path() / "qbl_unit_snapshot.skf";
  write_snapshot(p.string(), f);
  auto r = read_snapshot(p.string());
  std::filesystem::remove(p);
  CHECK(r.grid == g);
  CHECK(r.values == f.values);
}

TEST_CASE("grid rejects odd or tiny sizes") {
  CHECK_THROWS(VelocityGrid(7, 5));
  CHECK_THROWS(VelocityGrid(8, -1));
}
