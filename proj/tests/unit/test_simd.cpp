#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "qbl/simd/dispatch.hpp"

using namespace qbl;
using namespace qbl::test;

namespace {

struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::force_isa(saved); }
};

template <class Fn>
void compare(Fn fn, double tol) {
  IsaGuard guard;
  simd::force_isa(simd::Isa::Scalar);
  auto a = fn();
  simd::force_isa(simd::Isa::Avx2);
  auto b = fn();
  REQUIRE(a.size() == b.size());
  double m = 0, d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i]));
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  CHECK(d <= tol * m);
}

DistributionField field() {
  return sample([](const Vec3& v) { return 0.8 * std::exp(-0.6 * dot(v - Vec3{0.3, -0.2, 0.1}, v - Vec3{0.3, -0.2, 0.1})); },
                VelocityGrid(8, 5));
}

}  // namespace

TEST_CASE("SIMD variants agree with the scalar reference") {
  if (!simd::avx2_available()) {
    MESSAGE("AVX2 not available; scalar path only");
    return;
  }
  auto f = field();
  auto cfg = gaussian_cfg(0.5);
  for (auto in : {Interpolation::Tricubic, Interpolation::Trilinear}) {
    auto q = small_quad(in);
    compare([&] { return eval_Q_UU(f, cfg, q).field.values; }, 1e-12);
    compare([&] {
      auto gl = eval_gain_loss(f, cfg, q);
      auto v = gl.gain.field.values;
      v.insert(v.end(), gl.loss.field.values.begin(), gl.loss.field.values.end());
      return v;
    }, 1e-12);
    compare([&] { return eval_Q_bilinear(f, f, 2, cfg, q).field.values; }, 1e-12);
    compare([&] { return eval_R(f, f, f, cfg, q).field.values; }, 1e-12);
    compare([&] {
      auto w = weak_form(f, [](double x, double y, double z) { return x * x * y + z; }, cfg, q);
      return std::vector<double>{w.value, w.scale};
    }, 1e-12);
  }
  compare([&] { return eval_Q_L(f, f, 0.125).field.values; }, 1e-12);
}

TEST_CASE("ISA names") {
  CHECK(simd::isa_name(simd::Isa::Scalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::Avx2) == "avx2");
}
