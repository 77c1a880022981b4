#include "qbl/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace qbl::simd {

namespace {

bool detect_avx2() {
#if defined(QBL_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("QBL_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return detect_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& current() {
  static std::atomic<int> isa{static_cast<int>(initial_isa())};
  return isa;
}

}  // namespace

bool avx2_available() {
  static const bool ok = detect_avx2();
  return ok;
}

Isa active_isa() { return static_cast<Isa>(current().load()); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  current().store(static_cast<int>(isa));
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::uint64_t collision_sweep(const SweepArgs& a, std::size_t b, std::size_t e) {
#if defined(QBL_HAVE_AVX2_TU)
  if (active_isa() == Isa::Avx2) return avx2::collision_sweep(a, b, e);
#endif
  return scalar::collision_sweep(a, b, e);
}

std::uint64_t weak_sweep(const WeakArgs& a, std::size_t b, std::size_t e) {
#if defined(QBL_HAVE_AVX2_TU)
  if (active_isa() == Isa::Avx2) return avx2::weak_sweep(a, b, e);
#endif
  return scalar::weak_sweep(a, b, e);
}

void landau_convolve(const LandauArgs& a, std::size_t b, std::size_t e) {
#if defined(QBL_HAVE_AVX2_TU)
  if (active_isa() == Isa::Avx2) return avx2::landau_convolve(a, b, e);
#endif
  scalar::landau_convolve(a, b, e);
}

#if !defined(QBL_HAVE_AVX2_TU)
// Without the AVX2 unit the avx2 entry points alias the scalar ones.
namespace avx2 {
std::uint64_t collision_sweep(const SweepArgs& a, std::size_t b, std::size_t e) {
  return scalar::collision_sweep(a, b, e);
}
std::uint64_t weak_sweep(const WeakArgs& a, std::size_t b, std::size_t e) {
  return scalar::weak_sweep(a, b, e);
}
void landau_convolve(const LandauArgs& a, std::size_t b, std::size_t e) {
  scalar::landau_convolve(a, b, e);
}
double tricubic(const double* pad, int n, double x, double y, double z) {
  return scalar::tricubic(pad, n, x, y, z);
}
}  // namespace avx2
#endif

}  // namespace qbl::simd
