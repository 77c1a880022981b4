#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qbl::simd {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
// Selected at first use: AVX2+FMA when the CPU has them and QBL_SIMD is not "scalar".
Isa active_isa();
// Test hook; forcing Avx2 on a machine without it falls back to Scalar.
void force_isa(Isa isa);
std::string isa_name(Isa isa);

// One quadrature node of the sigma integral for a fixed squared lattice offset m.
// a = 1/2 - s^2, b = sqrt(m) s c (index units), w[i] = weight of component i+1,
// already multiplied by the v* cell volume and divided by n_phi.
struct TableNode {
  double a, b;
  double w[3];
};

struct KernelTable {
  std::vector<std::int32_t> begin;  // indexed by m, size 3(n-1)^2 + 2
  std::vector<TableNode> nodes;
  std::int64_t nominal_nodes_per_pair = 0;  // 2 n_r n_phi
};

enum class SweepMode { UU, GainLoss, Bilinear, Cubic };

struct SweepArgs {
  int n = 0;
  bool tricubic = true;
  // Padded (n+3)^3 copies, offset 1, zero outside: g read at v'_*, h at v', rho at both.
  const double* pad_g = nullptr;
  const double* pad_h = nullptr;
  const double* pad_rho = nullptr;
  // Node values.
  const double* g = nullptr;
  const double* h = nullptr;
  const double* rho = nullptr;
  const std::int32_t* vstar = nullptr;  // node indices of retained v*
  std::size_t n_vstar = 0;
  const KernelTable* table = nullptr;
  const double* cos_phi = nullptr;
  const double* sin_phi = nullptr;
  int n_phi = 0;
  SweepMode mode = SweepMode::UU;
  int component = 1;   // Bilinear only
  double s_eps3 = 0;   // +-eps^3 inside the (1 +- eps^3 f) factors
  double* out = nullptr;
  double* out2 = nullptr;  // loss for GainLoss
};

// Fills out[p] (and out2[p]) for output nodes p in [begin, end). Returns pairs visited.
std::uint64_t collision_sweep(const SweepArgs& args, std::size_t begin, std::size_t end);

// Weak-form accumulation over pairs (p, q), p in [begin, end), both from `vstar`.
struct WeakArgs {
  SweepArgs base;  // mode, fields (g = h = rho = f), table, azimuths
  double L = 0, hstep = 0;
  const std::function<double(double, double, double)>* phi = nullptr;
  const double* phi_nodes = nullptr;  // phi at grid nodes
  double* out = nullptr;      // per p: sum over q and sigma
  double* scale = nullptr;    // per p: sum of |terms| * (|phi'|+|phi'_*|+|phi|+|phi_*|)/2
};
std::uint64_t weak_sweep(const WeakArgs& args, std::size_t begin, std::size_t end);

// Landau convolution: for output nodes p in [begin, end),
//   A_c(p) = sum_q tab_c(p - q) g(q),  b_i(p) = sum_q sum_j tab_ij(p - q) dg_j(q).
// tab is component-major (a11 a12 a13 a22 a23 a33), each (2n-1)^3 with the first
// offset axis reversed. A is 6 x n^3, b is 3 x n^3 (component-major).
struct LandauArgs {
  int n = 0;
  const double* tab = nullptr;
  const double* g = nullptr;
  const double* dg[3] = {nullptr, nullptr, nullptr};
  double* A = nullptr;
  double* b = nullptr;
};
void landau_convolve(const LandauArgs& args, std::size_t begin, std::size_t end);

// Per-ISA entry points (used by the equivalence tests).
namespace scalar {
std::uint64_t collision_sweep(const SweepArgs&, std::size_t, std::size_t);
std::uint64_t weak_sweep(const WeakArgs&, std::size_t, std::size_t);
void landau_convolve(const LandauArgs&, std::size_t, std::size_t);
double tricubic(const double* pad, int n, double x, double y, double z);
}  // namespace scalar
namespace avx2 {
std::uint64_t collision_sweep(const SweepArgs&, std::size_t, std::size_t);
std::uint64_t weak_sweep(const WeakArgs&, std::size_t, std::size_t);
void landau_convolve(const LandauArgs&, std::size_t, std::size_t);
double tricubic(const double* pad, int n, double x, double y, double z);
}  // namespace avx2

}  // namespace qbl::simd
