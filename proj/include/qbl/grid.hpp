#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qbl/kernel.hpp"
#include "qbl/vec3.hpp"

namespace qbl {

// Nodes v_j = -L + j h, h = 2L/n, j in {0..n-1}^3, j1 fastest in storage.
struct VelocityGrid {
  int n = 16;
  double L = 6.0;
  double h = 0.75;

  VelocityGrid() = default;
  VelocityGrid(int n_, double L_);
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double coord(int j) const { return -L + j * h; }
  Vec3 node(std::size_t idx) const;
  std::size_t index(int i1, int i2, int i3) const {
    return static_cast<std::size_t>(i1) + static_cast<std::size_t>(n) * (i2 + static_cast<std::size_t>(n) * i3);
  }
  double cell() const { return h * h * h; }
  bool operator==(const VelocityGrid& o) const { return n == o.n && L == o.L; }
};

struct FieldMeta {
  double eps = 0;
  Statistics statistics = Statistics::FermiDirac;
};

struct DistributionField {
  VelocityGrid grid;
  std::vector<double> values;
  std::optional<FieldMeta> meta;

  DistributionField() = default;
  explicit DistributionField(const VelocityGrid& g) : grid(g), values(g.size(), 0.0) {}
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
  double max_abs() const;
  double max() const;
  double min() const;
};

DistributionField sample(const std::function<double(const Vec3&)>& fn, const VelocityGrid& grid);

enum class Interpolation { Trilinear, Tricubic };

// Zero outside the node hull [-L, L-h]^3. Tricubic uses Catmull-Rom weights with
// zero padding beyond the outermost nodes.
double interpolate(const DistributionField& f, const Vec3& point, Interpolation scheme);

// Periodic DFT differentiation, |alpha| <= 3, Nyquist mode dropped for odd orders.
// Warns once if the field does not decay near the boundary.
DistributionField spectral_derivative(const DistributionField& f, std::array<int, 3> alpha,
                                      bool decay_check = true);

struct NormSpec {
  int N = 0;
  double l = 0;
  double p = 2;  // 1, 2, or infinity
};

// sum_{|alpha| <= N} || (1+|v|^2)^{l/2} d^alpha f ||_{L^p}, h^3 cell weights.
double weighted_norm(const DistributionField& f, const NormSpec& spec);

struct Moments {
  double mass = 0;
  Vec3 momentum;
  double energy = 0;
};
Moments moments(const DistributionField& f);

// Pairwise sum with fixed split points, independent of thread count.
double pairwise_sum(const double* x, std::size_t n);

// Built-in densities.
double maxwellian(const Vec3& v, double rho, const Vec3& u, double T);
double fd_equilibrium(const Vec3& v, double eps, double beta, double c);
// M(v) (1 + delta (v1^2 - v2^2) exp(-|v|^2/4)), nonnegative for |delta| <= e/4.
double perturbed_maxwellian(const Vec3& v, double delta);

// Snapshot format: "SKF1", n (int64 LE), L (float64 LE), then n^3 float64 LE, j1 fastest.
void write_snapshot(const std::string& path, const DistributionField& f);
DistributionField read_snapshot(const std::string& path);
// CSV with header v1,v2,v3,f.
void write_field_csv(const std::string& path, const DistributionField& f);

}  // namespace qbl
