#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qbl/potential.hpp"
#include "qbl/quadrature.hpp"
#include "qbl/vec3.hpp"

namespace qbl {

enum class Statistics { BoseEinstein, FermiDirac };

inline double stat_sign(Statistics s) { return s == Statistics::BoseEinstein ? 1.0 : -1.0; }

struct KernelConfig {
  double eps = 0.5;
  Statistics statistics = Statistics::FermiDirac;
  std::shared_ptr<const Potential> potential;

  KernelConfig() = default;
  KernelConfig(double e, Statistics s, std::shared_ptr<const Potential> p);
  const Potential& phi() const { return *potential; }
  double sign() const { return stat_sign(statistics); }
  void validate() const;
};

// n_r Gauss-Legendre nodes per substituted radial window, n_phi equispaced azimuths
// phi_j = 2 pi j / n_phi. The azimuth set is closed under negation, and under a
// quarter turn when n_phi % 4 == 0.
struct AngularQuadrature {
  int n_r = 8;
  int n_phi = 8;
  Rule radial;  // on [-1, 1]
  std::vector<double> cos_phi, sin_phi;

  AngularQuadrature() : AngularQuadrature(8, 8) {}
  AngularQuadrature(int nr, int nphi);
};

enum class Component { B1 = 1, B2 = 2, B3 = 3, All = 0 };

double eval_B_component(const KernelConfig& cfg, int i, double z, double theta);
double eval_B(const KernelConfig& cfg, double z, double theta);

// One node of the substituted sigma quadrature for a fixed |z|. `weight` already carries
// the hemisphere measure 4 s ds (or 4 c dc) and the full azimuth 2 pi; B1..B3 are the
// kernel components at the node (zero where the component does not use this group).
struct SigmaNode {
  double s, c;
  double weight;
  double B1, B2, B3;
  bool cos_group;
};

// Sin group: r = z sin(theta/2)/eps over [0, min(z/(sqrt2 eps), Rc)] carrying B1, B2.
// Cos group: r = z cos(theta/2)/eps over [z/(sqrt2 eps), min(z/eps, Rc)] carrying B3.
// Empty windows produce no nodes.
void sigma_nodes(const KernelConfig& cfg, double z, const AngularQuadrature& quad,
                 std::vector<SigmaNode>& out);

// \int_{S^2_+} B_i(z, theta) sin^b(theta/2) dsigma.
double sigma_integral(const KernelConfig& cfg, Component comp, double z, double b,
                      const AngularQuadrature& quad);

struct SigmaBound {
  double sup = 0;      // sup over the log-spaced z scan of \int B dsigma
  double z_at_sup = 0;
  double bound = 0;    // 2 (8 sqrt2 pi) eps^-3 I_0
};
SigmaBound total_sigma_bound(const KernelConfig& cfg, const AngularQuadrature& quad);

// \int B (1 - cos theta) dsigma.
double momentum_transfer(const KernelConfig& cfg, double z, const AngularQuadrature& quad);

double psi_kappa(double kappa, double theta);
double alpha_kappa(double kappa, double theta);

// Radial test functions P(|x-c|^2 / T) exp(-|x-c|^2 / (2T)), P(q) = 1 or 1 + q.
struct TestFunction {
  Vec3 center{0, 0, 0};
  double T = 1.0;
  bool polynomial = false;
  double operator()(const Vec3& x) const;
};

struct ChangeOfVariableResult {
  double lhs = 0, rhs = 0, residual = 0;
};
// Both sides of the intermediate-point change of variables at fixed v_star, by tensor
// quadrature in (|u|, polar angle of u about the v_star -> center axis, sin(theta/2),
// azimuth). quad.n_r sets nodes per sin(theta/2) panel, quad.n_phi the azimuths.
ChangeOfVariableResult change_of_variable_residual(const KernelConfig& cfg, const TestFunction& f,
                                                   double kappa, const AngularQuadrature& quad,
                                                   const Vec3& v_star);

double cancellation_J(const KernelConfig& cfg, double u);
double l1_norm_J(const KernelConfig& cfg);
double cancellation_K1(const KernelConfig& cfg, double u);
double cancellation_K2(const KernelConfig& cfg, double u);
double cancellation_K(const KernelConfig& cfg, double u);
double l1_norm_K(const KernelConfig& cfg, double vartheta);

// Radially reduced \int_{R^3} \int B_3 dsigma dz.
double b3_mass(const KernelConfig& cfg, const AngularQuadrature& quad);

struct LandauCoefficients {
  Vec3 T;
  Mat3 U;
};
LandauCoefficients landau_coefficients(const KernelConfig& cfg, const Vec3& z,
                                       const AngularQuadrature& quad);
// a(z) = 2 pi I3 |z|^-1 (I - z z^T / |z|^2); zero at z = 0.
Mat3 landau_a(double I3, const Vec3& z);
// Remainders of the T and U expansions about their Landau values.
Vec3 remainder_R2(const KernelConfig& cfg, const Vec3& z);
Mat3 remainder_R3(const KernelConfig& cfg, const Vec3& z, const AngularQuadrature& quad);

}  // namespace qbl
