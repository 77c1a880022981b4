#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"

namespace qbl {

enum class VstarMode { FullGrid, Thresholded };

struct CollisionQuadrature {
  AngularQuadrature angular{8, 8};
  VstarMode vstar_mode = VstarMode::Thresholded;
  double rel_cut = 1e-10;  // Thresholded: skip v* with |g(v*)| < rel_cut * max |g|
  Interpolation interpolation = Interpolation::Tricubic;
};

struct OperatorOutput {
  DistributionField field;
  double wallclock = 0;
  std::uint64_t kernel_evals = 0;  // visited (v, v*) pairs times 2 n_r n_phi
};

// Q_UU^eps(f). For Fermi-Dirac, requires 0 <= f <= eps^-3.
OperatorOutput eval_Q_UU(const DistributionField& f, const KernelConfig& cfg,
                         const CollisionQuadrature& quad);

struct GainLoss {
  OperatorOutput gain, loss;
};
GainLoss eval_gain_loss(const DistributionField& f, const KernelConfig& cfg,
                        const CollisionQuadrature& quad);

// Q_i(g, h) = \int B_i (g'_* h' - g_* h) dsigma dv_*.
OperatorOutput eval_Q_bilinear(const DistributionField& g, const DistributionField& h, int i,
                               const KernelConfig& cfg, const CollisionQuadrature& quad);

// R(g, h, rho) = +-eps^3 \int B (g'_* h' (rho + rho_*) - g_* h (rho' + rho'_*)).
// prefactor_eps replaces the eps of the explicit eps^3 while the kernel keeps cfg.eps.
OperatorOutput eval_R(const DistributionField& g, const DistributionField& h,
                      const DistributionField& rho, const KernelConfig& cfg,
                      const CollisionQuadrature& quad, std::optional<double> prefactor_eps = {});

using TestFn = std::function<double(double, double, double)>;

struct WeakFormResult {
  double value = 0;
  double scale = 0;  // sum of |integrand| * (|phi'|+|phi'_*|+|phi|+|phi_*|)/2
  double wallclock = 0;
};
// Symmetrized <Q_UU^eps(f), phi> with phi evaluated analytically at post-collision points.
WeakFormResult weak_form(const DistributionField& f, const TestFn& phi, const KernelConfig& cfg,
                         const CollisionQuadrature& quad);

struct LandauOutput {
  DistributionField field;
  double scale = 0;  // max |div(A_g grad h)|, the diffusion half of the operator
  double wallclock = 0;
};
// Q_L(g, h) with a(z) = 2 pi I3 |z|^-1 Pi(z), direct convolution, zero self cell.
LandauOutput eval_Q_L(const DistributionField& g, const DistributionField& h, double I3);

// <Q_L(f,f), phi> as a pair sum over the same v, v* nodes the collision weak form uses:
//   1/2 sum h^6 f f_* [a(z):(D2 phi + D2 phi_*) + 2 b(z).(grad phi - grad phi_*)],
// b = div a = -4 pi I3 z/|z|^3, z = v - v* != 0. Derivatives of phi by 4th-order differences.
WeakFormResult landau_weak_form(const DistributionField& f, const TestFn& phi, double I3,
                                const CollisionQuadrature& quad);

// a(z) z and symmetry/PSD diagnostics on a random sample of z (deterministic seed).
struct ProjectionCheck {
  double max_az = 0;        // max |a(z) z| / (|a| |z|)
  double max_asym = 0;      // max |a - a^T|
  double min_eigen = 0;     // smallest eigenvalue over the sample, scaled by |a|
};
ProjectionCheck check_landau_matrix(double I3, int samples, unsigned seed);

// Least-squares correction of an operator output onto zero mass, momentum and energy,
// weighted by |f| (or 1 where f vanishes everywhere).
DistributionField project_conservation(const DistributionField& q, const DistributionField& weight);

// Scale used by tolerances: max over nodes of the gain part of Q_UU.
double operator_scale(const GainLoss& gl);

}  // namespace qbl
