#include "qbl/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

namespace qbl {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double v, double ref) {
  if (v == ref) return 0.0;
  double d = std::max(std::abs(ref), std::abs(v));
  return std::abs(v - ref) / d;
}


CheckRow equal(const std::string& name, double v, double ref, double tol) {
  double r = rel(v, ref);
  return {name, v, ref, tol, r, r <= tol};
}

// value <= reference (1 + tol)
CheckRow upper(const std::string& name, double v, double ref, double tol) {
  double r = ref != 0 ? v / ref : (v <= 0 ? 0.0 : INFINITY);
  return {name, v, ref, tol, r, v <= ref * (1 + tol) || (ref == 0 && v <= 0)};
}

// |value| <= tol (value already normalised by its scale)
CheckRow small(const std::string& name, double v, double tol) {
  return {name, v, 0.0, tol, std::abs(v), std::abs(v) <= tol};
}

double max_diff(const DistributionField& a, const DistributionField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::vector<CheckRow> kernel_checks(const KernelConfig& cfg, const AngularQuadrature& quad) {
  cfg.validate();
  std::vector<CheckRow> rows;
  const Potential& p = cfg.phi();
  double I3 = p.moment_I(3), Ip3 = p.moment_Iprime(3);
  // The substitution rule is exact up to Gauss-Legendre error; 32 nodes resolve phi^2 r^k
  // on any cutoff window to well below the tightest tolerance here.
  AngularQuadrature fine(std::max(quad.n_r, 32), quad.n_phi);

  // Subnormal components carry too few bits for a relative comparison.
  constexpr double tiny = std::numeric_limits<double>::min();
  double worst_sum = 0, worst_b2 = 0;
  for (double z : {0.1, 0.5, 1.0, 2.0, 5.0})
    for (double th : {0.0, 0.3, 0.8, kPi / 4, 1.2, kPi / 2}) {
      double b = eval_B(cfg, z, th);
      double b1 = eval_B_component(cfg, 1, z, th), b2 = eval_B_component(cfg, 2, z, th),
             b3 = eval_B_component(cfg, 3, z, th);
      // B vanishes exactly at theta = pi/2 for Fermi-Dirac; measure against the term scale
      double sc = b1 + std::abs(b2) + b3;
      if (sc >= tiny)
        worst_sum = std::max(worst_sum, std::abs(b1 + b2 + b3 - b) / sc);
      if (b1 >= tiny && b3 >= tiny) worst_b2 = std::max(worst_b2, rel(std::abs(b2), 2 * std::sqrt(b1) * std::sqrt(b3)));
    }
  rows.push_back(small("B_equals_sum_of_components", worst_sum, 1e-12));
  rows.push_back(small("abs_B2_equals_2sqrt_B1B3", worst_b2, 1e-12));

  rows.push_back(equal("l1_norm_J", l1_norm_J(cfg), 16 * kPi * kPi * I3, 1e-6));
  rows.push_back(equal("b3_mass", b3_mass(cfg, fine), 16 * kPi * kPi * I3, 1e-6));
  rows.push_back(upper("l1_norm_K_bound", l1_norm_K(cfg, 0), 64 * kPi * kPi * (I3 + Ip3), 0));

  for (double z : {0.5, 1.0, 4.0}) {
    double v = sigma_integral(cfg, Component::B1, z, 2, fine) * z * z * z;
    double ref = 8 * kPi * p.partial_moment_I(3, 0, z / (std::sqrt(2.0) * cfg.eps));
    char nm[64];
    std::snprintf(nm, sizeof nm, "sigma_B1_sin2_z%g", z);
    rows.push_back(equal(nm, v, ref, 1e-8));
    std::snprintf(nm, sizeof nm, "sigma_B1_sin2_bound_z%g", z);
    rows.push_back(upper(nm, v, 8 * kPi * I3, 1e-12));
  }

  SigmaBound sb = total_sigma_bound(cfg, fine);
  rows.push_back(upper("total_sigma_bound", sb.sup, sb.bound, 0));

  double worst_mt = 0;
  for (double z : {0.05, 0.2, 1.0, 3.0, 10.0})
    worst_mt = std::max(worst_mt, momentum_transfer(cfg, z, fine) * z * z * z);
  rows.push_back(upper("momentum_transfer_bound", worst_mt, 48 * kPi * I3, 0));

  rows.push_back(equal("psi_1_at_half_pi", psi_kappa(1, kPi / 2), std::sqrt(2.0), 1e-14));

  Vec3 z{1, 0, 0};
  LandauCoefficients lc = landau_coefficients(cfg, z, fine);
  Vec3 r2 = remainder_R2(cfg, z);
  double zn = norm(z);
  Vec3 formula = z * (-8 * kPi * I3 / (zn * zn * zn)) + r2;
  double tn = norm(lc.T);
  rows.push_back(small("T_matches_formula_with_R2", tn > 0 ? norm(lc.T - formula) / tn : norm(formula), 1e-6));
  double asym = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) asym = std::max(asym, std::abs(lc.U[3 * i + j] - lc.U[3 * j + i]));
  double un = frobenius(lc.U);
  rows.push_back(small("U_symmetric", un > 0 ? asym / un : asym, 1e-12));
  return rows;
}

double interpolation_error_estimate(const DistributionField& f,
                                   const std::function<double(const Vec3&)>& exact,
                                   Interpolation scheme) {
  const VelocityGrid& g = f.grid;
  double m = f.max_abs();
  if (m == 0) return 0;
  double worst = 0;
  for (int k = 0; k + 1 < g.n; ++k)
    for (int j = 0; j + 1 < g.n; ++j)
      for (int i = 0; i + 1 < g.n; ++i) {
        Vec3 c{g.coord(i) + 0.5 * g.h, g.coord(j) + 0.5 * g.h, g.coord(k) + 0.5 * g.h};
        worst = std::max(worst, std::abs(interpolate(f, c, scheme) - exact(c)));
      }
  return worst / m;
}

std::vector<CheckRow> operator_checks(const KernelConfig& cfg, const VelocityGrid& grid,
                                      const CollisionQuadrature& quad) {
  cfg.validate();
  std::vector<CheckRow> rows;
  DistributionField f = sample([](const Vec3& v) { return perturbed_maxwellian(v, 0.5); }, grid);
  double top = 1.0 / (cfg.eps * cfg.eps * cfg.eps);
  double amp = f.max_abs() > top ? 0.5 * top / f.max_abs() : 1.0;
  for (double& v : f.values) v *= amp;

  OperatorOutput q = eval_Q_UU(f, cfg, quad);
  OperatorOutput q1 = eval_Q_bilinear(f, f, 1, cfg, quad);
  OperatorOutput q2 = eval_Q_bilinear(f, f, 2, cfg, quad);
  OperatorOutput q3 = eval_Q_bilinear(f, f, 3, cfg, quad);
  OperatorOutput r = eval_R(f, f, f, cfg, quad);
  DistributionField sum(grid);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = q1.field[i] + q2.field[i] + q3.field[i] + r.field[i];

  double scale = q.field.max_abs();
  bool fd = cfg.statistics == Statistics::FermiDirac;
  if (fd) {
    GainLoss gl = eval_gain_loss(f, cfg, quad);
    scale = std::max(scale, operator_scale(gl));
    DistributionField d = gl.gain.field;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= gl.loss.field[i];
    rows.push_back(small("Q_UU_equals_gain_minus_loss", scale > 0 ? max_diff(q.field, d) / scale : 0.0, 1e-12));
    // Post-collision values come from the interpolant, which may overshoot [0, eps^-3].
    double over = interpolation_error_estimate(
                      f, [amp](const Vec3& v) { return amp * perturbed_maxwellian(v, 0.5); }, quad.interpolation) +
                  1e-12;
    rows.push_back(small("gain_nonnegative", scale > 0 ? std::min(0.0, gl.gain.field.min()) / scale : 0.0, over));
    rows.push_back(small("loss_nonnegative", scale > 0 ? std::min(0.0, gl.loss.field.min()) / scale : 0.0, over));
  }
  rows.push_back(small("Q_UU_equals_Q1_Q2_Q3_R", scale > 0 ? max_diff(q.field, sum) / scale : 0.0, 1e-12));
  {
    // Strong-form mass is not conserved at quadrature level; interpolation sets the residual.
    double net = pairwise_sum(q.field.values.data(), q.field.size()), l1 = 0;
    for (double v : q.field.values) l1 += std::abs(v);
    rows.push_back(small("strong_form_mass_residual", l1 > 0 ? net / l1 : 0.0, 1e-3));
  }

  const std::pair<const char*, TestFn> inv[] = {
      {"weak_conservation_mass", [](double, double, double) { return 1.0; }},
      {"weak_conservation_v1", [](double x, double, double) { return x; }},
      {"weak_conservation_v2", [](double, double y, double) { return y; }},
      {"weak_conservation_v3", [](double, double, double z) { return z; }},
      {"weak_conservation_energy", [](double x, double y, double z) { return x * x + y * y + z * z; }},
  };
  for (const auto& [name, phi] : inv) {
    WeakFormResult w = weak_form(f, phi, cfg, quad);
    rows.push_back(small(name, w.scale > 0 ? w.value / w.scale : 0.0, 1e-12));
  }

  if (fd) {
    auto feq = [&](const Vec3& v) { return fd_equilibrium(v, cfg.eps, 1, 0); };
    DistributionField e = sample(feq, grid);
    OperatorOutput qe = eval_Q_UU(e, cfg, quad);
    GainLoss gle = eval_gain_loss(e, cfg, quad);
    double s = operator_scale(gle);
    double tol = 4 * interpolation_error_estimate(e, feq, quad.interpolation) + 1e-12;
    rows.push_back(small("fd_equilibrium_residual", s > 0 ? qe.field.max_abs() / s : 0.0, tol));
  }

  double I3 = cfg.phi().moment_I(3);
  DistributionField M = sample([](const Vec3& v) { return maxwellian(v, 1, {0, 0, 0}, 1); }, grid);
  LandauOutput ql = eval_Q_L(M, M, I3);
  {
    // Spectral-derivative error of the Maxwellian sets the achievable level.
    DistributionField d = spectral_derivative(M, {1, 0, 0});
    double err = 0, mx = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      Vec3 v = grid.node(i);
      double ex = -v.x * M[i];
      err = std::max(err, std::abs(d[i] - ex));
      mx = std::max(mx, std::abs(ex));
    }
    double tol = 10 * (mx > 0 ? err / mx : 0.0) + 1e-12;
    rows.push_back(small("landau_maxwellian_residual", ql.scale > 0 ? ql.field.max_abs() / ql.scale : 0.0, tol));
  }

  ProjectionCheck pc = check_landau_matrix(I3 == 0 ? 1.0 : I3, 1000, 12345);
  rows.push_back(small("landau_a_annihilates_z", pc.max_az, 1e-12));
  rows.push_back(small("landau_a_symmetric", pc.max_asym, 1e-12));
  rows.push_back({"landau_a_psd", pc.min_eigen, 0.0, 1e-12, std::max(0.0, -pc.min_eigen), pc.min_eigen >= -1e-12});
  return rows;
}

void write_kernel_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
  os << "check,value,reference,rel_error,pass\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.6g,%s\n", r.name.c_str(), r.value, r.reference,
                  r.rel_error, r.pass ? "true" : "false");
    os << buf;
  }
}

void write_operator_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
  os << "check,value,tolerance,pass\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.6g,%s\n", r.name.c_str(), r.value, r.tolerance,
                  r.pass ? "true" : "false");
    os << buf;
  }
}

}  // namespace qbl
