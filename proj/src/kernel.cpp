#include "qbl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbl/error.hpp"

namespace qbl {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_theta(double theta) {
  if (!(theta >= 0 && theta <= kPi / 2))
    throw DomainError("theta must lie in [0, pi/2] (hemisphere convention)");
}

AdaptiveOptions tight() {
  AdaptiveOptions o;
  o.abs_tol = 1e-12;
  o.max_intervals = 50000;
  return o;
}
}  // namespace

KernelConfig::KernelConfig(double e, Statistics s, std::shared_ptr<const Potential> p)
    : eps(e), statistics(s), potential(std::move(p)) {
  validate();
}

void KernelConfig::validate() const {
  if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
  if (!potential) throw DomainError("kernel config has no potential");
}

AngularQuadrature::AngularQuadrature(int nr, int nphi) : n_r(nr), n_phi(nphi) {
  if (nr < 4) throw DomainError("n_r must be >= 4");
  if (nphi < 4) throw DomainError("n_phi must be >= 4");
  radial = gauss_legendre(nr);
  cos_phi.resize(nphi);
  sin_phi.resize(nphi);
  for (int j = 0; j < nphi; ++j) {
    // Exact values on the axes keep the quarter-turn symmetry bit-exact.
    int q4 = 4 * j;
    if (q4 % nphi == 0) {
      int k = (q4 / nphi) % 4;
      const double cs[4] = {1, 0, -1, 0}, sn[4] = {0, 1, 0, -1};
      cos_phi[j] = cs[k];
      sin_phi[j] = sn[k];
    } else {
      double ph = 2 * kPi * j / nphi;
      cos_phi[j] = std::cos(ph);
      sin_phi[j] = std::sin(ph);
    }
  }
  if (nphi % 4 == 0) {
    // Quarter-turn images computed, not re-evaluated, so the node set is closed exactly.
    int q = nphi / 4;
    for (int j = 0; j < q; ++j)
      for (int k = 1; k < 4; ++k) {
        int jj = j + k * q;
        double c = cos_phi[j], s = sin_phi[j];
        for (int r = 0; r < k; ++r) {
          double t = c;
          c = -s;
          s = t;
        }
        cos_phi[jj] = c;
        sin_phi[jj] = s;
      }
  }
}

double eval_B_component(const KernelConfig& cfg, int i, double z, double theta) {
  if (!(z >= 0)) throw DomainError("eval_B_component: z must be >= 0");
  check_theta(theta);
  if (i < 1 || i > 3) throw DomainError("eval_B_component: component must be 1, 2 or 3");
  if (z == 0) return 0;
  const Potential& p = cfg.phi();
  double e4 = std::pow(cfg.eps, -4);
  double ps = p.eval_unchecked(z * std::sin(theta / 2) / cfg.eps);
  double pc = p.eval_unchecked(z * std::cos(theta / 2) / cfg.eps);
  switch (i) {
    case 1:
      return e4 * z * ps * ps;
    case 2:
      return cfg.sign() * 2 * e4 * z * ps * pc;
    default:
      return e4 * z * pc * pc;
  }
}

double eval_B(const KernelConfig& cfg, double z, double theta) {
  if (!(z >= 0)) throw DomainError("eval_B: z must be >= 0");
  check_theta(theta);
  if (z == 0) return 0;
  const Potential& p = cfg.phi();
  double ps = p.eval_unchecked(z * std::sin(theta / 2) / cfg.eps);
  double pc = p.eval_unchecked(z * std::cos(theta / 2) / cfg.eps);
  double s = ps + cfg.sign() * pc;
  return std::pow(cfg.eps, -4) * z * s * s;
}

void sigma_nodes(const KernelConfig& cfg, double z, const AngularQuadrature& quad,
                 std::vector<SigmaNode>& out) {
  out.clear();
  if (!(z > 0)) return;
  const Potential& p = cfg.phi();
  double eps = cfg.eps, rc = p.square_cutoff_radius();
  if (rc <= 0) return;
  double e4z = std::pow(eps, -4) * z, jac = eps / z, sgn = cfg.sign();
  const Rule& g = quad.radial;

  double hi = std::min(z * kInvSqrt2 / eps, rc);
  if (hi > 0) {
    double c0 = 0.5 * hi, h0 = 0.5 * hi;
    for (int k = 0; k < quad.n_r; ++k) {
      double r = c0 + h0 * g.x[k];
      double s = r * jac, c = std::sqrt(std::max(0.0, 1 - s * s));
      double ps = p.eval_unchecked(r), pc = p.eval_unchecked(z * c / eps);
      double w = 2 * kPi * 4 * s * jac * h0 * g.w[k];
      out.push_back({s, c, w, e4z * ps * ps, sgn * 2 * e4z * ps * pc, 0.0, false});
    }
  }
  double lo = z * kInvSqrt2 / eps, top = std::min(z / eps, rc);
  if (top > lo) {
    double c0 = 0.5 * (lo + top), h0 = 0.5 * (top - lo);
    for (int k = 0; k < quad.n_r; ++k) {
      double r = c0 + h0 * g.x[k];
      double c = r * jac, s = std::sqrt(std::max(0.0, 1 - c * c));
      double pc = p.eval_unchecked(r);
      double w = 2 * kPi * 4 * c * jac * h0 * g.w[k];
      out.push_back({s, c, w, 0.0, 0.0, e4z * pc * pc, true});
    }
  }
}

double sigma_integral(const KernelConfig& cfg, Component comp, double z, double b,
                      const AngularQuadrature& quad) {
  if (!(z > 0)) throw DomainError("sigma_integral: z must be > 0");
  if (!(b >= 0)) throw DomainError("sigma_integral: sin power must be >= 0");
  std::vector<SigmaNode> nodes;
  sigma_nodes(cfg, z, quad, nodes);
  double acc = 0;
  for (const auto& n : nodes) {
    double B = 0;
    switch (comp) {
      case Component::B1: B = n.B1; break;
      case Component::B2: B = n.B2; break;
      case Component::B3: B = n.B3; break;
      case Component::All: B = n.B1 + n.B2 + n.B3; break;
    }
    acc += n.weight * B * (b == 0 ? 1.0 : std::pow(n.s, b));
  }
  return acc;
}

SigmaBound total_sigma_bound(const KernelConfig& cfg, const AngularQuadrature& quad) {
  SigmaBound out;
  for (int k = 0; k < 200; ++k) {
    double z = std::pow(10.0, -3.0 + 6.0 * k / 199.0);
    double v = sigma_integral(cfg, Component::All, z, 0, quad);
    if (v > out.sup) {
      out.sup = v;
      out.z_at_sup = z;
    }
  }
  out.bound = 2 * (8 * std::sqrt(2.0) * kPi) * std::pow(cfg.eps, -3) * cfg.phi().moment_I(0);
  return out;
}

double momentum_transfer(const KernelConfig& cfg, double z, const AngularQuadrature& quad) {
  if (!(z > 0)) throw DomainError("momentum_transfer: z must be > 0");
  // 1 - cos(theta) = 2 sin^2(theta/2)
  return 2 * sigma_integral(cfg, Component::All, z, 2, quad);
}

double psi_kappa(double kappa, double theta) {
  if (!(kappa >= 0 && kappa <= 2)) throw DomainError("psi_kappa: kappa must lie in [0, 2]");
  check_theta(theta);
  double c = std::cos(theta / 2), s = std::sin(theta / 2), k1 = 1 - kappa;
  return 1 / std::sqrt(c * c + k1 * k1 * s * s);
}

double alpha_kappa(double kappa, double theta) {
  if (!(kappa >= 0 && kappa <= 2)) throw DomainError("alpha_kappa: kappa must lie in [0, 2]");
  check_theta(theta);
  double h = 1 - kappa / 2;
  return h * h * (h + (kappa / 2) * std::cos(theta));
}

double TestFunction::operator()(const Vec3& x) const {
  Vec3 d = x - center;
  double q = dot(d, d) / T;
  double g = std::exp(-0.5 * q);
  return polynomial ? (1 + q) * g : g;
}

ChangeOfVariableResult change_of_variable_residual(const KernelConfig& cfg, const TestFunction& f,
                                                   double kappa, const AngularQuadrature& quad,
                                                   const Vec3& v_star) {
  if (!(kappa >= 0 && kappa <= 1)) throw DomainError("change_of_variable: kappa must lie in [0, 1]");
  const Potential& p = cfg.phi();
  double eps = cfg.eps, sgn = cfg.sign(), rc = p.cutoff_radius(), e4 = std::pow(eps, -4);
  ChangeOfVariableResult res;
  if (rc <= 0 || p.is_zero()) return res;

  // Local frame: v_star at the origin, the test-function center on the third axis.
  Vec3 axis = f.center - v_star;
  double D = norm(axis);
  double rf = std::sqrt(2 * f.T * 46.0);  // f below ~1e-20 of its peak past rf
  double rho_max = std::sqrt(2.0) * (D + rf);

  Rule rho_rule = composite_gauss_legendre(8, 32, 0.0, rho_max);
  Rule mu_rule = gauss_legendre(32);
  int nphi = quad.n_phi;
  double dphi = 2 * kPi / nphi;

  auto g = [&](const Vec3& x) {
    Vec3 d{x.x, x.y, x.z - D};
    double q = dot(d, d) / f.T;
    double e = std::exp(-0.5 * q);
    return f.polynomial ? (1 + q) * e : e;
  };
  auto kern = [&](double rho, double s, double c) {
    double a = p.eval_unchecked(rho * s / eps), b = p.eval_unchecked(rho * c / eps);
    double t = a + sgn * b;
    return e4 * rho * t * t;
  };

  double lhs = 0, rhs = 0;
  for (std::size_t ir = 0; ir < rho_rule.x.size(); ++ir) {
    double rho = rho_rule.x[ir], wr = rho_rule.w[ir] * rho * rho;
    // sin(theta/2) panels split where the kernel supports end.
    std::vector<double> cuts{0.0};
    double s1 = eps * rc / rho;
    if (s1 < kInvSqrt2) cuts.push_back(s1);
    double c1 = eps * rc / rho;
    if (c1 > kInvSqrt2 && c1 < 1) {
      double s2 = std::sqrt(1 - c1 * c1);
      if (s2 > cuts.back()) cuts.push_back(s2);
    }
    cuts.push_back(kInvSqrt2);
    std::vector<double> sx, sw;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      Rule r = gauss_legendre(quad.n_r, cuts[k], cuts[k + 1]);
      sx.insert(sx.end(), r.x.begin(), r.x.end());
      sw.insert(sw.end(), r.w.begin(), r.w.end());
    }
    for (std::size_t im = 0; im < mu_rule.x.size(); ++im) {
      double mu = mu_rule.x[im], wm = mu_rule.w[im];
      double st = std::sqrt(std::max(0.0, 1 - mu * mu));
      Vec3 uh{st, 0, mu}, e1{mu, 0, -st}, e2{0, 1, 0};
      Vec3 u = uh * rho;
      for (std::size_t is = 0; is < sx.size(); ++is) {
        double s = sx[is], c = std::sqrt(1 - s * s);
        double ws = sw[is] * 4 * s * dphi;
        double cth = 1 - 2 * s * s, sth = 2 * s * c;
        double psi = psi_kappa(kappa, 2 * std::asin(s));
        double bl = kern(rho, s, c);
        double br = kern(rho * psi, s, c) * psi * psi * psi;
        double fr = g(u);
        double acc_l = 0;
        for (int j = 0; j < nphi; ++j) {
          Vec3 sig = uh * cth + (e1 * quad.cos_phi[j] + e2 * quad.sin_phi[j]) * sth;
          Vec3 x = u * (1 - kappa / 2) + sig * (kappa * rho / 2);
          acc_l += g(x);
        }
        lhs += wr * wm * ws * bl * acc_l;
        rhs += wr * wm * ws * br * fr * nphi;
      }
    }
  }
  // Axial symmetry about the v_star -> center line contributes the factor 2 pi.
  res.lhs = 2 * kPi * lhs;
  res.rhs = 2 * kPi * rhs;
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

double cancellation_J(const KernelConfig& cfg, double u) {
  if (!(u >= 0)) throw DomainError("cancellation_J: u must be >= 0");
  if (u == 0) return 0;
  const Potential& p = cfg.phi();
  double eps = cfg.eps, hi = std::min(1.0, eps * p.cutoff_radius() / u);
  if (hi <= kInvSqrt2) return 0;
  auto f = [&](double r) {
    double v = p.eval_unchecked(u * r / eps);
    return v * v * r;
  };
  double in = integrate_adaptive(f, kInvSqrt2, hi, tight()).value;
  return 8 * kPi * std::pow(eps, -4) * u * in;
}

double l1_norm_J(const KernelConfig& cfg) {
  const Potential& p = cfg.phi();
  double rc = p.cutoff_radius();
  if (rc <= 0) return 0;
  double top = std::sqrt(2.0) * cfg.eps * rc;
  auto f = [&](double u) { return 4 * kPi * u * u * cancellation_J(cfg, u); };
  AdaptiveOptions o;
  o.abs_tol = 1e-11;
  return integrate_adaptive(f, 0, top, o, {cfg.eps * rc}).value;
}

double cancellation_K1(const KernelConfig& cfg, double u) {
  if (!(u >= 0)) throw DomainError("cancellation_K: u must be >= 0");
  if (u == 0) return 0;
  const Potential& p = cfg.phi();
  double eps = cfg.eps, hi = std::min(kInvSqrt2, eps * p.cutoff_radius() / u);
  if (hi <= 0) return 0;
  double pu = p.eval_unchecked(u / eps);
  auto f = [&](double r) {
    return p.eval_unchecked(u * r / eps) * (pu - p.eval_unchecked(u * std::sqrt(1 - r * r) / eps)) * r;
  };
  double in = integrate_adaptive(f, 0, hi, tight()).value;
  return 16 * kPi * std::pow(eps, -4) * u * in;
}

double cancellation_K2(const KernelConfig& cfg, double u) {
  if (!(u >= 0)) throw DomainError("cancellation_K: u must be >= 0");
  if (u == 0) return 0;
  const Potential& p = cfg.phi();
  double eps = cfg.eps, hi = std::min(1.0, eps * p.cutoff_radius() / u);
  double pu = p.eval_unchecked(u / eps);
  if (hi <= kInvSqrt2 || pu == 0) return 0;
  auto f = [&](double r) { return p.eval_unchecked(u * r / eps) * r; };
  double in = integrate_adaptive(f, kInvSqrt2, hi, tight()).value;
  return 16 * kPi * std::pow(eps, -4) * u * pu * in;
}

double cancellation_K(const KernelConfig& cfg, double u) {
  return cancellation_K1(cfg, u) + cancellation_K2(cfg, u);
}

double l1_norm_K(const KernelConfig& cfg, double vartheta) {
  if (!(vartheta >= 0 && vartheta <= 1)) throw DomainError("l1_norm_K: vartheta must lie in [0, 1]");
  const Potential& p = cfg.phi();
  double rc = p.cutoff_radius();
  if (rc <= 0) return 0;
  double top = std::sqrt(2.0) * cfg.eps * rc;
  auto f = [&](double u) {
    return 4 * kPi * std::pow(u, 2 + vartheta) * std::abs(cancellation_K(cfg, u));
  };
  AdaptiveOptions o;
  o.abs_tol = 1e-10;
  o.max_intervals = 4000;
  return integrate_adaptive(f, 0, top, o, {cfg.eps * rc}).value;
}

double b3_mass(const KernelConfig& cfg, const AngularQuadrature& quad) {
  double rc = cfg.phi().cutoff_radius();
  if (rc <= 0) return 0;
  double e = cfg.eps;
  auto f = [&](double z) {
    if (z <= 0) return 0.0;
    return 4 * kPi * z * z * sigma_integral(cfg, Component::B3, z, 0, quad);
  };
  AdaptiveOptions o;
  o.abs_tol = 1e-11;
  return integrate_adaptive(f, 0, std::sqrt(2.0) * e * rc, o, {e * rc}).value;
}

Mat3 landau_a(double I3, const Vec3& z) {
  double r = norm(z);
  Mat3 a{};
  if (r == 0) return a;
  double c = 2 * kPi * I3 / r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[3 * i + j] = c * ((i == j ? 1.0 : 0.0) - z[i] * z[j] / (r * r));
  return a;
}

LandauCoefficients landau_coefficients(const KernelConfig& cfg, const Vec3& z,
                                       const AngularQuadrature& quad) {
  double zn = norm(z);
  if (!(zn > 0)) throw DomainError("landau_coefficients: z must be nonzero");
  const Potential& p = cfg.phi();
  double eps = cfg.eps;
  double W = std::min(zn * kInvSqrt2 / eps, p.cutoff_radius());
  // m_k = \int_0^W phi_hat^2 r^k dr by the B1 substitution nodes.
  double m3 = 0, m5 = 0;
  if (W > 0) {
    Rule r = gauss_legendre(quad.n_r, 0, W);
    for (int k = 0; k < quad.n_r; ++k) {
      double v = p.eval_unchecked(r.x[k]);
      double t = v * v * r.x[k] * r.x[k] * r.x[k];
      m3 += r.w[k] * t;
      m5 += r.w[k] * t * r.x[k] * r.x[k];
    }
  }
  Vec3 zh = z / zn, e1, e2;
  transverse_frame(zh, e1, e2);
  // \int B1 s^3 ds = m3 / |z|^3,  \int B1 s^5 ds = eps^2 m5 / |z|^5.
  double b3 = m3 / (zn * zn * zn), b5 = eps * eps * m5 / std::pow(zn, 5);
  LandauCoefficients out;
  out.T = z * (-8 * kPi * b3);
  double alpha = 4 * kPi * zn * zn * b5;
  double beta = 2 * kPi * zn * zn * (b3 - b5);
  Mat3 zz = outer(zh, zh), p1 = outer(e1, e1), p2 = outer(e2, e2);
  for (int i = 0; i < 9; ++i) out.U[i] = alpha * zz[i] + beta * (p1[i] + p2[i]);
  return out;
}

Vec3 remainder_R2(const KernelConfig& cfg, const Vec3& z) {
  double zn = norm(z);
  if (!(zn > 0)) throw DomainError("remainder_R2: z must be nonzero");
  const Potential& p = cfg.phi();
  double tail = p.partial_moment_I(3, zn * kInvSqrt2 / cfg.eps, p.cutoff_radius());
  return z * (8 * kPi * tail / (zn * zn * zn));
}

Mat3 remainder_R3(const KernelConfig& cfg, const Vec3& z, const AngularQuadrature&) {
  double zn = norm(z);
  if (!(zn > 0)) throw DomainError("remainder_R3: z must be nonzero");
  const Potential& p = cfg.phi();
  double eps = cfg.eps, W = zn * kInvSqrt2 / eps;
  double tail3 = p.partial_moment_I(3, W, p.cutoff_radius());
  double head5 = p.partial_moment_I(5, 0, W);
  double cpi = 2 * kPi / zn * (-tail3 - eps * eps * head5 / (zn * zn));
  double czz = 4 * kPi * eps * eps * head5 / std::pow(zn, 5);
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double pij = (i == j ? 1.0 : 0.0) - z[i] * z[j] / (zn * zn);
      out[3 * i + j] = cpi * pij + czz * z[i] * z[j];
    }
  return out;
}

}  // namespace qbl
