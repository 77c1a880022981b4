#include "qbl/operators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qbl/error.hpp"
#include "qbl/parallel.hpp"
#include "qbl/simd/dispatch.hpp"

namespace qbl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_same_grid(const DistributionField& a, const DistributionField& b, const char* who) {
  if (!(a.grid == b.grid)) throw DomainError(std::string(who) + ": fields live on different grids");
}

void require_finite(const DistributionField& f, const char* who) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw NumericError(std::string(who) + ": non-finite input at node " + std::to_string(i),
                         static_cast<long>(i));
}

void require_fd_range(const DistributionField& f, const KernelConfig& cfg, const char* who) {
  if (cfg.statistics != Statistics::FermiDirac) return;
  double top = 1.0 / (cfg.eps * cfg.eps * cfg.eps);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0 || f[i] > top) {
      std::ostringstream os;
      os << who << ": Fermi-Dirac input must satisfy 0 <= f <= eps^-3 = " << top << ", node " << i
         << " has " << f[i];
      throw PreconditionError(os.str());
    }
}

void check_output(const DistributionField& f, const char* who) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw NumericError(std::string(who) + ": non-finite accumulation at node " + std::to_string(i),
                         static_cast<long>(i));
}

simd::KernelTable build_table(const KernelConfig& cfg, const VelocityGrid& g,
                              const AngularQuadrature& ang) {
  if (ang.n_phi > 64) throw DomainError("collision quadrature supports n_phi <= 64");
  simd::KernelTable t;
  int mmax = 3 * (g.n - 1) * (g.n - 1);
  t.begin.assign(mmax + 2, 0);
  t.nominal_nodes_per_pair = 2LL * ang.n_r * ang.n_phi;
  double h3 = g.cell();
  std::vector<SigmaNode> sn;
  for (int m = 0; m <= mmax; ++m) {
    t.begin[m] = static_cast<std::int32_t>(t.nodes.size());
    if (m == 0) continue;
    double rm = std::sqrt(static_cast<double>(m));
    sigma_nodes(cfg, g.h * rm, ang, sn);
    for (const auto& s : sn) {
      simd::TableNode nd;
      nd.a = 0.5 - s.s * s.s;
      nd.b = rm * s.s * s.c;
      double sc = s.weight * h3 / ang.n_phi;
      nd.w[0] = sc * s.B1;
      nd.w[1] = sc * s.B2;
      nd.w[2] = sc * s.B3;
      if (nd.w[0] == 0 && nd.w[1] == 0 && nd.w[2] == 0) continue;
      t.nodes.push_back(nd);
    }
  }
  t.begin[mmax + 1] = static_cast<std::int32_t>(t.nodes.size());
  return t;
}

std::vector<double> padded(const DistributionField& f) {
  int n = f.grid.n;
  std::size_t S = n + 3;
  std::vector<double> p(S * S * S, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) p[(i + 1) + S * ((j + 1) + S * (k + 1))] = f[f.grid.index(i, j, k)];
  return p;
}

std::vector<std::int32_t> retained(const DistributionField& g, const CollisionQuadrature& q) {
  std::vector<std::int32_t> idx;
  double cut = q.vstar_mode == VstarMode::Thresholded ? q.rel_cut * g.max_abs() : -1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (q.vstar_mode == VstarMode::Thresholded && (g[i] == 0 || std::abs(g[i]) < cut)) continue;
    idx.push_back(static_cast<std::int32_t>(i));
  }
  return idx;
}

struct Prepared {
  simd::KernelTable table;
  std::vector<double> pg, ph, pr;
  std::vector<std::int32_t> vstar;
  simd::SweepArgs args;
};

// Fills the sweep arguments; pr is left empty when rho aliases g or h.
void prepare(Prepared& P, const DistributionField& g, const DistributionField& h,
             const DistributionField* rho, const KernelConfig& cfg, const CollisionQuadrature& quad) {
  P.table = build_table(cfg, g.grid, quad.angular);
  P.pg = padded(g);
  bool same_gh = &g == &h || g.values == h.values;
  if (!same_gh) P.ph = padded(h);
  const double* prho = nullptr;
  if (rho) {
    if (rho == &g || rho->values == g.values) prho = P.pg.data();
    else if (!same_gh && (rho == &h || rho->values == h.values)) prho = P.ph.data();
    else if (same_gh && (rho == &h || rho->values == h.values)) prho = P.pg.data();
    else {
      P.pr = padded(*rho);
      prho = P.pr.data();
    }
  }
  P.vstar = retained(g, quad);
  auto& a = P.args;
  a.n = g.grid.n;
  a.tricubic = quad.interpolation == Interpolation::Tricubic;
  a.pad_g = P.pg.data();
  a.pad_h = same_gh ? P.pg.data() : P.ph.data();
  a.pad_rho = prho;
  a.g = g.values.data();
  a.h = h.values.data();
  a.rho = rho ? rho->values.data() : nullptr;
  a.vstar = P.vstar.data();
  a.n_vstar = P.vstar.size();
  a.table = &P.table;
  a.cos_phi = quad.angular.cos_phi.data();
  a.sin_phi = quad.angular.sin_phi.data();
  a.n_phi = quad.angular.n_phi;
  a.s_eps3 = cfg.sign() * cfg.eps * cfg.eps * cfg.eps;
}

std::uint64_t run_sweep(const simd::SweepArgs& a, std::size_t n_out) {
  std::atomic<std::uint64_t> pairs{0};
  parallel_for(n_out, [&](std::size_t b, std::size_t e, int) {
    pairs += simd::collision_sweep(a, b, e);
  });
  return pairs.load();
}

GainLoss gain_loss_impl(const DistributionField& f, const KernelConfig& cfg,
                        const CollisionQuadrature& quad) {
  auto t0 = Clock::now();
  GainLoss out{{DistributionField(f.grid)}, {DistributionField(f.grid)}};
  Prepared P;
  prepare(P, f, f, nullptr, cfg, quad);
  P.args.mode = simd::SweepMode::GainLoss;
  P.args.out = out.gain.field.values.data();
  P.args.out2 = out.loss.field.values.data();
  std::uint64_t pairs = run_sweep(P.args, f.size());
  check_output(out.gain.field, "eval_gain_loss");
  check_output(out.loss.field, "eval_gain_loss");
  double dt = seconds_since(t0);
  out.gain.wallclock = out.loss.wallclock = dt;
  out.gain.kernel_evals = out.loss.kernel_evals = pairs * P.table.nominal_nodes_per_pair;
  return out;
}

}  // namespace

OperatorOutput eval_Q_UU(const DistributionField& f, const KernelConfig& cfg,
                         const CollisionQuadrature& quad) {
  cfg.validate();
  require_finite(f, "eval_Q_UU");
  require_fd_range(f, cfg, "eval_Q_UU");
  auto t0 = Clock::now();
  OperatorOutput out{DistributionField(f.grid)};
  out.field.meta = FieldMeta{cfg.eps, cfg.statistics};
  if (f.max_abs() == 0) {
    out.wallclock = seconds_since(t0);
    return out;
  }
  Prepared P;
  prepare(P, f, f, nullptr, cfg, quad);
  P.args.mode = simd::SweepMode::UU;
  P.args.out = out.field.values.data();
  std::uint64_t pairs = run_sweep(P.args, f.size());
  check_output(out.field, "eval_Q_UU");
  out.kernel_evals = pairs * P.table.nominal_nodes_per_pair;
  out.wallclock = seconds_since(t0);
  return out;
}

GainLoss eval_gain_loss(const DistributionField& f, const KernelConfig& cfg,
                        const CollisionQuadrature& quad) {
  cfg.validate();
  if (cfg.statistics != Statistics::FermiDirac)
    throw DomainError("eval_gain_loss: defined for Fermi-Dirac statistics");
  require_finite(f, "eval_gain_loss");
  require_fd_range(f, cfg, "eval_gain_loss");
  return gain_loss_impl(f, cfg, quad);
}

OperatorOutput eval_Q_bilinear(const DistributionField& g, const DistributionField& h, int i,
                               const KernelConfig& cfg, const CollisionQuadrature& quad) {
  cfg.validate();
  if (i < 1 || i > 3) throw DomainError("eval_Q_bilinear: component must be 1, 2 or 3");
  require_same_grid(g, h, "eval_Q_bilinear");
  require_finite(g, "eval_Q_bilinear");
  require_finite(h, "eval_Q_bilinear");
  auto t0 = Clock::now();
  OperatorOutput out{DistributionField(g.grid)};
  if (g.max_abs() == 0 || h.max_abs() == 0) return out;
  Prepared P;
  prepare(P, g, h, nullptr, cfg, quad);
  P.args.mode = simd::SweepMode::Bilinear;
  P.args.component = i;
  P.args.out = out.field.values.data();
  std::uint64_t pairs = run_sweep(P.args, g.size());
  check_output(out.field, "eval_Q_bilinear");
  out.kernel_evals = pairs * P.table.nominal_nodes_per_pair;
  out.wallclock = seconds_since(t0);
  return out;
}

OperatorOutput eval_R(const DistributionField& g, const DistributionField& h,
                      const DistributionField& rho, const KernelConfig& cfg,
                      const CollisionQuadrature& quad, std::optional<double> prefactor_eps) {
  cfg.validate();
  require_same_grid(g, h, "eval_R");
  require_same_grid(g, rho, "eval_R");
  require_finite(g, "eval_R");
  require_finite(h, "eval_R");
  require_finite(rho, "eval_R");
  auto t0 = Clock::now();
  OperatorOutput out{DistributionField(g.grid)};
  if (g.max_abs() == 0 || h.max_abs() == 0 || rho.max_abs() == 0) return out;
  Prepared P;
  prepare(P, g, h, &rho, cfg, quad);
  P.args.mode = simd::SweepMode::Cubic;
  P.args.out = out.field.values.data();
  std::uint64_t pairs = run_sweep(P.args, g.size());
  double e = prefactor_eps.value_or(cfg.eps);
  double pre = cfg.sign() * e * e * e;
  for (double& v : out.field.values) v *= pre;
  check_output(out.field, "eval_R");
  out.kernel_evals = pairs * P.table.nominal_nodes_per_pair;
  out.wallclock = seconds_since(t0);
  return out;
}

WeakFormResult weak_form(const DistributionField& f, const TestFn& phi, const KernelConfig& cfg,
                         const CollisionQuadrature& quad) {
  cfg.validate();
  require_finite(f, "weak_form");
  require_fd_range(f, cfg, "weak_form");
  auto t0 = Clock::now();
  WeakFormResult res;
  if (f.max_abs() == 0) return res;
  Prepared P;
  prepare(P, f, f, nullptr, cfg, quad);
  const VelocityGrid& g = f.grid;
  std::vector<double> phin(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = g.node(i);
    phin[i] = phi(v.x, v.y, v.z);
  }
  std::size_t m = P.vstar.size();
  std::vector<double> out(m, 0.0), sc(m, 0.0);
  simd::WeakArgs W;
  W.base = P.args;
  W.L = g.L;
  W.hstep = g.h;
  W.phi = &phi;
  W.phi_nodes = phin.data();
  W.out = out.data();
  W.scale = sc.data();
  parallel_for(m, [&](std::size_t b, std::size_t e, int) { simd::weak_sweep(W, b, e); });
  res.value = g.cell() * pairwise_sum(out.data(), m);
  res.scale = g.cell() * pairwise_sum(sc.data(), m);
  if (!std::isfinite(res.value)) throw NumericError("weak_form: non-finite accumulation", -1);
  res.wallclock = seconds_since(t0);
  return res;
}

LandauOutput eval_Q_L(const DistributionField& g, const DistributionField& h, double I3) {
  require_same_grid(g, h, "eval_Q_L");
  require_finite(g, "eval_Q_L");
  require_finite(h, "eval_Q_L");
  auto t0 = Clock::now();
  const VelocityGrid& G = g.grid;
  LandauOutput out{DistributionField(G)};
  if (g.max_abs() == 0 || h.max_abs() == 0 || I3 == 0) return out;
  const int n = G.n;
  const std::size_t N = G.size(), M = 2 * static_cast<std::size_t>(n) - 1, T = M * M * M;
  std::vector<double> tab(6 * T, 0.0);
  double h3 = G.cell();
  for (std::size_t d3 = 0; d3 < M; ++d3)
    for (std::size_t d2 = 0; d2 < M; ++d2)
      for (std::size_t r = 0; r < M; ++r) {
        Vec3 z{(static_cast<double>(n - 1) - static_cast<double>(r)) * G.h,
               (static_cast<double>(d2) - (n - 1)) * G.h, (static_cast<double>(d3) - (n - 1)) * G.h};
        Mat3 a = landau_a(I3, z);
        std::size_t k = (d3 * M + d2) * M + r;
        tab[0 * T + k] = h3 * a[0];
        tab[1 * T + k] = h3 * a[1];
        tab[2 * T + k] = h3 * a[2];
        tab[3 * T + k] = h3 * a[4];
        tab[4 * T + k] = h3 * a[5];
        tab[5 * T + k] = h3 * a[8];
      }
  DistributionField dg[3] = {spectral_derivative(g, {1, 0, 0}), spectral_derivative(g, {0, 1, 0}),
                             spectral_derivative(g, {0, 0, 1})};
  DistributionField dh[3] = {spectral_derivative(h, {1, 0, 0}), spectral_derivative(h, {0, 1, 0}),
                             spectral_derivative(h, {0, 0, 1})};
  std::vector<double> A(6 * N), b(3 * N);
  simd::LandauArgs la;
  la.n = n;
  la.tab = tab.data();
  la.g = g.values.data();
  for (int k = 0; k < 3; ++k) la.dg[k] = dg[k].values.data();
  la.A = A.data();
  la.b = b.data();
  parallel_for(N, [&](std::size_t lo, std::size_t hi, int) { simd::landau_convolve(la, lo, hi); });

  // J = A grad h - h b; diffusion part D = A grad h kept for the scale.
  DistributionField J[3] = {DistributionField(G), DistributionField(G), DistributionField(G)};
  DistributionField D[3] = {DistributionField(G), DistributionField(G), DistributionField(G)};
  const int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  for (std::size_t p = 0; p < N; ++p)
    for (int i = 0; i < 3; ++i) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += A[idx[i][j] * N + p] * dh[j][p];
      D[i][p] = s;
      J[i][p] = s - h[p] * b[i * N + p];
    }
  DistributionField q(G), dq(G);
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> al{0, 0, 0};
    al[i] = 1;
    DistributionField t = spectral_derivative(J[i], al, false);
    DistributionField u = spectral_derivative(D[i], al, false);
    for (std::size_t p = 0; p < N; ++p) {
      q[p] += t[p];
      dq[p] += u[p];
    }
  }
  check_output(q, "eval_Q_L");
  out.field = std::move(q);
  out.scale = dq.max_abs();
  out.wallclock = seconds_since(t0);
  return out;
}

WeakFormResult landau_weak_form(const DistributionField& f, const TestFn& phi, double I3,
                                const CollisionQuadrature& quad) {
  require_finite(f, "landau_weak_form");
  auto t0 = Clock::now();
  WeakFormResult res;
  if (f.max_abs() == 0 || I3 == 0) return res;
  const VelocityGrid& g = f.grid;
  std::vector<std::int32_t> list = retained(f, quad);
  std::size_t m = list.size();
  // Gradient (3) and Hessian (xx, xy, xz, yy, yz, zz) of phi at the retained nodes.
  const double d = 1e-2;
  const double c1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  const double off[4] = {-2, -1, 1, 2};
  std::vector<double> gr(3 * m), hs(6 * m);
  parallel_for(m, [&](std::size_t b, std::size_t e, int) {
    for (std::size_t k = b; k < e; ++k) {
      Vec3 v = g.node(list[k]);
      double x[3] = {v.x, v.y, v.z};
      auto at = [&](int i, double si, int j, double sj) {
        double y[3] = {x[0], x[1], x[2]};
        y[i] += si;
        y[j] += sj;
        return phi(y[0], y[1], y[2]);
      };
      double p0 = phi(x[0], x[1], x[2]);
      for (int i = 0; i < 3; ++i) {
        double s1 = 0;
        for (int a = 0; a < 4; ++a) s1 += c1[a] * at(i, off[a] * d, i, 0.0);
        gr[3 * k + i] = s1 / d;
      }
      int hi = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j, ++hi) {
          double s2 = 0;
          if (i == j) {
            s2 = (-at(i, 2 * d, i, 0) + 16 * at(i, d, i, 0) - 30 * p0 + 16 * at(i, -d, i, 0) -
                  at(i, -2 * d, i, 0)) / 12.0;
          } else {
            for (int a = 0; a < 4; ++a)
              for (int bb = 0; bb < 4; ++bb) s2 += c1[a] * c1[bb] * at(i, off[a] * d, j, off[bb] * d);
          }
          hs[6 * k + hi] = s2 / (d * d);
        }
    }
  });
  std::vector<double> out(m, 0.0), sc(m, 0.0);
  const double h6 = g.cell() * g.cell();
  parallel_for(m, [&](std::size_t b, std::size_t e, int) {
    for (std::size_t pi = b; pi < e; ++pi) {
      Vec3 v = g.node(list[pi]);
      double fp = f[list[pi]];
      double acc = 0, s = 0;
      for (std::size_t qi = 0; qi < m; ++qi) {
        if (qi == pi) continue;
        Vec3 w = g.node(list[qi]);
        Vec3 z{v.x - w.x, v.y - w.y, v.z - w.z};
        Mat3 a = landau_a(I3, z);
        double r = norm(z);
        double bs = -4.0 * std::numbers::pi * I3 / (r * r * r);
        const double* H1 = &hs[6 * pi];
        const double* H2 = &hs[6 * qi];
        double HS[6];
        for (int k = 0; k < 6; ++k) HS[k] = H1[k] + H2[k];
        double ah = a[0] * HS[0] + a[4] * HS[3] + a[8] * HS[5] + 2 * (a[1] * HS[1] + a[2] * HS[2] + a[5] * HS[4]);
        double bg = bs * (z.x * (gr[3 * pi] - gr[3 * qi]) + z.y * (gr[3 * pi + 1] - gr[3 * qi + 1]) +
                          z.z * (gr[3 * pi + 2] - gr[3 * qi + 2]));
        double ff = fp * f[list[qi]];
        acc += ff * (0.5 * ah + bg);
        s += std::abs(ff) * (0.5 * std::abs(ah) + std::abs(bg));
      }
      out[pi] = acc;
      sc[pi] = s;
    }
  });
  res.value = h6 * pairwise_sum(out.data(), m);
  res.scale = h6 * pairwise_sum(sc.data(), m);
  res.wallclock = seconds_since(t0);
  return res;
}

ProjectionCheck check_landau_matrix(double I3, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  ProjectionCheck c;
  c.min_eigen = 1e300;
  for (int s = 0; s < samples; ++s) {
    Vec3 z{nd(rng), nd(rng), nd(rng)};
    Vec3 x{nd(rng), nd(rng), nd(rng)};
    Mat3 a = landau_a(I3, z);
    double an = frobenius(a);
    if (an == 0) continue;
    c.max_az = std::max(c.max_az, norm(matvec(a, z)) / (an * norm(z)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.max_asym = std::max(c.max_asym, std::abs(a[3 * i + j] - a[3 * j + i]));
    c.min_eigen = std::min(c.min_eigen, dot(x, matvec(a, x)) / (an * dot(x, x)));
  }
  if (c.min_eigen == 1e300) c.min_eigen = 0;
  return c;
}

DistributionField project_conservation(const DistributionField& q, const DistributionField& weight) {
  require_same_grid(q, weight, "project_conservation");
  const VelocityGrid& g = q.grid;
  std::size_t N = q.size();
  bool any = weight.max_abs() > 0;
  auto psi = [](const Vec3& v, int k) {
    switch (k) {
      case 0: return 1.0;
      case 1: return v.x;
      case 2: return v.y;
      case 3: return v.z;
      default: return dot(v, v);
    }
  };
  double G[5][6] = {};
  for (std::size_t i = 0; i < N; ++i) {
    Vec3 v = g.node(i);
    double w = any ? std::abs(weight[i]) : 1.0;
    double p[5];
    for (int k = 0; k < 5; ++k) p[k] = psi(v, k);
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) G[a][b] += w * p[a] * p[b];
      G[a][5] += q[i] * p[a];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    for (int r = c + 1; r < 5; ++r)
      if (std::abs(G[r][c]) > std::abs(G[piv][c])) piv = r;
    if (G[piv][c] == 0) return q;
    if (piv != c)
      for (int k = 0; k < 6; ++k) std::swap(G[c][k], G[piv][k]);
    for (int r = 0; r < 5; ++r) {
      if (r == c) continue;
      double f = G[r][c] / G[c][c];
      for (int k = c; k < 6; ++k) G[r][k] -= f * G[c][k];
    }
  }
  double lam[5];
  for (int k = 0; k < 5; ++k) lam[k] = G[k][5] / G[k][k];
  DistributionField out = q;
  for (std::size_t i = 0; i < N; ++i) {
    Vec3 v = g.node(i);
    double w = any ? std::abs(weight[i]) : 1.0;
    double s = 0;
    for (int k = 0; k < 5; ++k) s += lam[k] * psi(v, k);
    out[i] -= w * s;
  }
  return out;
}

double operator_scale(const GainLoss& gl) { return gl.gain.field.max_abs(); }

}  // namespace qbl
