#include "qbl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qbl/error.hpp"
#include "qbl/log.hpp"
#include "qbl/parallel.hpp"

namespace qbl {

VelocityGrid::VelocityGrid(int n_, double L_) : n(n_), L(L_), h(2 * L_ / n_) {
  if (n_ < 8 || n_ % 2 != 0) throw DomainError("grid: n must be even and >= 8");
  if (!(L_ > 0) || !std::isfinite(L_)) throw DomainError("grid: L must be > 0");
}

Vec3 VelocityGrid::node(std::size_t idx) const {
  std::size_t nn = static_cast<std::size_t>(n);
  int i1 = static_cast<int>(idx % nn), i2 = static_cast<int>((idx / nn) % nn),
      i3 = static_cast<int>(idx / (nn * nn));
  return {coord(i1), coord(i2), coord(i3)};
}

double DistributionField::max_abs() const {
  double m = 0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}
double DistributionField::max() const {
  return values.empty() ? 0 : *std::max_element(values.begin(), values.end());
}
double DistributionField::min() const {
  return values.empty() ? 0 : *std::min_element(values.begin(), values.end());
}

DistributionField sample(const std::function<double(const Vec3&)>& fn, const VelocityGrid& grid) {
  DistributionField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = fn(grid.node(i));
    if (!std::isfinite(v)) throw DataError("sample: non-finite value at node " + std::to_string(i));
    f[i] = v;
  }
  return f;
}

namespace {

inline void catmull_rom(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

}  // namespace

double interpolate(const DistributionField& f, const Vec3& point, Interpolation scheme) {
  const VelocityGrid& g = f.grid;
  int n = g.n;
  double x[3];
  for (int d = 0; d < 3; ++d) {
    x[d] = (point[d] + g.L) / g.h;
    if (!(x[d] >= 0 && x[d] <= n - 1)) return 0.0;
  }
  int i[3];
  double t[3];
  for (int d = 0; d < 3; ++d) {
    double fl = std::floor(x[d]);
    i[d] = static_cast<int>(fl);
    t[d] = x[d] - fl;
    if (i[d] == n - 1) {
      // Upper hull face: only t = 0 is inside.
      i[d] = n - 2;
      t[d] = 1.0;
    }
  }
  auto at = [&](int a, int b, int c) -> double {
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) return 0.0;
    return f.values[g.index(a, b, c)];
  };
  if (scheme == Interpolation::Trilinear) {
    double acc = 0;
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
          double w = (a ? t[0] : 1 - t[0]) * (b ? t[1] : 1 - t[1]) * (c ? t[2] : 1 - t[2]);
          if (w != 0) acc += w * at(i[0] + a, i[1] + b, i[2] + c);
        }
    return acc;
  }
  double wx[4], wy[4], wz[4];
  catmull_rom(t[0], wx);
  catmull_rom(t[1], wy);
  catmull_rom(t[2], wz);
  double acc = 0;
  for (int c = 0; c < 4; ++c) {
    if (wz[c] == 0) continue;
    double ay = 0;
    for (int b = 0; b < 4; ++b) {
      if (wy[b] == 0) continue;
      double ax = 0;
      for (int a = 0; a < 4; ++a)
        if (wx[a] != 0) ax += wx[a] * at(i[0] - 1 + a, i[1] - 1 + b, i[2] - 1 + c);
      ay += wy[b] * ax;
    }
    acc += wz[c] * ay;
  }
  return acc;
}

namespace {

// D[j*n + l] for the p-th periodic derivative on n points of spacing h.
const std::vector<double>& diff_matrix(int n, double h, int p) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, int>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_tuple(n, h, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
  double period = n * h;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      int d = j - l;
      double acc = 0;
      for (int m = 1; m < n / 2; ++m) {
        double k = 2 * std::numbers::pi * m / period;
        double th = 2 * std::numbers::pi * m * d / n;
        double kp = std::pow(k, p);
        switch (p % 4) {
          case 1: acc += -2 * kp * std::sin(th); break;
          case 2: acc += -2 * kp * std::cos(th); break;
          case 3: acc += 2 * kp * std::sin(th); break;
          default: acc += 2 * kp * std::cos(th); break;
        }
      }
      if (p % 2 == 0) {
        double k = std::numbers::pi * n / period;
        double sgn = (p % 4 == 2) ? -1.0 : 1.0;
        acc += sgn * std::pow(k, p) * ((d % 2 == 0) ? 1.0 : -1.0);
      }
      D[static_cast<std::size_t>(j) * n + l] = acc / n;
    }
  return cache.emplace(key, std::move(D)).first->second;
}

void apply_axis(const std::vector<double>& D, int n, int axis, const std::vector<double>& in,
                std::vector<double>& out) {
  std::size_t nn = n, stride = axis == 0 ? 1 : (axis == 1 ? nn : nn * nn);
  out.assign(in.size(), 0.0);
  std::size_t lines = nn * nn;
  parallel_for(lines, [&](std::size_t b, std::size_t e, int) {
    std::vector<double> buf(nn);
    for (std::size_t line = b; line < e; ++line) {
      std::size_t base;
      if (axis == 0) base = line * nn;
      else if (axis == 1) base = (line % nn) + (line / nn) * nn * nn;
      else base = line;
      for (std::size_t l = 0; l < nn; ++l) buf[l] = in[base + l * stride];
      for (std::size_t j = 0; j < nn; ++j) {
        const double* row = &D[j * nn];
        double acc = 0;
        for (std::size_t l = 0; l < nn; ++l) acc += row[l] * buf[l];
        out[base + j * stride] = acc;
      }
    }
  });
}

void check_decay(const DistributionField& f) {
  int n = f.grid.n;
  double m = f.max_abs(), edge = 0;
  if (m == 0) return;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        bool near = i < 2 || j < 2 || k < 2 || i >= n - 2 || j >= n - 2 || k >= n - 2;
        if (near) edge = std::max(edge, std::abs(f.values[f.grid.index(i, j, k)]));
      }
  if (edge > 1e-10 * m) {
    warn("spectral_derivative: field exceeds 1e-10 of its maximum within two cells of the "
         "boundary; periodization error may be visible");
  }
}

}  // namespace

DistributionField spectral_derivative(const DistributionField& f, std::array<int, 3> alpha,
                                      bool decay_check) {
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("spectral_derivative: negative multi-index");
    total += a;
  }
  if (total > 3) throw DomainError("spectral_derivative: |alpha| must be <= 3");
  if (decay_check) check_decay(f);
  DistributionField out = f;
  std::vector<double> tmp;
  for (int axis = 0; axis < 3; ++axis) {
    if (alpha[axis] == 0) continue;
    const auto& D = diff_matrix(f.grid.n, f.grid.h, alpha[axis]);
    apply_axis(D, f.grid.n, axis, out.values, tmp);
    out.values.swap(tmp);
  }
  return out;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t m = n / 2;
  return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

double weighted_norm(const DistributionField& f, const NormSpec& spec) {
  if (spec.N < 0 || spec.N > 3) throw DomainError("weighted_norm: N must lie in 0..3");
  if (!(spec.l >= 0)) throw DomainError("weighted_norm: l must be >= 0");
  bool pinf = std::isinf(spec.p);
  if (!(pinf || spec.p == 1 || spec.p == 2)) throw DomainError("weighted_norm: p must be 1, 2 or inf");
  const VelocityGrid& g = f.grid;
  std::vector<double> W(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = g.node(i);
    W[i] = spec.l == 0 ? 1.0 : std::pow(1 + dot(v, v), spec.l / 2);
  }
  double total = 0;
  std::vector<double> terms(f.size());
  for (int a1 = 0; a1 <= spec.N; ++a1)
    for (int a2 = 0; a1 + a2 <= spec.N; ++a2)
      for (int a3 = 0; a1 + a2 + a3 <= spec.N; ++a3) {
        const DistributionField d =
            (a1 + a2 + a3 == 0) ? f : spectral_derivative(f, {a1, a2, a3});
        double nrm;
        if (pinf) {
          nrm = 0;
          for (std::size_t i = 0; i < f.size(); ++i) nrm = std::max(nrm, W[i] * std::abs(d[i]));
        } else if (spec.p == 1) {
          for (std::size_t i = 0; i < f.size(); ++i) terms[i] = W[i] * std::abs(d[i]);
          nrm = g.cell() * pairwise_sum(terms.data(), terms.size());
        } else {
          for (std::size_t i = 0; i < f.size(); ++i) {
            double t = W[i] * d[i];
            terms[i] = t * t;
          }
          nrm = std::sqrt(g.cell() * pairwise_sum(terms.data(), terms.size()));
        }
        total += nrm;
      }
  return total;
}

Moments moments(const DistributionField& f) {
  const VelocityGrid& g = f.grid;
  std::size_t n = f.size();
  std::vector<double> a(n), b1(n), b2(n), b3(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 v = g.node(i);
    double x = f[i];
    a[i] = x;
    b1[i] = x * v.x;
    b2[i] = x * v.y;
    b3[i] = x * v.z;
    e[i] = x * dot(v, v);
  }
  double c = g.cell();
  Moments m;
  m.mass = c * pairwise_sum(a.data(), n);
  m.momentum = {c * pairwise_sum(b1.data(), n), c * pairwise_sum(b2.data(), n),
                c * pairwise_sum(b3.data(), n)};
  m.energy = c * pairwise_sum(e.data(), n);
  return m;
}

double maxwellian(const Vec3& v, double rho, const Vec3& u, double T) {
  Vec3 d = v - u;
  return rho * std::pow(2 * std::numbers::pi * T, -1.5) * std::exp(-dot(d, d) / (2 * T));
}

double fd_equilibrium(const Vec3& v, double eps, double beta, double c) {
  double x = beta * dot(v, v) + c;
  // 1/(1+e^x) written to stay finite for large x.
  double q = x > 0 ? std::exp(-x) / (1 + std::exp(-x)) : 1 / (1 + std::exp(x));
  return q / (eps * eps * eps);
}

double perturbed_maxwellian(const Vec3& v, double delta) {
  double m = maxwellian(v, 1, {0, 0, 0}, 1);
  return m * (1 + delta * (v.x * v.x - v.y * v.y) * std::exp(-dot(v, v) / 4));
}

}  // namespace qbl
