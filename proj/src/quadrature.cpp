#include "qbl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

#include "qbl/error.hpp"

namespace qbl {

namespace {

Rule make_gl(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = n == 1 ? x : p1;
      double pm = n == 1 ? 1 : p0;
      dp = n * (x * pn - pm) / (x * x - 1);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double pn = n == 1 ? x : p1, pm = n == 1 ? 1 : p0;
    dp = n * (x * pn - pm) / (x * x - 1);
    double w = 2.0 / ((1 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

// Kronrod 15 / Gauss 7 abscissae and weights (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  int depth;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b, int depth) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    double s = f(c - dx) + f(c + dx);
    resk += kWgk[j] * s;
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  return {a, b, resk * h, std::abs((resk - resg) * h), depth};
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
  return it->second;
}

Rule gauss_legendre(int n, double a, double b) {
  const Rule& r = gauss_legendre(n);
  Rule out;
  out.x.resize(n);
  out.w.resize(n);
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    out.x[i] = c + h * r.x[i];
    out.w[i] = h * r.w[i];
  }
  return out;
}

Rule composite_gauss_legendre(int order, int panels, double a, double b) {
  Rule out;
  for (int p = 0; p < panels; ++p) {
    double pa = a + (b - a) * p / panels, pb = a + (b - a) * (p + 1) / panels;
    Rule r = gauss_legendre(order, pa, pb);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const AdaptiveOptions& opt,
                                  const std::vector<double>& breakpoints) {
  AdaptiveResult res;
  if (!(b > a)) return res;
  std::vector<double> pts{a};
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  std::priority_queue<Piece> heap;
  std::vector<Piece> done;  // pieces at max depth, no longer refinable
  double value = 0, error = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    Piece p = gk15(f, pts[i], pts[i + 1], 0);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  int count = static_cast<int>(heap.size());
  while (error > opt.abs_tol * (1 + std::abs(value)) && !heap.empty() &&
         count < opt.max_intervals) {
    Piece p = heap.top();
    heap.pop();
    if (p.depth >= opt.max_depth) {
      done.push_back(p);
      continue;
    }
    double m = 0.5 * (p.a + p.b);
    Piece l = gk15(f, p.a, m, p.depth + 1), r = gk15(f, m, p.b, p.depth + 1);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum to shed the drift of the running totals.
  value = 0;
  error = 0;
  std::vector<Piece> all = done;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  for (const Piece& p : all) {
    value += p.value;
    error += p.error;
  }
  res.value = value;
  res.error = error;
  res.intervals = static_cast<int>(all.size());
  if (!std::isfinite(value)) throw AccuracyError("integrate_adaptive: non-finite integrand", error, 0);
  double tol = opt.abs_tol * (1 + std::abs(value));
  if (error > tol && opt.throw_on_failure) {
    std::ostringstream os;
    os << "integrate_adaptive: error estimate " << error << " above tolerance " << tol << " on ["
       << a << ", " << b << "]";
    throw AccuracyError(os.str(), error, tol);
  }
  return res;
}

}  // namespace qbl
