#include "qbl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qbl/error.hpp"
#include "qbl/quadrature.hpp"

namespace qbl {

namespace {
constexpr double kDrop = 1e-14;

void check_r(double r, const char* who) {
  if (!(r >= 0)) throw DomainError(std::string(who) + ": r must be >= 0");
}
}  // namespace

const std::vector<double>& default_moment_exponents() {
  static const std::vector<double> a{0, 1, 2, 3, 3.5, 4, 5};
  return a;
}

Potential Potential::gaussian(double amplitude, double width) {
  if (!std::isfinite(amplitude)) throw DomainError("gaussian: amplitude must be finite");
  if (!(width > 0) || !std::isfinite(width)) throw DomainError("gaussian: width must be > 0");
  Potential p;
  p.kind_ = PotentialKind::Gaussian;
  p.amp_ = amplitude;
  p.width_ = width;
  p.finalize();
  return p;
}

Potential Potential::bump(double amplitude) {
  if (!std::isfinite(amplitude)) throw DomainError("bump: amplitude must be finite");
  Potential p;
  p.kind_ = PotentialKind::Bump;
  p.amp_ = amplitude;
  p.finalize();
  return p;
}

Potential Potential::tabulated(std::vector<double> r, std::vector<double> phi) {
  if (r.size() != phi.size() || r.size() < 2)
    throw DomainError("tabulated: need at least two samples of equal length");
  if (r[0] != 0.0) throw DomainError("tabulated: first sample must be at r = 0");
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!std::isfinite(r[k]) || !std::isfinite(phi[k]))
      throw DomainError("tabulated: non-finite sample at index " + std::to_string(k));
    if (k > 0 && !(r[k] > r[k - 1]))
      throw DomainError("tabulated: r not strictly increasing at index " + std::to_string(k));
  }
  Potential p;
  p.kind_ = PotentialKind::Tabulated;
  p.tr_ = std::move(r);
  p.tp_ = std::move(phi);
  // Fritsch-Carlson slopes.
  std::size_t n = p.tr_.size();
  std::vector<double> d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    d[k] = (p.tp_[k + 1] - p.tp_[k]) / (p.tr_[k + 1] - p.tr_[k]);
  p.tm_.assign(n, 0.0);
  p.tm_[0] = d[0];
  p.tm_[n - 1] = d[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) p.tm_[k] = d[k - 1] * d[k] <= 0 ? 0.0 : 0.5 * (d[k - 1] + d[k]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (d[k] == 0) {
      p.tm_[k] = 0;
      p.tm_[k + 1] = 0;
      continue;
    }
    double al = p.tm_[k] / d[k], be = p.tm_[k + 1] / d[k];
    double s = al * al + be * be;
    if (s > 9) {
      double t = 3 / std::sqrt(s);
      p.tm_[k] = t * al * d[k];
      p.tm_[k + 1] = t * be * d[k];
    }
  }
  p.finalize();
  return p;
}

Potential Potential::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open potential table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ":1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,phi_hat") throw DataError(path + ":1: header must be exactly 'r,phi_hat'");
  std::vector<double> r, phi;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto comma = line.find(',');
    auto bad = [&](const std::string& why) {
      return DataError(path + ":" + std::to_string(lineno) + ": " + why);
    };
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw bad("expected two comma-separated values");
    auto parse = [&](const std::string& s) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(s, &used);
      } catch (...) {
        throw bad("not a number: '" + s + "'");
      }
      if (used != s.size() || !std::isfinite(v)) throw bad("not a finite decimal: '" + s + "'");
      return v;
    };
    r.push_back(parse(line.substr(0, comma)));
    phi.push_back(parse(line.substr(comma + 1)));
    if (r.size() == 1 && r[0] != 0.0) throw bad("first r must be 0");
    if (r.size() > 1 && !(r.back() > r[r.size() - 2])) throw bad("r not strictly increasing");
  }
  return tabulated(std::move(r), std::move(phi));
}

void Potential::finalize() {
  switch (kind_) {
    case PotentialKind::Gaussian:
      cutoff_ = width_ * std::sqrt(-std::log(kDrop));
      sup_abs_ = std::abs(amp_);
      break;
    case PotentialKind::Bump:
      cutoff_ = 1.0;
      sup_abs_ = std::abs(amp_);
      break;
    case PotentialKind::Tabulated: {
      sup_abs_ = 0;
      for (double v : tp_) sup_abs_ = std::max(sup_abs_, std::abs(v));
      cutoff_ = 0;
      for (std::size_t k = tp_.size(); k-- > 0;)
        if (tp_[k] != 0.0) {
          cutoff_ = tr_[k];
          break;
        }
      // Interpolant reaches zero at the next sample after the last nonzero one.
      for (std::size_t k = 0; k < tr_.size(); ++k)
        if (tr_[k] == cutoff_ && cutoff_ > 0) {
          cutoff_ = k + 1 < tr_.size() ? tr_[k + 1] : tr_[k];
          break;
        }
      break;
    }
  }
  if (sup_abs_ == 0) cutoff_ = 0;
  sq_cutoff_ = kind_ == PotentialKind::Gaussian ? width_ * std::sqrt(-0.5 * std::log(1e-16)) : cutoff_;
  if (sup_abs_ == 0) sq_cutoff_ = 0;
  for (double a : default_moment_exponents()) {
    double err = 0;
    table_.I[a] = compute_moment(a, false, &err);
    table_.quadrature_error[a] = err;
    table_.Iprime[a] = compute_moment(a, true, nullptr);
  }
}

double Potential::eval_unchecked(double r) const {
  switch (kind_) {
    case PotentialKind::Gaussian: {
      double u = r / width_;
      return amp_ * std::exp(-u * u);
    }
    case PotentialKind::Bump: {
      if (r >= 1) return 0;
      double u = 1 - r * r;
      return amp_ * u * u;
    }
    case PotentialKind::Tabulated: {
      if (r > tr_.back()) return 0;
      auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
      std::size_t k = it == tr_.end() ? tr_.size() - 2 : static_cast<std::size_t>(it - tr_.begin()) - 1;
      if (k + 1 >= tr_.size()) k = tr_.size() - 2;
      double h = tr_[k + 1] - tr_[k], t = (r - tr_[k]) / h;
      double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * tp_[k] + (t3 - 2 * t2 + t) * h * tm_[k] +
             (-2 * t3 + 3 * t2) * tp_[k + 1] + (t3 - t2) * h * tm_[k + 1];
    }
  }
  return 0;
}

double Potential::eval(double r) const {
  check_r(r, "eval_phi_hat");
  return eval_unchecked(r);
}

double Potential::deriv(double r) const {
  check_r(r, "eval_phi_hat_deriv");
  switch (kind_) {
    case PotentialKind::Gaussian: {
      double u = r / width_;
      return -2 * u / width_ * amp_ * std::exp(-u * u);
    }
    case PotentialKind::Bump:
      if (r >= 1) return 0;
      return -4 * r * (1 - r * r) * amp_;
    case PotentialKind::Tabulated: {
      if (r > tr_.back()) return 0;
      auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
      std::size_t k = it == tr_.end() ? tr_.size() - 2 : static_cast<std::size_t>(it - tr_.begin()) - 1;
      if (k + 1 >= tr_.size()) k = tr_.size() - 2;
      double h = tr_[k + 1] - tr_[k], t = (r - tr_[k]) / h;
      double t2 = t * t;
      return ((6 * t2 - 6 * t) * tp_[k] + (3 * t2 - 4 * t + 1) * h * tm_[k] +
              (-6 * t2 + 6 * t) * tp_[k + 1] + (3 * t2 - 2 * t) * h * tm_[k + 1]) /
             h;
    }
  }
  return 0;
}

std::vector<double> Potential::breakpoints() const {
  if (kind_ == PotentialKind::Tabulated) {
    std::vector<double> b;
    for (double r : tr_)
      if (r <= cutoff_) b.push_back(r);
    return b;
  }
  if (kind_ == PotentialKind::Gaussian) {
    // Split the decay region so the first panels resolve the bulk.
    std::vector<double> b;
    for (int k = 1; k < 8; ++k) b.push_back(width_ * k * 0.75);
    return b;
  }
  return {};
}

double Potential::compute_moment(double a, bool prime, double* err) const {
  if (!(a >= 0)) throw DomainError("moment: exponent a must be >= 0");
  if (is_zero() || cutoff_ <= 0) {
    if (err) *err = 0;
    return 0;
  }
  auto f = [&](double r) {
    double ra = a == 0 ? 1.0 : std::pow(r, a);
    if (prime) {
      double d = r * deriv(r);
      return d * d * ra;
    }
    double v = eval_unchecked(r);
    return v * v * ra;
  };
  AdaptiveOptions opt;
  opt.abs_tol = 1e-12;
  auto res = integrate_adaptive(f, 0.0, cutoff_, opt, breakpoints());
  if (err) *err = res.error;
  if (!std::isfinite(res.value)) throw AccuracyError("moment: non-finite result", res.error, 0);
  return std::max(0.0, res.value);
}

double Potential::moment_I(double a) const {
  if (!(a >= 0)) throw DomainError("moment_I: exponent a must be >= 0");
  auto it = table_.I.find(a);
  if (it != table_.I.end()) return it->second;
  return compute_moment(a, false, nullptr);
}

double Potential::moment_Iprime(double a) const {
  if (!(a >= 0)) throw DomainError("moment_Iprime: exponent a must be >= 0");
  auto it = table_.Iprime.find(a);
  if (it != table_.Iprime.end()) return it->second;
  return compute_moment(a, true, nullptr);
}

double Potential::moment_I_error(double a) const {
  auto it = table_.quadrature_error.find(a);
  if (it != table_.quadrature_error.end()) return it->second;
  double e = 0;
  compute_moment(a, false, &e);
  return e;
}

double Potential::partial_moment_I(double a, double lo, double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, cutoff_);
  if (!(hi > lo) || is_zero()) return 0;
  auto f = [&](double r) {
    double v = eval_unchecked(r);
    return v * v * std::pow(r, a);
  };
  AdaptiveOptions opt;
  opt.abs_tol = 1e-13;
  return integrate_adaptive(f, lo, hi, opt, breakpoints()).value;
}

AssumptionReport Potential::check_assumptions(double theta) const {
  if (!(theta > 0 && theta <= 1)) throw DomainError("check_assumptions: theta must lie in (0, 1]");
  AssumptionReport rep;
  rep.I0 = moment_I(0);
  rep.I3 = moment_I(3);
  rep.Ip3 = moment_Iprime(3);
  rep.I3t = moment_I(3 + theta);
  rep.Ip3t = moment_Iprime(3 + theta);
  rep.a1_holds = std::isfinite(rep.I0) && std::isfinite(rep.I3) && std::isfinite(rep.Ip3);
  if (rep.a1_holds && std::isfinite(rep.I3t) && std::isfinite(rep.Ip3t)) rep.a2_theta = theta;
  return rep;
}

}  // namespace qbl
