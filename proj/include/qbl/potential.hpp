#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qbl {

enum class PotentialKind { Gaussian, Bump, Tabulated };

struct MomentTable {
  std::map<double, double> I;
  std::map<double, double> Iprime;
  std::map<double, double> quadrature_error;  // keyed by a, for I_a
};

struct AssumptionReport {
  bool a1_holds = false;
  std::optional<double> a2_theta;
  // I0, I3, I'3, I_{3+theta}, I'_{3+theta}
  double I0 = 0, I3 = 0, Ip3 = 0, I3t = 0, Ip3t = 0;
};

// Radial Fourier transform phi_hat of the interaction potential.
//   Gaussian:  A exp(-(r/s)^2)
//   Bump:      A (1 - r^2)_+^2
//   Tabulated: monotone cubic (Fritsch-Carlson) through (r_k, phi_k), zero past r_last
// Moments for a in default_moment_exponents() are computed at construction.
class Potential {
 public:
  static Potential gaussian(double amplitude, double width);
  static Potential bump(double amplitude);
  static Potential tabulated(std::vector<double> r, std::vector<double> phi);
  // CSV with header exactly "r,phi_hat".
  static Potential from_csv(const std::string& path);

  PotentialKind kind() const { return kind_; }
  double amplitude() const { return amp_; }
  double width() const { return width_; }
  double cutoff_radius() const { return cutoff_; }
  // Radius past which phi_hat^2 < 1e-16 sup phi_hat^2; the sigma quadrature windows stop here.
  double square_cutoff_radius() const { return sq_cutoff_; }
  const std::vector<double>& table_r() const { return tr_; }
  const std::vector<double>& table_phi() const { return tp_; }

  double eval(double r) const;
  double deriv(double r) const;
  // Unchecked evaluation for hot loops; r must be >= 0.
  double eval_unchecked(double r) const;

  // Cached when a is one of the eager exponents, computed otherwise.
  double moment_I(double a) const;
  double moment_Iprime(double a) const;
  double moment_I_error(double a) const;
  // Tail and head pieces used by the Landau-coefficient remainders.
  double partial_moment_I(double a, double lo, double hi) const;

  const MomentTable& moments() const { return table_; }
  AssumptionReport check_assumptions(double theta) const;

  bool is_zero() const { return sup_abs_ == 0.0; }
  // Breakpoints for adaptive integration of phi_hat-based integrands.
  std::vector<double> breakpoints() const;

 private:
  Potential() = default;
  void finalize();
  double compute_moment(double a, bool prime, double* err) const;

  PotentialKind kind_ = PotentialKind::Gaussian;
  double amp_ = 1, width_ = 1;
  std::vector<double> tr_, tp_, tm_;  // samples and Fritsch-Carlson slopes
  double cutoff_ = 0;
  double sq_cutoff_ = 0;
  double sup_abs_ = 0;
  MomentTable table_;
};

const std::vector<double>& default_moment_exponents();

}  // namespace qbl
