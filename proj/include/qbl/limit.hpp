#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbl/evolve.hpp"
#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"
#include "qbl/operators.hpp"

namespace qbl {

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// OLS of log(error) on log(eps) over the positive errors. Throws DegenerateFitError
// with fewer than 2 of them.
FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& errors);

struct ConvergenceReport {
  std::vector<double> eps_list;
  std::vector<double> errors;
  std::vector<double> r_norms;  // ||R^eps|| = errors / eps^theta
  std::vector<bool> used;       // retained by the floor rule
  double theta_config = 1;
  double theta_hat = 0;
  double intercept = 0;
  double r_squared = 0;
  NormSpec norm;
  double t_final = 0;
  int n = 0;
  double L = 0;
  double dt = 0;
  double floor = 0;  // half-resolution self-convergence floor (0 when not measured)
  bool incomplete = false;
  bool degenerate = false;
  std::string message;
};

struct LimitStudyOptions {
  CollisionQuadrature quad;
  bool floor_control = true;       // measure the floor with a half-resolution Landau run
  double floor_factor = 10;        // exclude eps whose error < floor_factor * floor
  bool substitute_landau = false;  // audit mode: every eps run uses the Landau model
  std::string snapshot_dir;        // R^eps fields written here when non-empty
};

// cfg supplies statistics and potential; its eps is replaced by each entry of eps_list.
ConvergenceReport limit_study(const DistributionField& f0, const KernelConfig& cfg,
                              const std::vector<double>& eps_list, const EvolutionConfig& ec,
                              const NormSpec& norm, double theta,
                              const LimitStudyOptions& opt = {});

void write_report_json(const std::string& path, const ConvergenceReport& r,
                       const std::string& resolved_config_json = "");
void write_report_csv(const std::string& path, const ConvergenceReport& r);
void write_gnuplot_script(const std::string& path, const std::string& csv_name,
                          const ConvergenceReport& r);

struct WeakRow {
  std::string phi;
  double eps = 0;
  double weak = 0;    // <Q_UU^eps(f), phi>
  double landau = 0;  // <Q_L(f,f), phi> on the grid
  double distance = 0;
  double scale = 0;   // weak_form scale, for machine-level comparisons
};
struct WeakFit {
  std::string phi;
  std::optional<FitResult> fit;  // empty when degenerate
};
struct WeakConvergenceTable {
  std::vector<WeakRow> rows;
  std::vector<WeakFit> fits;
};

WeakConvergenceTable weak_convergence_study(const DistributionField& f,
                                            const std::vector<std::pair<std::string, TestFn>>& phis,
                                            const KernelConfig& cfg,
                                            const std::vector<double>& eps_list,
                                            const CollisionQuadrature& quad);

struct AuditTerm {
  std::string name;
  double l2l = 0;
  DistributionField field;
};
struct AuditResult {
  std::vector<AuditTerm> terms;
  double sum_l2l = 0;
  std::optional<double> fd_residual;  // ||sum - dR/dt||_{L^2_l} when later fields are given
  std::optional<double> fd_scale;     // ||dR/dt||_{L^2_l}
};

struct AuditLater {
  DistributionField f_eps, f_L;
  double dt = 0;
};

// Terms of the evolution of R^eps = eps^-theta (f^eps - f_L):
//   Q1(f^eps, R), Q1(R, f_L), eps^-theta (Q1 - Q_L)(f_L, f_L),
//   eps^-theta (Q2 + Q3)(f^eps, f^eps), eps^-theta R(f^eps, f^eps, f^eps).
// With `later`, also compares their sum to the forward difference of R^eps.
AuditResult error_equation_audit(const DistributionField& f_eps, const DistributionField& f_L,
                                 const KernelConfig& cfg, double theta,
                                 const CollisionQuadrature& quad, double l = 2,
                                 const std::optional<AuditLater>& later = {});

}  // namespace qbl
