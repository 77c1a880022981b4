#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"
#include "qbl/operators.hpp"

namespace qbl {

enum class ModelKind { UU, Landau, Custom };

struct Model {
  ModelKind kind = ModelKind::UU;
  KernelConfig cfg;           // UU
  CollisionQuadrature quad;   // UU
  double I3 = 0;              // Landau
  std::function<DistributionField(const DistributionField&)> custom;  // Custom

  static Model uu(const KernelConfig& cfg, const CollisionQuadrature& quad);
  static Model landau(double I3);
  static Model landau(const Potential& phi) { return landau(phi.moment_I(3)); }
  static Model from(std::function<DistributionField(const DistributionField&)> fn);
  bool fermi_dirac() const {
    return kind == ModelKind::UU && cfg.statistics == Statistics::FermiDirac;
  }
};

struct EvolutionConfig {
  double dt = 0;  // 0: 0.1 ||f0||_inf / ||rhs(f0)||_inf, rounded so t_final is hit exactly
  double t_final = 0.1;
  bool clamp = true;  // forced on for Fermi-Dirac
  bool conservation_projection = false;
  int snapshot_stride = 0;  // 0: no snapshots
  std::string snapshot_dir;  // empty: keep snapshots in memory only
  NormSpec norm{0, 2, 2};
  double blowup_factor = 1e8;  // abort when ||f||_inf exceeds this multiple of ||f0||_inf

  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0;
  double mass = 0;
  Vec3 momentum;
  double energy = 0;
  double linf = 0;
  double min_value = 0;
  double l2l_norm = 0;
  double rhs_norm = 0;
  double negative_fraction = 0;  // ||f^-||_1 / ||f||_1
};

// The right-hand side. With clamp, the argument is replaced by min(max(f,0), eps^-3)
// (Landau and Custom models only zero the negative part).
DistributionField rhs(const DistributionField& f, const Model& model, bool clamp = true,
                      bool projection = false);

// Classical RK4; Fermi-Dirac states are truncated at eps^-3 after the step.
DistributionField rk4_step(const DistributionField& f, double dt, const Model& model,
                           bool clamp = true, bool projection = false, double t = 0,
                           DistributionField* k1_out = nullptr);

struct Snapshot {
  int step = 0;
  double t = 0;
  DistributionField field;
};

struct RunResult {
  DistributionField final_state;
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  double dt = 0;
  int steps = 0;
  bool blew_up = false;
  double blowup_time = 0;
  std::string blowup_message;
};

// dt actually used by run for this f0 and config.
double resolve_dt(const DistributionField& f0, const Model& model, const EvolutionConfig& ec);

// Fixed-step loop to t_final. On blow-up returns the partial result with blew_up set.
RunResult run(const DistributionField& f0, const Model& model, const EvolutionConfig& ec);

DiagnosticsRecord diagnose(const DistributionField& f, double t, double rhs_norm,
                           const NormSpec& norm);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& rec);

}  // namespace qbl
