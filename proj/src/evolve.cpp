#include "qbl/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "qbl/error.hpp"
#include "qbl/log.hpp"

namespace qbl {

Model Model::uu(const KernelConfig& cfg, const CollisionQuadrature& quad) {
  Model m;
  m.kind = ModelKind::UU;
  m.cfg = cfg;
  m.quad = quad;
  return m;
}

Model Model::landau(double I3) {
  Model m;
  m.kind = ModelKind::Landau;
  m.I3 = I3;
  return m;
}

Model Model::from(std::function<DistributionField(const DistributionField&)> fn) {
  Model m;
  m.kind = ModelKind::Custom;
  m.custom = std::move(fn);
  return m;
}

void EvolutionConfig::validate() const {
  if (!(t_final > 0) || !std::isfinite(t_final)) throw ValidationError("evolve.t_final", "must be > 0");
  if (dt < 0 || !std::isfinite(dt)) throw ValidationError("evolve.dt", "must be >= 0 (0 selects the default)");
  if (dt > t_final) throw ValidationError("evolve.dt", "must not exceed t_final");
  if (snapshot_stride < 0) throw ValidationError("evolve.snapshot_stride", "must be >= 0");
}

namespace {

double ceiling(const Model& m) {
  double e = m.cfg.eps;
  return 1.0 / (e * e * e);
}

DistributionField truncated(const DistributionField& f, const Model& m) {
  DistributionField g = f;
  if (m.kind == ModelKind::UU) {
    double top = ceiling(m);
    for (double& v : g.values) v = std::min(std::max(v, 0.0), top);
  } else {
    for (double& v : g.values) v = std::max(v, 0.0);
  }
  return g;
}

void axpy(DistributionField& y, double a, const DistributionField& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

DistributionField rhs(const DistributionField& f, const Model& model, bool clamp, bool projection) {
  bool c = clamp || model.fermi_dirac();
  DistributionField tmp;
  if (c) tmp = truncated(f, model);
  const DistributionField& x = c ? tmp : f;
  DistributionField q;
  switch (model.kind) {
    case ModelKind::UU:
      q = eval_Q_UU(x, model.cfg, model.quad).field;
      break;
    case ModelKind::Landau:
      q = eval_Q_L(x, x, model.I3).field;
      break;
    case ModelKind::Custom:
      q = model.custom(x);
      break;
  }
  q.meta.reset();
  if (projection) q = project_conservation(q, x);
  return q;
}

DistributionField rk4_step(const DistributionField& f, double dt, const Model& model, bool clamp,
                           bool projection, double t, DistributionField* k1_out) {
  if (!(dt > 0)) throw DomainError("rk4_step: dt must be > 0");
  DistributionField k1 = rhs(f, model, clamp, projection);
  DistributionField s = f;
  axpy(s, 0.5 * dt, k1);
  DistributionField k2 = rhs(s, model, clamp, projection);
  s = f;
  axpy(s, 0.5 * dt, k2);
  DistributionField k3 = rhs(s, model, clamp, projection);
  s = f;
  axpy(s, dt, k3);
  DistributionField k4 = rhs(s, model, clamp, projection);
  DistributionField out = f;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += dt / 6.0 * ((k1[i] + k4[i]) + 2.0 * (k2[i] + k3[i]));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!std::isfinite(out[i])) {
      std::ostringstream os;
      os << "non-finite state after the step ending at t = " << t + dt;
      throw BlowUpError(os.str(), t + dt);
    }
  if (model.fermi_dirac()) {
    double top = ceiling(model);
    for (double& v : out.values) v = std::min(v, top);
  }
  if (k1_out) *k1_out = std::move(k1);
  return out;
}

DiagnosticsRecord diagnose(const DistributionField& f, double t, double rhs_norm, const NormSpec& norm) {
  DiagnosticsRecord r;
  r.t = t;
  Moments m = moments(f);
  r.mass = m.mass;
  r.momentum = m.momentum;
  r.energy = m.energy;
  r.linf = f.max_abs();
  r.min_value = f.size() ? f.min() : 0.0;
  r.l2l_norm = weighted_norm(f, norm);
  r.rhs_norm = rhs_norm;
  double pos = 0, neg = 0;
  for (double v : f.values) (v < 0 ? neg : pos) += std::abs(v);
  r.negative_fraction = pos + neg > 0 ? neg / (pos + neg) : 0.0;
  return r;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& rec) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  os << "t,mass,px,py,pz,energy,linf,min,l2l,rhs_norm\n";
  char buf[512];
  for (const auto& r : rec) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                  r.mass, r.momentum.x, r.momentum.y, r.momentum.z, r.energy, r.linf, r.min_value,
                  r.l2l_norm, r.rhs_norm);
    os << buf;
  }
}

double resolve_dt(const DistributionField& f0, const Model& model, const EvolutionConfig& ec) {
  double dt = ec.dt;
  if (dt == 0) {
    double fn = f0.max_abs();
    double rn = fn > 0 ? rhs(f0, model, ec.clamp, ec.conservation_projection).max_abs() : 0.0;
    dt = rn > 0 ? 0.1 * fn / rn : ec.t_final;
    dt = std::min(dt, ec.t_final);
  }
  int steps = std::max(1, static_cast<int>(std::ceil(ec.t_final / dt - 1e-9)));
  return ec.t_final / steps;
}

RunResult run(const DistributionField& f0, const Model& model, const EvolutionConfig& ec) {
  ec.validate();
  for (std::size_t i = 0; i < f0.size(); ++i)
    if (!(f0[i] >= 0)) {
      std::ostringstream os;
      os << "initial data must be nonnegative; node " << i << " has " << f0[i];
      throw PreconditionError(os.str());
    }
  if (model.kind == ModelKind::UU) {
    model.cfg.validate();
    if (model.fermi_dirac() && f0.max_abs() > ceiling(model))
      throw PreconditionError("Fermi-Dirac initial data must satisfy ||f0||_inf <= eps^-3, i.e. eps <= ||f0||_inf^(-1/3)");
  }
  RunResult res;
  res.dt = resolve_dt(f0, model, ec);
  res.steps = static_cast<int>(std::llround(ec.t_final / res.dt));
  bool write = ec.snapshot_stride > 0 && !ec.snapshot_dir.empty();
  if (write) std::filesystem::create_directories(ec.snapshot_dir);
  std::vector<std::future<void>> pending;
  auto snap = [&](int step, double t, const DistributionField& f) {
    if (ec.snapshot_stride <= 0 || step % ec.snapshot_stride != 0) return;
    res.snapshots.push_back({step, t, f});
    if (write) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06d.skf", step);
      std::string path = (std::filesystem::path(ec.snapshot_dir) / name).string();
      pending.push_back(std::async(std::launch::async, [path, f] { write_snapshot(path, f); }));
    }
  };

  DistributionField f = f0;
  double f0n = f0.max_abs();
  snap(0, 0.0, f);
  for (int k = 0; k < res.steps; ++k) {
    double t = k * res.dt;
    DistributionField k1, prev = f;
    try {
      f = rk4_step(prev, res.dt, model, ec.clamp, ec.conservation_projection, t, &k1);
    } catch (const BlowUpError& e) {
      res.blew_up = true;
      res.blowup_time = e.time();
      res.blowup_message = e.what();
      break;
    }
    res.diagnostics.push_back(diagnose(prev, t, k1.max_abs(), ec.norm));
    if (f0n > 0 && f.max_abs() > ec.blowup_factor * f0n) {
      res.blew_up = true;
      res.blowup_time = t + res.dt;
      res.blowup_message = "solution norm grew beyond the blow-up threshold";
      break;
    }
    snap(k + 1, t + res.dt, f);
  }
  if (!res.blew_up) {
    double rn = rhs(f, model, ec.clamp, ec.conservation_projection).max_abs();
    res.diagnostics.push_back(diagnose(f, ec.t_final, rn, ec.norm));
  } else {
    warn(res.blowup_message);
  }
  res.final_state = f;
  for (auto& p : pending) p.get();
  return res;
}

}  // namespace qbl
