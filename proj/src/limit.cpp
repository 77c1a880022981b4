#include "qbl/limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qbl/error.hpp"
#include "qbl/log.hpp"

namespace qbl {

FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& errors) {
  if (eps.size() != errors.size()) throw DomainError("fit_rate: eps and errors differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (errors[i] > 0 && eps[i] > 0 && std::isfinite(errors[i])) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(errors[i]));
    }
  if (x.size() < 2) throw DegenerateFitError("fit_rate: fewer than 2 positive errors");
  double k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw DegenerateFitError("fit_rate: all eps values coincide");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (r.intercept + r.slope * x[i]);
    sse += e * e;
  }
  r.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return r;
}

namespace {

DistributionField diff(const DistributionField& a, const DistributionField& b) {
  DistributionField d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
  d.meta.reset();
  return d;
}

DistributionField coarsen(const DistributionField& f) {
  VelocityGrid c(f.grid.n / 2, f.grid.L);
  DistributionField out(c);
  for (int k = 0; k < c.n; ++k)
    for (int j = 0; j < c.n; ++j)
      for (int i = 0; i < c.n; ++i) out[c.index(i, j, k)] = f[f.grid.index(2 * i, 2 * j, 2 * k)];
  return out;
}

void check_eps_list(const std::vector<double>& e) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] > 0 && e[i] < 1))
      throw ValidationError("kernel.eps_list[" + std::to_string(i) + "]", "must lie in (0, 1)");
    if (i > 0 && !(e[i] < e[i - 1]))
      throw ValidationError("kernel.eps_list[" + std::to_string(i) + "]", "must be strictly decreasing");
  }
}

}  // namespace

ConvergenceReport limit_study(const DistributionField& f0, const KernelConfig& cfg,
                              const std::vector<double>& eps_list, const EvolutionConfig& ec,
                              const NormSpec& norm, double theta, const LimitStudyOptions& opt) {
  check_eps_list(eps_list);
  ec.validate();
  if (!(theta > 0 && theta <= 1)) throw ValidationError("limit.theta", "must lie in (0, 1]");
  if (!cfg.potential) throw ValidationError("potential", "missing");
  double f0max = f0.max_abs();
  if (cfg.statistics == Statistics::FermiDirac && f0max > 0) {
    double lim = std::pow(f0max, -1.0 / 3.0);
    for (double e : eps_list)
      if (e > lim) {
        std::ostringstream os;
        os << "Fermi-Dirac limit study requires eps <= min(1, ||f0||_inf^(-1/3)) = " << lim << "; got eps = " << e;
        throw PreconditionError(os.str());
      }
  }

  ConvergenceReport rep;
  rep.eps_list = eps_list;
  rep.theta_config = theta;
  rep.norm = norm;
  rep.t_final = ec.t_final;
  rep.n = f0.grid.n;
  rep.L = f0.grid.L;

  double I3 = cfg.phi().moment_I(3);
  Model landau = Model::landau(I3);
  auto uu_model = [&](double e) {
    if (opt.substitute_landau) return landau;
    KernelConfig c = cfg;
    c.eps = e;
    return Model::uu(c, opt.quad);
  };

  // One dt for every run: the smaller of the Landau default and the UU default at the largest eps.
  EvolutionConfig e2 = ec;
  e2.snapshot_stride = 0;
  e2.snapshot_dir.clear();
  if (ec.dt == 0) {
    double d1 = resolve_dt(f0, landau, ec);
    double d2 = eps_list.empty() ? d1 : resolve_dt(f0, uu_model(eps_list.front()), ec);
    e2.dt = std::min(d1, d2);
  }
  e2.dt = resolve_dt(f0, landau, e2);
  rep.dt = e2.dt;

  RunResult rl = run(f0, landau, e2);
  if (rl.blew_up) {
    rep.incomplete = true;
    rep.message = "Landau run: " + rl.blowup_message;
    return rep;
  }
  const DistributionField& fL = rl.final_state;

  if (opt.floor_control && f0.grid.n / 2 >= 8) {
    DistributionField c0 = coarsen(f0);
    RunResult rc = run(c0, landau, e2);
    if (!rc.blew_up) rep.floor = weighted_norm(diff(coarsen(fL), rc.final_state), norm);
  } else if (opt.floor_control) {
    warn("limit_study: grid too coarse for the half-resolution floor control; floor not measured");
  }

  if (!opt.snapshot_dir.empty()) std::filesystem::create_directories(opt.snapshot_dir);
  for (double e : eps_list) {
    RunResult r = run(f0, uu_model(e), e2);
    if (r.blew_up) {
      rep.incomplete = true;
      rep.message = "eps = " + std::to_string(e) + ": " + r.blowup_message;
      break;
    }
    DistributionField d = diff(r.final_state, fL);
    double err = weighted_norm(d, norm);
    rep.errors.push_back(err);
    rep.r_norms.push_back(err / std::pow(e, theta));
    if (!opt.snapshot_dir.empty()) {
      for (double& v : d.values) v /= std::pow(e, theta);
      char name[64];
      std::snprintf(name, sizeof name, "R_eps_%.6g.skf", e);
      write_snapshot((std::filesystem::path(opt.snapshot_dir) / name).string(), d);
    }
  }
  if (rep.incomplete) rep.eps_list.resize(rep.errors.size());

  std::vector<double> fe, fr;
  rep.used.assign(rep.errors.size(), false);
  for (std::size_t i = 0; i < rep.errors.size(); ++i)
    if (rep.errors[i] > 0 && rep.errors[i] >= opt.floor_factor * rep.floor) {
      rep.used[i] = true;
      fe.push_back(rep.eps_list[i]);
      fr.push_back(rep.errors[i]);
    }
  double emax = 0;
  for (double v : rep.errors) emax = std::max(emax, v);
  double fscale = weighted_norm(fL, norm);
  if (emax <= 1e-12 * std::max(fscale, 1e-300)) {
    rep.degenerate = true;
    rep.message += (rep.message.empty() ? "" : "; ") + std::string("errors at round-off level");
    return rep;
  }
  try {
    FitResult fit = fit_rate(fe, fr);
    rep.theta_hat = fit.slope;
    rep.intercept = fit.intercept;
    rep.r_squared = fit.r_squared;
  } catch (const DegenerateFitError& e) {
    rep.degenerate = true;
    rep.message += (rep.message.empty() ? "" : "; ") + std::string(e.what()) +
                   " above the discretization floor";
  }
  return rep;
}

void write_report_json(const std::string& path, const ConvergenceReport& r,
                       const std::string& resolved_config_json) {
  nlohmann::ordered_json j;
  j["eps"] = r.eps_list;
  j["errors"] = r.errors;
  j["R_norms"] = r.r_norms;
  std::vector<bool> used(r.used.begin(), r.used.end());
  j["used_in_fit"] = used;
  j["theta_config"] = r.theta_config;
  if (r.degenerate) j["theta_hat"] = nullptr;
  else j["theta_hat"] = r.theta_hat;
  j["intercept"] = r.intercept;
  j["r2"] = r.r_squared;
  j["norm"] = {{"N", r.norm.N}, {"l", r.norm.l}, {"p", std::isinf(r.norm.p) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(r.norm.p)}};
  j["t_final"] = r.t_final;
  j["dt"] = r.dt;
  j["grid"] = {{"n", r.n}, {"L", r.L}};
  j["floor"] = r.floor;
  j["incomplete"] = r.incomplete;
  j["degenerate"] = r.degenerate;
  if (!r.message.empty()) j["message"] = r.message;
  if (!resolved_config_json.empty()) j["config"] = nlohmann::ordered_json::parse(resolved_config_json);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  os << j.dump(2) << "\n";
}

void write_report_csv(const std::string& path, const ConvergenceReport& r) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  os << "eps,error\n";
  char buf[96];
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.eps_list[i], r.errors[i]);
    os << buf;
  }
}

void write_gnuplot_script(const std::string& path, const std::string& csv_name,
                          const ConvergenceReport& r) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path);
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'eps'\n"
     << "set ylabel 'error'\n"
     << "set key top left\n";
  if (!r.degenerate) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "fit_line(x) = exp(%.17g) * x**%.17g\n", r.intercept, r.theta_hat);
    os << buf;
    os << "plot '" << csv_name << "' skip 1 using 1:2 with linespoints title 'error', "
       << "fit_line(x) title sprintf('slope %.3f', " << r.theta_hat << ")\n";
  } else {
    os << "plot '" << csv_name << "' skip 1 using 1:2 with linespoints title 'error'\n";
  }
}

WeakConvergenceTable weak_convergence_study(const DistributionField& f,
                                            const std::vector<std::pair<std::string, TestFn>>& phis,
                                            const KernelConfig& cfg,
                                            const std::vector<double>& eps_list,
                                            const CollisionQuadrature& quad) {
  check_eps_list(eps_list);
  WeakConvergenceTable tab;
  double I3 = cfg.phi().moment_I(3);
  for (const auto& [name, phi] : phis) {
    double lan = landau_weak_form(f, phi, I3, quad).value;
    std::vector<double> ds;
    for (double e : eps_list) {
      KernelConfig c = cfg;
      c.eps = e;
      WeakFormResult w = weak_form(f, phi, c, quad);
      WeakRow row{name, e, w.value, lan, std::abs(w.value - lan), w.scale};
      tab.rows.push_back(row);
      ds.push_back(row.distance);
    }
    WeakFit wf{name, std::nullopt};
    try {
      wf.fit = fit_rate(eps_list, ds);
    } catch (const DegenerateFitError&) {
    }
    tab.fits.push_back(wf);
  }
  return tab;
}

AuditResult error_equation_audit(const DistributionField& f_eps, const DistributionField& f_L,
                                 const KernelConfig& cfg, double theta,
                                 const CollisionQuadrature& quad, double l,
                                 const std::optional<AuditLater>& later) {
  if (!(f_eps.grid == f_L.grid)) throw DomainError("error_equation_audit: grids differ");
  double e = cfg.eps, s = std::pow(e, -theta);
  NormSpec nl{0, l, 2};
  DistributionField R = diff(f_eps, f_L);
  for (double& v : R.values) v *= s;

  auto scaled = [&](DistributionField a, double k) {
    for (double& v : a.values) v *= k;
    return a;
  };
  AuditResult res;
  auto add = [&](const std::string& name, DistributionField fld) {
    double n = weighted_norm(fld, nl);
    res.terms.push_back({name, n, std::move(fld)});
  };
  add("Q1(f_eps,R)", eval_Q_bilinear(f_eps, R, 1, cfg, quad).field);
  add("Q1(R,f_L)", eval_Q_bilinear(R, f_L, 1, cfg, quad).field);
  {
    DistributionField q1 = eval_Q_bilinear(f_L, f_L, 1, cfg, quad).field;
    DistributionField ql = eval_Q_L(f_L, f_L, cfg.phi().moment_I(3)).field;
    add("eps^-theta(Q1-QL)(f_L,f_L)", scaled(diff(q1, ql), s));
  }
  {
    DistributionField q2 = eval_Q_bilinear(f_eps, f_eps, 2, cfg, quad).field;
    DistributionField q3 = eval_Q_bilinear(f_eps, f_eps, 3, cfg, quad).field;
    for (std::size_t i = 0; i < q2.size(); ++i) q2[i] += q3[i];
    add("eps^-theta(Q2+Q3)(f_eps,f_eps)", scaled(q2, s));
  }
  add("eps^-theta R(f_eps,f_eps,f_eps)", scaled(eval_R(f_eps, f_eps, f_eps, cfg, quad).field, s));

  DistributionField sum(f_eps.grid);
  for (const auto& t : res.terms)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += t.field[i];
  res.sum_l2l = weighted_norm(sum, nl);
  if (later) {
    if (!(later->f_eps.grid == f_eps.grid) || !(later->f_L.grid == f_eps.grid))
      throw DomainError("error_equation_audit: grids differ");
    if (!(later->dt > 0)) throw DomainError("error_equation_audit: dt must be > 0");
    DistributionField R2 = diff(later->f_eps, later->f_L);
    DistributionField dR(f_eps.grid);
    for (std::size_t i = 0; i < dR.size(); ++i) dR[i] = (s * R2[i] - R[i]) / later->dt;
    res.fd_scale = weighted_norm(dR, nl);
    res.fd_residual = weighted_norm(diff(sum, dR), nl);
  }
  return res;
}

}  // namespace qbl
