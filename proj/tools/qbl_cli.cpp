// qbl: command-line front end.
//   qbl <moments|kernel-check|operator-check|evolve|limit-study> --config PATH [--out DIR]
// Exit codes: 0 ok, 1 check failure, 2 validation/precondition, 3 degenerate study, 4 blow-up.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "qbl/checks.hpp"
#include "qbl/config.hpp"
#include "qbl/error.hpp"
#include "qbl/evolve.hpp"
#include "qbl/limit.hpp"
#include "qbl/log.hpp"
#include "qbl/parallel.hpp"

namespace fs = std::filesystem;
using namespace qbl;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kValidation = 2, kDegenerate = 3, kBlowUp = 4 };

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  long seed = 0;
  bool quiet = false;
};

std::string out_dir(const Options& o, const RunConfig& c) {
  std::string d = o.out.empty() ? c.output.directory : o.out;
  fs::create_directories(d);
  return d;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw DataError("cannot write " + p.string());
  os << s;
}

int cmd_moments(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  auto pot = c.make_potential();
  double th = c.limit.theta;
  std::ostringstream os;
  os << "a,I,Iprime,quadrature_error\n";
  char buf[160];
  std::vector<double> as{0.0, 1.0, 2.0, 3.0, 3.0 + th, 4.0};
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  for (double a : as) {
    std::snprintf(buf, sizeof buf, "%.6g,%.12g,%.12g,%.3g\n", a, pot->moment_I(a), pot->moment_Iprime(a),
                  pot->moment_I_error(a));
    os << buf;
  }
  AssumptionReport r = pot->check_assumptions(th);
  std::ostringstream rep;
  rep << "a1_holds," << (r.a1_holds ? "true" : "false") << "\n"
      << "a2_theta," << (r.a2_theta ? std::to_string(*r.a2_theta) : std::string("none")) << "\n";
  std::cout << os.str() << rep.str();
  fs::path d = out_dir(o, c);
  write_text(d / "moments.csv", os.str());
  write_text(d / "assumptions.csv", "key,value\n" + rep.str());
  return kOk;
}

int cmd_kernel_check(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  KernelConfig k = c.kernel_config();
  auto rows = kernel_checks(k, c.make_quadrature().angular);
  std::ostringstream os;
  write_kernel_csv(os, rows);
  std::cout << os.str();
  write_text(fs::path(out_dir(o, c)) / "kernel_check.csv", os.str());
  for (const auto& r : rows)
    if (!r.pass) return kCheckFailed;
  return kOk;
}

int cmd_operator_check(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  auto rows = operator_checks(c.kernel_config(), c.make_grid(), c.make_quadrature());
  std::ostringstream os;
  write_operator_csv(os, rows);
  std::cout << os.str();
  write_text(fs::path(out_dir(o, c)) / "operator_check.csv", os.str());
  for (const auto& r : rows)
    if (!r.pass) return kCheckFailed;
  return kOk;
}

int cmd_evolve(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  fs::path d = out_dir(o, c);
  Model m = c.evolve.model == "landau" ? Model::landau(*c.make_potential())
                                        : Model::uu(c.kernel_config(), c.make_quadrature());
  EvolutionConfig ec = c.evolution_config();
  if (ec.snapshot_stride > 0) ec.snapshot_dir = (d / "snapshots").string();
  DistributionField f0 = c.initial_field();
  write_text(d / "config.resolved.json", c.to_json());
  RunResult r = run(f0, m, ec);
  write_diagnostics_csv((d / "diagnostics.csv").string(), r.diagnostics);
  write_snapshot((d / "final.skf").string(), r.final_state);
  if (r.blew_up) {
    std::cerr << "blow-up: " << r.blowup_message << "\n";
    return kBlowUp;
  }
  info("evolve: " + std::to_string(r.steps) + " steps of dt = " + std::to_string(r.dt));
  return kOk;
}

int cmd_limit_study(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  fs::path d = out_dir(o, c);
  EvolutionConfig ec = c.evolution_config();
  ec.t_final = c.limit.t_final;
  if (ec.dt > ec.t_final) ec.dt = 0;
  LimitStudyOptions opt;
  opt.quad = c.make_quadrature();
  opt.floor_control = c.limit.floor_control;
  opt.snapshot_dir = (d / "R").string();
  DistributionField f0 = c.initial_field();
  if (c.kernel.eps_list.size() < 2)
    throw DegenerateFitError("limit-study needs at least 2 eps values to fit a rate");
  ConvergenceReport rep =
      limit_study(f0, c.kernel_config(), c.kernel.eps_list, ec, c.limit_norm_spec(), c.limit.theta, opt);
  write_report_json((d / "report.json").string(), rep, c.to_json());
  write_report_csv((d / "errors.csv").string(), rep);
  write_gnuplot_script((d / "plot.gp").string(), "errors.csv", rep);
  std::cout << "theta_hat," << rep.theta_hat << "\nr2," << rep.r_squared << "\n";
  if (rep.incomplete) {
    std::cerr << "study incomplete: " << rep.message << "\n";
    return kBlowUp;
  }
  if (rep.degenerate) {
    std::cerr << "degenerate fit: " << rep.message << "\n";
    return kDegenerate;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uehling-Uhlenbeck collision operator and its Landau limit"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* s) {
    s->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "output directory (default: output.directory, ./out)");
    s->add_option("--threads", o.threads, "worker threads (default: hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--seed", o.seed, "reserved; all default algorithms are deterministic");
    s->add_flag("--quiet", o.quiet, "suppress warnings");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const Sub subs[] = {
      {"moments", "moments I_a, I'_a and assumption report", cmd_moments},
      {"kernel-check", "kernel identities and bounds as CSV", cmd_kernel_check},
      {"operator-check", "operator identities as CSV", cmd_operator_check},
      {"evolve", "time integration with diagnostics and snapshots", cmd_evolve},
      {"limit-study", "semi-classical convergence study", cmd_limit_study},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    apps.push_back(app.add_subcommand(s.name, s.help));
    common(apps.back());
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }
  set_quiet(o.quiet);
  set_thread_count(o.threads);
  try {
    for (std::size_t i = 0; i < apps.size(); ++i)
      if (apps[i]->parsed()) return subs[i].fn(o);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kValidation;
  } catch (const DegenerateFitError& e) {
    std::cerr << "degenerate fit: " << e.what() << "\n";
    return kDegenerate;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kOk;
}
