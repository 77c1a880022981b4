#include "qbl/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qbl/error.hpp"

namespace qbl {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& section(const json& root, const std::string& key, const json& empty) {
  auto it = root.find(key);
  if (it == root.end()) return empty;
  if (!it->is_object()) throw ValidationError(key, "must be an object");
  return *it;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ValidationError(join(path, it.key()), "unknown key");
}

void read(const json& j, const std::string& path, const char* key, double& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number()) throw ValidationError(join(path, key), "must be a number");
  out = it->get<double>();
}

void read(const json& j, const std::string& path, const char* key, int& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer()) throw ValidationError(join(path, key), "must be an integer");
  out = it->get<int>();
}

void read(const json& j, const std::string& path, const char* key, bool& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_boolean()) throw ValidationError(join(path, key), "must be a boolean");
  out = it->get<bool>();
}

void read(const json& j, const std::string& path, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_string()) throw ValidationError(join(path, key), "must be a string");
  out = it->get<std::string>();
}

void read(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array()) throw ValidationError(join(path, key), "must be an array of numbers");
  out.clear();
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number())
      throw ValidationError(join(path, key) + "[" + std::to_string(i) + "]", "must be a number");
    out.push_back((*it)[i].get<double>());
  }
}

NormSection read_norm(const json& j, const std::string& path) {
  only_keys(j, path, {"N", "l", "p"});
  NormSection n;
  read(j, path, "N", n.N);
  read(j, path, "l", n.l);
  auto it = j.find("p");
  if (it != j.end()) {
    if (it->is_string() && (it->get<std::string>() == "inf" || it->get<std::string>() == "infinity"))
      n.p = std::numeric_limits<double>::infinity();
    else if (it->is_number())
      n.p = it->get<double>();
    else
      throw ValidationError(join(path, "p"), "must be 1, 2 or \"inf\"");
  }
  return n;
}

json norm_json(const NormSection& n) {
  json j;
  j["N"] = n.N;
  j["l"] = n.l;
  if (std::isinf(n.p)) j["p"] = "inf";
  else j["p"] = n.p;
  return j;
}

void check_norm(const NormSection& n, const std::string& path) {
  if (n.N < 0 || n.N > 3) throw ValidationError(join(path, "N"), "must lie in 0..3");
  if (!std::isfinite(n.l)) throw ValidationError(join(path, "l"), "must be finite");
  if (!(n.p == 1 || n.p == 2 || std::isinf(n.p))) throw ValidationError(join(path, "p"), "must be 1, 2 or \"inf\"");
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("", "top level must be an object");
  only_keys(root, "", {"potential", "kernel", "grid", "quadrature", "evolve", "norm", "limit", "initial", "output"});
  const json empty = json::object();
  RunConfig c;

  const json& p = section(root, "potential", empty);
  only_keys(p, "potential", {"kind", "amplitude", "width", "table", "r", "phi_hat"});
  read(p, "potential", "kind", c.potential.kind);
  read(p, "potential", "amplitude", c.potential.amplitude);
  read(p, "potential", "width", c.potential.width);
  read(p, "potential", "table", c.potential.table);
  read(p, "potential", "r", c.potential.r);
  read(p, "potential", "phi_hat", c.potential.phi_hat);

  const json& k = section(root, "kernel", empty);
  only_keys(k, "kernel", {"statistics", "eps", "eps_list"});
  read(k, "kernel", "statistics", c.kernel.statistics);
  read(k, "kernel", "eps", c.kernel.eps);
  read(k, "kernel", "eps_list", c.kernel.eps_list);

  const json& g = section(root, "grid", empty);
  only_keys(g, "grid", {"n", "L"});
  read(g, "grid", "n", c.grid.n);
  read(g, "grid", "L", c.grid.L);

  const json& q = section(root, "quadrature", empty);
  only_keys(q, "quadrature", {"n_r", "n_phi", "vstar_mode", "rel_cut", "interpolation"});
  read(q, "quadrature", "n_r", c.quadrature.n_r);
  read(q, "quadrature", "n_phi", c.quadrature.n_phi);
  read(q, "quadrature", "vstar_mode", c.quadrature.vstar_mode);
  read(q, "quadrature", "rel_cut", c.quadrature.rel_cut);
  read(q, "quadrature", "interpolation", c.quadrature.interpolation);

  const json& e = section(root, "evolve", empty);
  only_keys(e, "evolve", {"model", "dt", "t_final", "clamp", "conservation_projection", "snapshot_stride"});
  read(e, "evolve", "model", c.evolve.model);
  read(e, "evolve", "dt", c.evolve.dt);
  read(e, "evolve", "t_final", c.evolve.t_final);
  read(e, "evolve", "clamp", c.evolve.clamp);
  read(e, "evolve", "conservation_projection", c.evolve.conservation_projection);
  read(e, "evolve", "snapshot_stride", c.evolve.snapshot_stride);

  const json& n = section(root, "norm", empty);
  c.norm = read_norm(n, "norm");

  const json& l = section(root, "limit", empty);
  only_keys(l, "limit", {"theta", "norm", "floor_control", "t_final"});
  read(l, "limit", "theta", c.limit.theta);
  read(l, "limit", "floor_control", c.limit.floor_control);
  read(l, "limit", "t_final", c.limit.t_final);
  if (auto it = l.find("norm"); it != l.end()) {
    if (it->is_null()) c.limit.norm.reset();
    else if (it->is_object()) c.limit.norm = read_norm(*it, "limit.norm");
    else throw ValidationError("limit.norm", "must be an object or null");
  }

  const json& i = section(root, "initial", empty);
  only_keys(i, "initial", {"kind", "rho", "u", "T", "beta", "c", "delta", "scale", "path"});
  read(i, "initial", "kind", c.initial.kind);
  read(i, "initial", "rho", c.initial.rho);
  read(i, "initial", "u", c.initial.u);
  read(i, "initial", "T", c.initial.T);
  read(i, "initial", "beta", c.initial.beta);
  read(i, "initial", "c", c.initial.c);
  read(i, "initial", "delta", c.initial.delta);
  read(i, "initial", "scale", c.initial.scale);
  read(i, "initial", "path", c.initial.path);

  const json& o = section(root, "output", empty);
  only_keys(o, "output", {"directory"});
  read(o, "output", "directory", c.output.directory);

  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("--config", "cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["potential"] = {{"kind", potential.kind}, {"amplitude", potential.amplitude}, {"width", potential.width},
                    {"table", potential.table}, {"r", potential.r}, {"phi_hat", potential.phi_hat}};
  j["kernel"] = {{"statistics", kernel.statistics}, {"eps", kernel.eps}, {"eps_list", kernel.eps_list}};
  j["grid"] = {{"n", grid.n}, {"L", grid.L}};
  j["quadrature"] = {{"n_r", quadrature.n_r}, {"n_phi", quadrature.n_phi}, {"vstar_mode", quadrature.vstar_mode},
                     {"rel_cut", quadrature.rel_cut}, {"interpolation", quadrature.interpolation}};
  j["evolve"] = {{"model", evolve.model}, {"dt", evolve.dt}, {"t_final", evolve.t_final}, {"clamp", evolve.clamp},
                 {"conservation_projection", evolve.conservation_projection},
                 {"snapshot_stride", evolve.snapshot_stride}};
  j["norm"] = norm_json(norm);
  j["limit"] = {{"theta", limit.theta}, {"norm", limit.norm ? norm_json(*limit.norm) : json(nullptr)},
                {"floor_control", limit.floor_control}, {"t_final", limit.t_final}};
  j["initial"] = {{"kind", initial.kind}, {"rho", initial.rho}, {"u", initial.u}, {"T", initial.T},
                  {"beta", initial.beta}, {"c", initial.c}, {"delta", initial.delta},
                  {"scale", initial.scale}, {"path", initial.path}};
  j["output"] = {{"directory", output.directory}};
  return j.dump(2) + "\n";
}

void RunConfig::validate() const {
  const auto& p = potential;
  if (p.kind != "gaussian" && p.kind != "bump" && p.kind != "tabulated")
    throw ValidationError("potential.kind", "must be gaussian, bump or tabulated");
  if (!std::isfinite(p.amplitude)) throw ValidationError("potential.amplitude", "must be finite");
  if (p.kind == "gaussian" && !(p.width > 0)) throw ValidationError("potential.width", "must be > 0");
  if (p.kind == "tabulated") {
    if (p.table.empty() && p.r.empty()) throw ValidationError("potential.table", "tabulated potential needs a table path or inline r/phi_hat");
    if (!p.table.empty() && !p.r.empty()) throw ValidationError("potential.table", "give either a table path or inline samples, not both");
    if (p.r.size() != p.phi_hat.size()) throw ValidationError("potential.phi_hat", "must have the same length as potential.r");
  }
  if (kernel.statistics != "fermi_dirac" && kernel.statistics != "bose_einstein")
    throw ValidationError("kernel.statistics", "must be fermi_dirac or bose_einstein");
  if (!(kernel.eps > 0 && kernel.eps < 1)) throw ValidationError("kernel.eps", "must lie in (0, 1)");
  for (std::size_t i = 0; i < kernel.eps_list.size(); ++i) {
    std::string kp = "kernel.eps_list[" + std::to_string(i) + "]";
    if (!(kernel.eps_list[i] > 0 && kernel.eps_list[i] < 1)) throw ValidationError(kp, "must lie in (0, 1)");
    if (i > 0 && !(kernel.eps_list[i] < kernel.eps_list[i - 1])) throw ValidationError(kp, "must be strictly decreasing");
  }
  if (grid.n < 8 || grid.n % 2 != 0) throw ValidationError("grid.n", "must be even and >= 8");
  if (!(grid.L > 0) || !std::isfinite(grid.L)) throw ValidationError("grid.L", "must be > 0");
  if (quadrature.n_r < 4) throw ValidationError("quadrature.n_r", "must be >= 4");
  if (quadrature.n_phi < 4 || quadrature.n_phi > 64) throw ValidationError("quadrature.n_phi", "must lie in 4..64");
  if (quadrature.vstar_mode != "thresholded" && quadrature.vstar_mode != "full_grid")
    throw ValidationError("quadrature.vstar_mode", "must be thresholded or full_grid");
  if (!(quadrature.rel_cut >= 0 && quadrature.rel_cut <= 1e-8))
    throw ValidationError("quadrature.rel_cut", "must lie in [0, 1e-8]");
  if (quadrature.interpolation != "tricubic" && quadrature.interpolation != "trilinear")
    throw ValidationError("quadrature.interpolation", "must be tricubic or trilinear");
  if (evolve.model != "uu" && evolve.model != "landau") throw ValidationError("evolve.model", "must be uu or landau");
  if (!(evolve.t_final > 0)) throw ValidationError("evolve.t_final", "must be > 0");
  if (!(evolve.dt >= 0)) throw ValidationError("evolve.dt", "must be >= 0 (0 selects the default)");
  if (evolve.dt > evolve.t_final) throw ValidationError("evolve.dt", "must not exceed evolve.t_final");
  if (evolve.snapshot_stride < 0) throw ValidationError("evolve.snapshot_stride", "must be >= 0");
  check_norm(norm, "norm");
  if (!(limit.theta > 0 && limit.theta <= 1)) throw ValidationError("limit.theta", "must lie in (0, 1]");
  if (limit.norm) check_norm(*limit.norm, "limit.norm");
  if (!(limit.t_final > 0)) throw ValidationError("limit.t_final", "must be > 0");
  const auto& in = initial;
  if (in.kind != "maxwellian" && in.kind != "fd_equilibrium" && in.kind != "perturbed_maxwellian" &&
      in.kind != "zero" && in.kind != "snapshot")
    throw ValidationError("initial.kind", "must be maxwellian, fd_equilibrium, perturbed_maxwellian, zero or snapshot");
  if (!(in.rho >= 0)) throw ValidationError("initial.rho", "must be >= 0");
  if (in.u.size() != 3) throw ValidationError("initial.u", "must have 3 entries");
  if (!(in.T > 0)) throw ValidationError("initial.T", "must be > 0");
  if (!(in.beta > 0)) throw ValidationError("initial.beta", "must be > 0");
  if (!(in.scale >= 0)) throw ValidationError("initial.scale", "must be >= 0");
  if (in.kind == "perturbed_maxwellian" && std::abs(in.delta) > std::exp(1.0) / 4)
    throw ValidationError("initial.delta", "must satisfy |delta| <= e/4 for nonnegative data");
  if (in.kind == "snapshot" && in.path.empty()) throw ValidationError("initial.path", "required for snapshot initial data");
  if (output.directory.empty()) throw ValidationError("output.directory", "must not be empty");
}

std::shared_ptr<const Potential> RunConfig::make_potential() const {
  try {
    if (potential.kind == "gaussian")
      return std::make_shared<const Potential>(Potential::gaussian(potential.amplitude, potential.width));
    if (potential.kind == "bump") return std::make_shared<const Potential>(Potential::bump(potential.amplitude));
    if (!potential.table.empty()) return std::make_shared<const Potential>(Potential::from_csv(potential.table));
    return std::make_shared<const Potential>(Potential::tabulated(potential.r, potential.phi_hat));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(potential.kind == "tabulated" ? "potential.table" : "potential", e.what());
  }
}

KernelConfig RunConfig::kernel_config(std::optional<double> eps) const {
  Statistics s = kernel.statistics == "bose_einstein" ? Statistics::BoseEinstein : Statistics::FermiDirac;
  return KernelConfig(eps.value_or(kernel.eps), s, make_potential());
}

VelocityGrid RunConfig::make_grid() const { return VelocityGrid(grid.n, grid.L); }

CollisionQuadrature RunConfig::make_quadrature() const {
  CollisionQuadrature q;
  q.angular = AngularQuadrature(quadrature.n_r, quadrature.n_phi);
  q.vstar_mode = quadrature.vstar_mode == "full_grid" ? VstarMode::FullGrid : VstarMode::Thresholded;
  q.rel_cut = quadrature.rel_cut;
  q.interpolation = quadrature.interpolation == "trilinear" ? Interpolation::Trilinear : Interpolation::Tricubic;
  return q;
}

EvolutionConfig RunConfig::evolution_config() const {
  EvolutionConfig e;
  e.dt = evolve.dt;
  e.t_final = evolve.t_final;
  e.clamp = evolve.clamp;
  e.conservation_projection = evolve.conservation_projection;
  e.snapshot_stride = evolve.snapshot_stride;
  e.norm = norm_spec();
  return e;
}

NormSpec RunConfig::norm_spec() const { return NormSpec{norm.N, norm.l, norm.p}; }

NormSpec RunConfig::limit_norm_spec() const {
  const NormSection& n = limit.norm ? *limit.norm : norm;
  return NormSpec{n.N, n.l, n.p};
}

DistributionField RunConfig::initial_field(std::optional<double> eps) const {
  VelocityGrid g = make_grid();
  const auto& in = initial;
  DistributionField f(g);
  if (in.kind == "snapshot") {
    f = read_snapshot(in.path);
    if (!(f.grid == g)) throw ValidationError("initial.path", "snapshot grid differs from the grid section");
  } else if (in.kind == "maxwellian") {
    Vec3 u{in.u[0], in.u[1], in.u[2]};
    f = sample([&](const Vec3& v) { return maxwellian(v, in.rho, u, in.T); }, g);
  } else if (in.kind == "fd_equilibrium") {
    double e = eps.value_or(kernel.eps);
    f = sample([&](const Vec3& v) { return fd_equilibrium(v, e, in.beta, in.c); }, g);
  } else if (in.kind == "perturbed_maxwellian") {
    f = sample([&](const Vec3& v) { return perturbed_maxwellian(v, in.delta); }, g);
  }
  if (in.scale != 1)
    for (double& v : f.values) v *= in.scale;
  return f;
}

}  // namespace qbl
