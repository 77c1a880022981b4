#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbl/evolve.hpp"
#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"
#include "qbl/operators.hpp"
#include "qbl/potential.hpp"

namespace qbl {

struct PotentialSection {
  std::string kind = "gaussian";  // gaussian | bump | tabulated
  double amplitude = 1;
  double width = 1;               // gaussian only
  std::string table;              // tabulated: CSV path, or
  std::vector<double> r, phi_hat; // tabulated: inline samples
};

struct KernelSection {
  std::string statistics = "fermi_dirac";  // fermi_dirac | bose_einstein
  double eps = 0.5;
  std::vector<double> eps_list{0.4, 0.3, 0.2, 0.1};
};

struct GridSection {
  int n = 16;
  double L = 6;
};

struct QuadratureSection {
  int n_r = 8;
  int n_phi = 8;
  std::string vstar_mode = "thresholded";  // thresholded | full_grid
  double rel_cut = 1e-10;
  std::string interpolation = "tricubic";  // tricubic | trilinear
};

struct EvolveSection {
  std::string model = "uu";  // uu | landau
  double dt = 0;
  double t_final = 0.1;
  bool clamp = true;
  bool conservation_projection = false;
  int snapshot_stride = 0;
};

struct NormSection {
  int N = 0;
  double l = 2;
  double p = 2;  // 1, 2, or infinity ("inf" in JSON)
};

struct LimitSection {
  double theta = 1;
  std::optional<NormSection> norm;
  bool floor_control = true;
  double t_final = 0.05;
};

struct InitialSection {
  std::string kind = "maxwellian";  // maxwellian | fd_equilibrium | perturbed_maxwellian | zero | snapshot
  double rho = 1;
  std::vector<double> u{0, 0, 0};
  double T = 1;
  double beta = 1, c = 0;  // fd_equilibrium, with kernel.eps
  double delta = 0.5;      // perturbed_maxwellian
  double scale = 1;        // multiplies the sampled field
  std::string path;        // snapshot
};

struct OutputSection {
  std::string directory = "./out";
};

struct RunConfig {
  PotentialSection potential;
  KernelSection kernel;
  GridSection grid;
  QuadratureSection quadrature;
  EvolveSection evolve;
  NormSection norm;
  LimitSection limit;
  InitialSection initial;
  OutputSection output;

  // Rejects unknown keys and invalid values with ValidationError naming the key path.
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
  // Fully resolved configuration, every field present.
  std::string to_json() const;
  // Checks every field against module preconditions.
  void validate() const;

  std::shared_ptr<const Potential> make_potential() const;
  KernelConfig kernel_config(std::optional<double> eps = {}) const;
  VelocityGrid make_grid() const;
  CollisionQuadrature make_quadrature() const;
  EvolutionConfig evolution_config() const;
  NormSpec norm_spec() const;
  NormSpec limit_norm_spec() const;
  DistributionField initial_field(std::optional<double> eps = {}) const;
};

}  // namespace qbl
