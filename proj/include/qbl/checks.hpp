#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"
#include "qbl/operators.hpp"

namespace qbl {

struct CheckRow {
  std::string name;
  double value = 0;
  double reference = 0;
  double tolerance = 0;
  double rel_error = 0;
  bool pass = false;
};

// Kernel identities and bounds for one configuration.
std::vector<CheckRow> kernel_checks(const KernelConfig& cfg, const AngularQuadrature& quad);

// Operator identities on the given grid: decomposition, gain/loss, weak conservation,
// detailed balance of the equilibria, and the Landau matrix structure.
std::vector<CheckRow> operator_checks(const KernelConfig& cfg, const VelocityGrid& grid,
                                      const CollisionQuadrature& quad);

// Largest interpolation error of f against its exact values at the cell centres, relative
// to max |f|; sets the interpolation-limited tolerance of the equilibrium check.
double interpolation_error_estimate(const DistributionField& f,
                                   const std::function<double(const Vec3&)>& exact,
                                   Interpolation scheme);

void write_kernel_csv(std::ostream& os, const std::vector<CheckRow>& rows);
void write_operator_csv(std::ostream& os, const std::vector<CheckRow>& rows);

}  // namespace qbl
