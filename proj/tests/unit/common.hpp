#pragma once

#include <cmath>
#include <memory>

#include "qbl/grid.hpp"
#include "qbl/kernel.hpp"
#include "qbl/operators.hpp"

namespace qbl::test {

inline KernelConfig gaussian_cfg(double eps, Statistics s = Statistics::FermiDirac) {
  return {eps, s, std::make_shared<const Potential>(Potential::gaussian(1, 1))};
}

inline CollisionQuadrature small_quad(Interpolation in = Interpolation::Tricubic) {
  CollisionQuadrature q;
  q.angular = AngularQuadrature(4, 4);
  q.interpolation = in;
  return q;
}

inline double max_diff(const DistributionField& a, const DistributionField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace qbl::test
