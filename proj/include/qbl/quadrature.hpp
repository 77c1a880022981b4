#pragma once

#include <functional>
#include <vector>

namespace qbl {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

// The same rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
Rule composite_gauss_legendre(int order, int panels, double a, double b);

struct AdaptiveResult {
  double value = 0;
  double error = 0;
  int intervals = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;  // accepted when error <= abs_tol * (1 + |value|)
  int max_depth = 40;
  int max_intervals = 20000;
  bool throw_on_failure = true;
};

// Globally adaptive bisection on a 7-point Gauss / 15-point Kronrod pair. The optional
// breakpoints seed the initial partition (kinks, support edges). Throws AccuracyError
// if the estimate stays above tolerance once every interval is at max depth.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const AdaptiveOptions& opt = {},
                                  const std::vector<double>& breakpoints = {});

}  // namespace qbl
