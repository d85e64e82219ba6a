#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace periodvar {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; rules are cached per n.
const GaussLegendreRule& gauss_legendre(int n);

struct AdaptiveOptions {
  int base_nodes = 16;       // each panel compares base_nodes against 2 * base_nodes
  double abs_tol = 1e-14;
  double rel_tol = 1e-13;
  int max_depth = 40;
};

struct AdaptiveResult {
  std::vector<std::complex<double>> value;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Vector-valued integrand: fills `out` (size `dim`) with f(s).
using VectorIntegrand = std::function<void(double s, std::vector<std::complex<double>>& out)>;

/// Adaptive Gauss-Legendre on [a, b] with node-doubling error estimates and
/// bisection. Panels are visited depth-first in a fixed order, so results are
/// bit-stable. Throws PrecisionError when max_depth is exhausted.
AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const AdaptiveOptions& options = {});

}  // namespace periodvar
