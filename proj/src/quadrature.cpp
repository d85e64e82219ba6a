#include "periodvar/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "periodvar/errors.hpp"

namespace periodvar {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

void apply_rule(const GaussLegendreRule& rule, const VectorIntegrand& f, double a, double b,
                std::vector<std::complex<double>>& sum, std::vector<std::complex<double>>& scratch) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::fill(sum.begin(), sum.end(), std::complex<double>(0.0));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    f(mid + half * rule.nodes[i], scratch);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += rule.weights[i] * scratch[k];
  }
  for (auto& s : sum) s *= half;
}

double max_abs_diff(const std::vector<std::complex<double>>& x, const std::vector<std::complex<double>>& y) {
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

double max_abs(const std::vector<std::complex<double>>& x) {
  double d = 0.0;
  for (const auto& v : x) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const AdaptiveOptions& options) {
  const auto& coarse = gauss_legendre(options.base_nodes);
  const auto& fine = gauss_legendre(2 * options.base_nodes);
  std::vector<std::complex<double>> scratch(dim), lo(dim), hi(dim);

  AdaptiveResult result;
  result.value.assign(dim, 0.0);

  // Tolerance is set once from the whole-interval estimate and distributed
  // over panels in proportion to their width.
  apply_rule(fine, f, a, b, hi, scratch);
  const double total_tol = std::max(options.abs_tol, options.rel_tol * max_abs(hi));
  const double width = b - a;

  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    apply_rule(coarse, f, p.a, p.b, lo, scratch);
    apply_rule(fine, f, p.a, p.b, hi, scratch);
    const double err = max_abs_diff(lo, hi);
    const double allowed = total_tol * std::abs((p.b - p.a) / width);
    if (err <= allowed || err <= 4e-16 * max_abs(hi)) {
      for (std::size_t k = 0; k < dim; ++k) result.value[k] += hi[k];
      result.error_estimate += err;
      ++result.panels;
      continue;
    }
    if (p.depth >= options.max_depth)
      throw PrecisionError("integrate_adaptive: tolerance not reached at maximum subdivision depth");
    const double m = 0.5 * (p.a + p.b);
    // right half pushed first so the left half is processed first
    stack.push_back({m, p.b, p.depth + 1});
    stack.push_back({p.a, m, p.depth + 1});
  }
  return result;
}

}  // namespace periodvar
