#include <cmath>
#include <numbers>

#include "doctest.h"
#include "periodvar/errors.hpp"
#include "periodvar/quadrature.hpp"

using namespace periodvar;

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 4, 16, 33}) {
    const auto& r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
  // exact for degree 2n - 1: integral of x^6 over [-1, 1] with n = 4
  const auto& r = gauss_legendre(4);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 6);
  CHECK(s == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration against closed forms") {
  const auto res = integrate_adaptive(
      [](double s, std::vector<std::complex<double>>& out) {
        out[0] = std::exp(std::complex<double>(0.0, s));
        out[1] = 1.0 / (1.0 + s * s);
      },
      2, 0.0, 1.0);
  CHECK(std::abs(res.value[0] - std::complex<double>(std::sin(1.0), 1.0 - std::cos(1.0))) < 1e-13);
  CHECK(std::abs(res.value[1] - std::numbers::pi / 4.0) < 1e-13);
}

TEST_CASE("non-convergence is reported") {
  AdaptiveOptions opts;
  opts.max_depth = 2;
  CHECK_THROWS_AS(integrate_adaptive([](double s, std::vector<std::complex<double>>& out) { out[0] = std::sin(1.0 / s); },
                                     1, 1e-6, 1.0, opts),
                  PrecisionError);
}
