#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "periodvar/acceptance.hpp"
#include "periodvar/lattice.hpp"
#include "periodvar/theta.hpp"

using namespace periodvar;

namespace {

constexpr Complex I{0.0, 1.0};

SiegelPoint point1(Complex t) { return SiegelPoint(CMatrix::Constant(1, 1, t)); }

SiegelPoint point2() {
  CMatrix t(2, 2);
  t << Complex(0.1, 2.0), Complex(0.3, 0.4), Complex(0.3, 0.4), Complex(-0.2, 2.1);
  return SiegelPoint(t);
}

double sigma3(int n) {
  double s = 0.0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += static_cast<double>(d) * d * d;
  return s;
}

}  // namespace

TEST_CASE("characteristics") {
  CHECK(even_characteristics(1).size() == 3);
  CHECK(even_characteristics(2).size() == 10);
  CHECK(even_characteristics(4).size() == 136);
  const auto all = all_characteristics(3);
  REQUIRE(all.size() == 64);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(characteristic_index(all[i]) == i);
  CHECK_THROWS_AS(characteristic_index({{0, 1}, {1}}), ArgumentError);
}

TEST_CASE("Siegel point validation") {
  CMatrix a(2, 2);
  a << I, 0.5, 0.0, I;
  CHECK_THROWS_AS(SiegelPoint{a}, ArgumentError);
  CHECK_THROWS_AS(point1(Complex(0.3, -1.0)), DomainError);
  const auto b = SiegelPoint::block_diagonal(point2(), 5.0 * I);
  CHECK(b.g() == 3);
  CHECK(b.T(2, 2) == 5.0 * I);
  CHECK(b.T(0, 2) == 0.0);
}

TEST_CASE("classical genus-1 values") {
  const double ref = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
  CHECK(std::abs(theta_constant({{0}, {0}}, point1(I)) - ref) < 1e-12);

  const auto th = all_theta_constants(point1(2.0 * I));
  CHECK(std::abs(std::pow(th[2], 4) + std::pow(th[1], 4) - std::pow(th[0], 4)) < 1e-12);
  CHECK(std::abs(th[3]) < 1e-14);

  CHECK(std::abs(j_invariant(point1(I)) - 1728.0) < 1e-9);
  // q-expansion of j at tau = 2i, q = exp(-4 pi)
  const double q = std::exp(-4.0 * std::numbers::pi);
  const double jq = 1.0 / q + 744.0 + 196884.0 * q + 21493760.0 * q * q + 864299970.0 * q * q * q +
                    20245856256.0 * q * q * q * q;
  CHECK(std::abs(j_invariant(point1(2.0 * I)) - jq) < 1e-9 * jq);
  CHECK_THROWS_AS(j_invariant(point2()), DomainError);
}

TEST_CASE("odd constants vanish and even ones are periodic") {
  std::mt19937_64 rng(3);
  for (int g = 1; g <= 4; ++g) {
    const auto T = acceptance::random_siegel_point(g, rng);
    const auto th = all_theta_constants(T);
    for (const auto& ch : all_characteristics(g))
      if (!ch.even()) CHECK(std::abs(th[characteristic_index(ch)]) < 1e-12);
  }
  const auto T = acceptance::random_siegel_point(3, rng);
  Eigen::MatrixXi s(3, 3);
  s << 1, -1, 0, -1, 2, 1, 0, 1, 0;
  const SiegelPoint shifted(T.T + 2.0 * s.cast<double>().cast<Complex>());
  // each term picks up exp(pi i k^T S k / 2) with k = 2n + eps, which is
  // exp(pi i eps^T S eps / 2) for every n
  for (const auto& ch : even_characteristics(3)) {
    const Eigen::VectorXi e = Eigen::Map<const Eigen::VectorXi>(ch.eps.data(), 3);
    const int ese = e.dot(s * e);
    const Complex phase = std::exp(std::numbers::pi * I * (ese / 2.0));
    const Complex a = theta_constant(ch, T);
    CHECK(std::abs(theta_constant(ch, shifted) - phase * a) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("theta constants agree with and without lattice reduction") {
  std::mt19937_64 rng(8);
  const auto T = acceptance::random_siegel_point(3, rng, 0.4);
  ThetaOptions raw;
  raw.reduce = false;
  for (const auto& ch : even_characteristics(3)) {
    const Complex a = theta_constant(ch, T);
    CHECK(std::abs(theta_constant(ch, T, raw) - a) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("LLL reduction is unimodular") {
  Eigen::MatrixXd y(3, 3);
  y << 5.0, 4.9, 0.3, 4.9, 5.0, 0.2, 0.3, 0.2, 1.0;
  const Eigen::MatrixXi u = lll_reduce(y);
  CHECK(std::abs(std::abs(u.cast<double>().determinant()) - 1.0) < 1e-12);
  const Eigen::MatrixXd r = u.cast<double>().transpose() * y * u.cast<double>();
  // the short vector e1 - e2 (norm 0.2) must be found
  CHECK(r.diagonal().minCoeff() < 0.21);
  CHECK(std::abs(r.determinant() - y.determinant()) < 1e-9);
}

TEST_CASE("lattice data") {
  const auto e8 = LatticeSpec::e8();
  const auto d16 = LatticeSpec::d16_plus();
  CHECK(e8.determinant() == doctest::Approx(1.0));
  CHECK(d16.determinant() == doctest::Approx(1.0));
  const auto ce = enumerate_vectors(e8, 4).norm_counts();
  CHECK(ce[0] == 1);
  CHECK(ce[2] == 240);
  CHECK(ce[4] == 2160);
  const auto cd = enumerate_vectors(d16, 6).norm_counts();
  CHECK(cd[2] == 480);
  CHECK(cd[4] == 61920);
  CHECK(cd[6] == 1050240);
  CHECK(LatticeSpec::by_name("D16plus").rank() == 16);
  CHECK_THROWS_AS(LatticeSpec::by_name("A2"), ArgumentError);

  LatticeSpec odd{"odd", Eigen::MatrixXi::Identity(2, 2), {}};
  CHECK_THROWS_AS(odd.validate(), ArgumentError);
}

TEST_CASE("E8 theta series against the Eisenstein series") {
  const Complex tau(0.25, 1.1);
  const Complex q = std::exp(2.0 * std::numbers::pi * I * tau);
  Complex e4 = 1.0, qn = 1.0;
  for (int n = 1; n <= 30; ++n) {
    qn *= q;
    e4 += 240.0 * sigma3(n) * qn;
  }
  const auto lat = lattice_theta(LatticeSpec::e8(), point1(tau), {16});
  CHECK(std::abs(lat.value - e4) < 1e-8);
  CHECK(std::abs(theta_series_via_constants(LatticeFamily::e8, point1(tau)) - e4) < 1e-10);
}

TEST_CASE("lattice sums against theta-constant expressions") {
  const auto t1 = point1(Complex(0.3, 2.0));
  const auto t2 = point2();
  for (const auto* T : {&t1, &t2}) {
    const auto e = lattice_theta(LatticeSpec::e8(), *T, {12});
    CHECK(std::abs(e.value - theta_series_via_constants(LatticeFamily::e8, *T)) < 1e-6);
    const auto d = lattice_theta(LatticeSpec::d16_plus(), *T, {6});
    CHECK(std::abs(d.value - theta_series_via_constants(LatticeFamily::d16_plus, *T)) < 1e-6);
    CHECK(std::abs(e.value * e.value - theta_series_via_constants(LatticeFamily::e8_squared, *T)) < 1e-6);
  }
  // far up the imaginary axis only the zero tuple survives
  CHECK(std::abs(lattice_theta(LatticeSpec::e8(), point1(40.0 * I), {4}).value - 1.0) < 1e-14);
  CHECK(std::abs(theta_series_via_constants(LatticeFamily::d16_plus, point1(40.0 * I)) - 1.0) < 1e-14);

  const auto small = lattice_theta(LatticeSpec::e8(), point1(Complex(0.0, 0.5)), {2});
  CHECK(small.truncation_warning);
  CHECK(small.tail_estimate > 1e-8);

  CMatrix t3 = CMatrix::Identity(3, 3) * (2.0 * I);
  CHECK_THROWS_AS(lattice_theta(LatticeSpec::d16_plus(), SiegelPoint(t3), {6}), ArgumentError);
}

TEST_CASE("Schottky form vanishes in degree up to 3") {
  std::mt19937_64 rng(13);
  for (int g = 1; g <= 3; ++g)
    for (int k = 0; k < 2; ++k) CHECK(schottky_form(acceptance::random_siegel_point(g, rng)).relative() < 1e-10);
}

TEST_CASE("Phi operator") {
  const std::vector<double> ts{2.0, 4.0, 6.0, 8.0, 10.0};
  const SiegelForm e8 = [](const SiegelPoint& T) { return theta_series_via_constants(LatticeFamily::e8, T); };
  const auto tau = point1(Complex(0.1, 1.2));
  const auto phi = siegel_phi(e8, tau, ts);
  CHECK(std::abs(phi.value - lattice_theta(LatticeSpec::e8(), tau, {14}).value) < 1e-6);
  CHECK(phi.differences.size() == 4);
  for (std::size_t i = 1; i < phi.differences.size(); ++i) CHECK(phi.differences[i] <= phi.differences[i - 1]);

  CHECK_THROWS_AS(siegel_phi(e8, tau, {2.0, 4.0}), ArgumentError);
  CHECK_THROWS_AS(siegel_phi(e8, tau, {4.0, 2.0, 10.0}), ArgumentError);
  const SiegelForm growing = [](const SiegelPoint& T) { return std::exp(-I * T.T(T.g() - 1, T.g() - 1)); };
  CHECK_THROWS_AS(siegel_phi(growing, tau, ts), DiagnosticFailure);
}
