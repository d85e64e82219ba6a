#include <cmath>
#include <random>

#include "doctest.h"
#include "periodvar/acceptance.hpp"
#include "periodvar/hyperelliptic.hpp"
#include "periodvar/theta.hpp"

using namespace periodvar;

namespace {

const double s3 = std::sqrt(3.0) / 2.0;

// 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2) for the cross-ratio l.
Complex j_from_lambda(Complex l) {
  return 256.0 * std::pow(l * l - l + 1.0, 3) / (l * l * (l - 1.0) * (l - 1.0));
}

Complex j_of_curve(const HyperellipticCurve& c) {
  return j_invariant(SiegelPoint(period_matrix(c).symmetric_tau()));
}

HyperellipticCurve g2() {
  return HyperellipticCurve({Complex(0.1, 0.2), Complex(1, -0.3), Complex(-1, 0.5), Complex(2, 1), Complex(-0.5, -1.5)});
}

}  // namespace

TEST_CASE("j_algebraic oracles") {
  CHECK(std::abs(j_algebraic(HyperellipticCurve({0.0, 1.0, -1.0}, true)) - 1728.0) < 1e-9);
  CHECK(std::abs(j_algebraic(HyperellipticCurve({1.0, Complex(-0.5, s3), Complex(-0.5, -s3)}, true))) < 1e-9);
  // four finite points with cross-ratio l: {0, 1, l, inf} moved by x -> 1 / (x - 3)
  const Complex l(0.3, 0.7);
  std::vector<Complex> moved;
  for (Complex x : {Complex(0.0), Complex(1.0), l}) moved.push_back(1.0 / (x - 3.0));
  moved.push_back(0.0);  // image of infinity
  const Complex j = j_from_lambda(l);
  CHECK(std::abs(j_algebraic(HyperellipticCurve(moved)) - j) < 1e-9 * std::abs(j));
  CHECK(std::abs(j_algebraic(HyperellipticCurve({0.0, 1.0, l}, true)) - j) < 1e-9 * std::abs(j));
  CHECK_THROWS_AS(j_algebraic(g2()), DomainError);
}

TEST_CASE("genus-1 periods reproduce j") {
  CHECK(std::abs(j_of_curve(HyperellipticCurve({0.0, 1.0, -1.0}, true)) - 1728.0) < 1e-6 * 1728.0);
  CHECK(std::abs(j_of_curve(HyperellipticCurve({1.0, Complex(-0.5, s3), Complex(-0.5, -s3)}, true))) < 1e-6);
  const HyperellipticCurve c({Complex(0.2, 0.1), Complex(1.3, -0.4), Complex(-0.7, 0.9), Complex(0.5, 1.6)});
  const Complex ja = j_algebraic(c);
  CHECK(std::abs(j_of_curve(c) - ja) < 1e-6 * std::abs(ja));
}

TEST_CASE("translation leaves j unchanged") {
  const std::vector<Complex> base{Complex(0.2, 0.1), Complex(1.3, -0.4), Complex(-0.7, 0.9), Complex(0.5, 1.6)};
  const Complex j0 = j_of_curve(HyperellipticCurve(base));
  for (Complex c : {Complex(0.01, 0.0), Complex(-0.02, 0.015)}) {
    std::vector<Complex> shifted;
    for (Complex b : base) shifted.push_back(b + c);
    CHECK(std::abs(j_of_curve(HyperellipticCurve(shifted)) - j0) < 1e-6 * std::abs(j0));
  }
}

TEST_CASE("random genus-2 and genus-3 curves give Riemann matrices") {
  std::mt19937_64 rng(5);
  for (int g : {2, 3})
    for (int k = 0; k < 4; ++k) {
      const auto rm = period_matrix(acceptance::random_curve(g, k % 2 == 0, rng));
      CHECK(rm.symmetry_defect() < 1e-6);
      CHECK(rm.min_imag_eigenvalue() > 0.0);
      CHECK(rm.error_estimate() < 1e-8);
    }
}

TEST_CASE("relabeling and translation at genus 2") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  auto pts = c.finite_branch_points();
  std::reverse(pts.begin(), pts.end());
  const auto rm2 = period_matrix(HyperellipticCurve(pts));
  CHECK((rm.tau() - rm2.tau()).norm() < 1e-12 * rm.tau().norm());

  for (auto& p : pts) p += Complex(0.003, -0.002);
  const auto rm3 = period_matrix(HyperellipticCurve(pts));
  CHECK(rm3.symmetry_defect() < 1e-6);
  CHECK(rm3.min_imag_eigenvalue() > 0.0);
}

TEST_CASE("period_matrix is deterministic") {
  const auto a = period_matrix(g2());
  const auto b = period_matrix(g2());
  CHECK(a.tau() == b.tau());
}

TEST_CASE("near-coincident branch points are rejected") {
  CHECK_THROWS_AS(HyperellipticCurve({0.0, 1.0, 1.0, 2.0}), ConditioningError);
  CHECK_THROWS_AS(HyperellipticCurve({0.0, 1.0}), ArgumentError);
}

TEST_CASE("differentials at points") {
  const HyperellipticCurve c1({0.0, 1.0, -1.0}, true);
  const auto rm1 = period_matrix(c1);
  const auto p = point_on_sheet(c1, Complex(0.3, 0.4), 1);
  const CVector w = normalized_differentials_at(c1, rm1, p);
  CHECK(std::abs(w(0) - rm1.normalization()(0, 0) / p.y) < 1e-13);

  const auto c = g2();
  const auto rm = period_matrix(c);
  const auto q = point_on_sheet(c, Complex(0.4, -0.6), 1);
  const auto q_flip = point_on_sheet(c, Complex(0.4, -0.6), -1);
  CHECK((normalized_differentials_at(c, rm, q) + normalized_differentials_at(c, rm, q_flip)).norm() < 1e-14);

  // at lambda_k with z = sqrt(x - lambda_k): 2 lambda^p / sqrt(prod (lambda_k - lambda_i)), up to sign
  const int k = 2;
  const auto& lam = c.finite_branch_points();
  Complex prod = 1.0;
  for (int i = 0; i < static_cast<int>(lam.size()); ++i)
    if (i != k) prod *= lam[k] - lam[i];
  const CVector raw = raw_differentials_at(c, branch_point(c, k));
  for (int e = 0; e < 2; ++e) {
    const Complex expect = 2.0 * std::pow(lam[k], e) / std::sqrt(prod);
    CHECK(std::min(std::abs(raw(e) - expect), std::abs(raw(e) + expect)) < 1e-12);
  }
  CHECK(std::abs(raw(1) / raw(0) - lam[k]) < 1e-12);
}

TEST_CASE("Abel-Jacobi basics") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  const CMatrix tau = rm.symmetric_tau();
  const auto p = point_on_sheet(c, Complex(0.4, -0.6), 1);
  const auto q = point_on_sheet(c, Complex(-0.3, 1.1), -1);
  CHECK(abel_jacobi(c, rm, p, p).value.norm() == 0.0);
  const CVector pq = abel_jacobi(c, rm, p, q).value;
  const CVector qp = abel_jacobi(c, rm, q, p).value;
  CHECK(lattice_distance(tau, pq + qp) < 1e-8);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      const CVector v = abel_jacobi(c, rm, branch_point(c, i), branch_point(c, j)).value;
      CHECK(lattice_distance(tau, 2.0 * v) < 1e-5);
    }
  // reduction is idempotent
  const auto r1 = reduce_mod_lattice(tau, pq);
  const auto r2 = reduce_mod_lattice(tau, r1.reduced);
  CHECK((r1.reduced - r2.reduced).norm() < 1e-12);
  CHECK(r2.m.isZero());
  CHECK(r2.n.isZero());
  CHECK(equal_mod_lattice(tau, pq, pq + tau.col(0) + CVector::Ones(2), 1e-10));
}

TEST_CASE("Abel-Jacobi derivative is the differential") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  const auto p = point_on_sheet(c, Complex(0.4, -0.6), 1);
  const double h = 1e-4;
  const auto fwd = continue_along_segment(c, p, p.x + h);
  const auto back = continue_along_segment(c, p, p.x - h);
  // the path may pick up a lattice vector, so compare modulo the lattice
  const CVector step = abel_jacobi(c, rm, back, fwd).value - 2.0 * h * normalized_differentials_at(c, rm, p);
  CHECK(lattice_distance(rm.symmetric_tau(), step) < 1e-10);
}
