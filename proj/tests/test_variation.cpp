#include <cmath>
#include <numbers>

#include "doctest.h"
#include "periodvar/variation.hpp"

using namespace periodvar;

namespace {

constexpr Complex I{0.0, 1.0};
const Complex two_pi_i = 2.0 * std::numbers::pi * I;

HyperellipticCurve g2() {
  return HyperellipticCurve({Complex(0.1, 0.2), Complex(1, -0.3), Complex(-1, 0.5), Complex(2, 1), Complex(-0.5, -1.5)});
}

FamilySpec collision(std::vector<double> grid) {
  return FamilySpec{HyperellipticCurve({-1.0, 1.0, 2.0, 3.0, 4.0, 5.0}),
                    Deformation{Deformation::Kind::collide, 0, 1, 1.0}, std::move(grid)};
}

std::vector<double> log_grid(double hi, double lo, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (count - 1)));
  return g;
}

}  // namespace

TEST_CASE("Schiffer tensor structure") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  for (const auto& p : {point_on_sheet(c, Complex(0.4, -0.6), 1), branch_point(c, 3)}) {
    const auto s = schiffer_tensor(c, rm, p);
    CHECK(s.rank_ratio() < 1e-12);
    const CVector w = normalized_differentials_at(c, rm, p);
    CHECK((s.matrix - two_pi_i * w * w.transpose()).norm() < 1e-13 * s.matrix.norm());
    for (Complex l : {Complex(2.0), I, Complex(1.0, 1.0)}) {
      const auto sl = schiffer_tensor(c, rm, p, l);
      CHECK((sl.matrix - l * l * s.matrix).norm() < 1e-12 * (l * l * s.matrix).norm());
    }
  }
  CHECK_THROWS_AS(schiffer_tensor(c, rm, branch_point(c, 0), 0.0), ArgumentError);

  const HyperellipticCurve e({0.0, 1.0, -1.0}, true);
  const auto rme = period_matrix(e);
  const auto p = point_on_sheet(e, Complex(0.3, 0.4), 1);
  const Complex w1 = normalized_differentials_at(e, rme, p)(0);
  const auto s1 = schiffer_tensor(e, rme, p);
  CHECK(s1.matrix.rows() == 1);
  CHECK(std::abs(s1.matrix(0, 0) - two_pi_i * w1 * w1) < 1e-14);
}

TEST_CASE("Fay tensor structure") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  const auto a = point_on_sheet(c, Complex(0.4, -0.6), 1);
  const auto b = point_on_sheet(c, Complex(-0.3, 1.1), 1);
  const auto f = fay_tensor(c, rm, a, b);
  const auto sv = f.singular_values();
  CHECK(sv(1) / sv(0) > 1e-3);
  CHECK((fay_tensor(c, rm, b, a).matrix - f.matrix).norm() < 1e-14 * f.matrix.norm());
  CHECK_THROWS_AS(fay_tensor(c, rm, a, a), ArgumentError);

  // the conjugate point has v = -u
  const auto a_bar = point_on_sheet(c, a.x, -1);
  CHECK(fay_tensor(c, rm, a, a_bar).rank_ratio() < 1e-12);
}

TEST_CASE("Fay tensor tends to twice the Schiffer tensor") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  const auto a = point_on_sheet(c, Complex(0.4, -0.6), 1);
  const CMatrix target = 2.0 * schiffer_tensor(c, rm, a).matrix;
  double prev = 0.0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto b = continue_along_segment(c, a, a.x + d);
    const double err = (fay_tensor(c, rm, a, b).matrix - target).norm();
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(10.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("composite sigma") {
  const auto c = g2();
  const auto rm = period_matrix(c);
  const std::vector<CurvePoint> pts{point_on_sheet(c, Complex(0.4, -0.6), 1),
                                    point_on_sheet(c, Complex(-0.3, 1.1), 1),
                                    point_on_sheet(c, Complex(1.5, 0.2), -1)};
  std::vector<CVector> w;
  for (const auto& p : pts) w.push_back(normalized_differentials_at(c, rm, p));
  const CMatrix expect = w[1] * w[2].transpose() + w[2] * w[1].transpose() + w[0] * w[0].transpose();
  const auto s = composite_sigma(c, rm, pts);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) CHECK(std::abs(s(p, q) - expect(p, q)) < 1e-13 * expect.norm());

  // the pair (1, 2) gives w1 w2 + w2 w1 + w3 w3
  const CMatrix e12 = w[0] * w[1].transpose() + w[1] * w[0].transpose() + w[2] * w[2].transpose();
  const auto s12 = composite_sigma(c, rm, pts, 1, 2);
  CHECK(std::abs(s12(0, 1) - e12(0, 1)) < 1e-13 * e12.norm());

  CHECK_THROWS_AS(composite_sigma(c, rm, {pts[0], pts[1], pts[0]}), ArgumentError);
  CHECK_THROWS_AS(composite_sigma(c, rm, {pts[0], pts[1]}), ArgumentError);
}

TEST_CASE("Rauch finite differences") {
  const auto c = g2();
  const auto r = rauch_fd_check(c, 1);
  CHECK(r.rank1_ratio < 1e-3);
  CHECK(r.collinearity_angle < 1e-3);
  CHECK(r.fd_symmetry_defect < 1e-6);
  for (double q : r.halving_ratios) CHECK(q == doctest::Approx(4.0).epsilon(0.1));

  RauchOptions strict;
  strict.convergence_tol = 1e-30;
  CHECK_THROWS_AS(rauch_fd_check(c, 1, strict), DiagnosticFailure);
  RauchOptions bad;
  bad.steps = {1e-3, 2e-3};
  CHECK_THROWS_AS(rauch_fd_check(c, 1, bad), ArgumentError);
  CHECK_THROWS_AS(rauch_fd_check(c, 7), ArgumentError);
}

TEST_CASE("family fibres") {
  const auto fam = collision({1e-2, 1e-3, 1e-4});
  const auto c = family_curve(fam, 0.25);
  const auto& pts = c.finite_branch_points();
  CHECK(std::abs(pts[0] - Complex(-0.5)) < 1e-15);
  CHECK(std::abs(pts[1] - Complex(0.5)) < 1e-15);
  CHECK(normalization_curve(fam).finite_branch_points().size() == 4);

  FamilySpec move{HyperellipticCurve({-1.0, 1.0, 2.0, 3.0, 4.0}), Deformation{Deformation::Kind::move, 2, 0, I}, {0.1}};
  CHECK(std::abs(family_curve(move, 0.1).finite_branch_points()[2] - Complex(2.0, 0.1)) < 1e-15);
}

TEST_CASE("Fay degeneration fit") {
  const auto fit = fay_degeneration_fit(collision(log_grid(1e-2, 1e-5, 10)));
  CHECK(fit.r_squared > 0.999);
  CHECK(fit.aj_distance < 1e-3);
  CHECK(fit.upper_block_distance < 1e-3);
  // the reported coefficient, not an acceptance criterion
  CHECK(std::abs(fit.alpha - fit.alpha_reference) < 1e-2 * std::abs(fit.alpha_reference));

  const auto refined = fay_degeneration_fit(collision(log_grid(1e-2, 1e-5, 19)));
  CHECK(std::abs(refined.alpha - fit.alpha) < 1e-2 * std::abs(fit.alpha));
}

TEST_CASE("Fay fit input errors") {
  CHECK_THROWS_AS(fay_degeneration_fit(collision({1e-5, 1e-4, 1e-3})), ArgumentError);
  FamilySpec gap{HyperellipticCurve({-1.0, 1.0, 2.0, 3.0, 4.0, 5.0}), Deformation{Deformation::Kind::collide, 1, 2, 1.0},
                 {1e-2, 1e-3, 1e-4}};
  CHECK_THROWS_AS(fay_degeneration_fit(gap), BasisTrackingError);
}
