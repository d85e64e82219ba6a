#pragma once

// Period matrices, normalized differentials and the Abel-Jacobi map of
// hyperelliptic curves y^2 = prod (x - lambda_i).
//
// Homology basis: the branch points (moved to a finite model by a Moebius
// map when infinity is a branch point) are sorted by (Re, Im) and joined by
// the polygonal chain lambda_1 -> lambda_2 -> ... -> lambda_{2g+2}. Sorted
// points give an x-monotone, hence simple, chain. Cuts sit on the odd edges
// [lambda_{2i-1}, lambda_{2i}]; a_i encircles cut i and b_i leaves cut i on
// the upper (left) side of the chain, crosses the last cut and comes back on
// the lower side of the other sheet, so a_i . b_j = delta_ij.

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace periodvar {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class HyperellipticCurve {
 public:
  /// `finite_branch_points` are the roots of the monic right-hand side. An odd
  /// count makes infinity a branch point; `infinity_listed` records that the
  /// caller named it explicitly and is rejected for an even count.
  explicit HyperellipticCurve(std::vector<Complex> finite_branch_points, bool infinity_listed = false);

  const std::vector<Complex>& finite_branch_points() const { return points_; }
  bool branch_point_at_infinity() const { return points_.size() % 2 == 1; }
  int genus() const { return static_cast<int>((points_.size() - 1) / 2); }
  double diameter() const { return diameter_; }

  /// prod (x - lambda_i) over the finite branch points.
  Complex f(Complex x) const;

 private:
  std::vector<Complex> points_;
  double diameter_ = 0.0;
};

/// A finite point of the curve. `branch` is set for branch points, where y = 0.
struct CurvePoint {
  Complex x;
  Complex y;
  std::optional<int> branch;
};

/// Point over x with y = sheet * (principal square root of f(x)); sheet is +1 or -1.
CurvePoint point_on_sheet(const HyperellipticCurve& curve, Complex x, int sheet);
CurvePoint branch_point(const HyperellipticCurve& curve, int index);

/// Analytic continuation of y from `from` along the straight segment to `to_x`.
CurvePoint continue_along_segment(const HyperellipticCurve& curve, const CurvePoint& from, Complex to_x);

/// Which branch points form the chain and in what order. Entries of `order`
/// index finite_branch_points(); -1 stands for infinity.
struct ChainLayout {
  std::vector<int> order;
  std::optional<Complex> mobius_center;  // x = center + 1/u when infinity is a branch point
};

ChainLayout default_layout(const HyperellipticCurve& curve);

struct PeriodOptions {
  double precision = 1e-12;
  int base_nodes = 16;
};

namespace detail {
struct ChainModel;
}

class RiemannMatrix {
 public:
  int genus() const { return static_cast<int>(tau_.rows()); }
  /// tau = A^{-1} B as computed, not symmetrized.
  const CMatrix& tau() const { return tau_; }
  CMatrix symmetric_tau() const { return 0.5 * (tau_ + tau_.transpose()); }
  /// A(k, i) = integral over a_i of x^k dx / y, k = 0..g-1; likewise B.
  const CMatrix& a_periods() const { return a_; }
  const CMatrix& b_periods() const { return b_; }
  /// A^{-1}: maps the raw basis x^k dx / y to the normalized basis.
  const CMatrix& normalization() const { return a_inv_; }
  /// Node-doubling estimate of the error in tau.
  double error_estimate() const { return error_estimate_; }
  const ChainLayout& layout() const { return layout_; }

  double symmetry_defect() const;       // |tau - tau^T| / |tau|
  double min_imag_eigenvalue() const;   // of the symmetric part of Im tau

  const detail::ChainModel& model() const { return *model_; }

 private:
  friend RiemannMatrix period_matrix(const HyperellipticCurve&, const ChainLayout&, const PeriodOptions&);
  CMatrix tau_, a_, b_, a_inv_;
  double error_estimate_ = 0.0;
  ChainLayout layout_;
  std::shared_ptr<const detail::ChainModel> model_;
};

RiemannMatrix period_matrix(const HyperellipticCurve& curve, const PeriodOptions& options = {});
RiemannMatrix period_matrix(const HyperellipticCurve& curve, const ChainLayout& layout,
                            const PeriodOptions& options = {});

/// Point on chain edge `edge` (0-based) at parameter s in (0, 1), with y taken
/// from the upper-side branch used for the periods.
CurvePoint chain_edge_point(const RiemannMatrix& periods, int edge, double s);

/// Values (omega_p / dz)(a) of the normalized differentials, where
/// z = x - x(a) at an ordinary point and z = sqrt(x - lambda_k) at a finite
/// branch point (defined up to an overall sign there).
CVector normalized_differentials_at(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                                    const CurvePoint& point);

/// Same, with the raw basis x^k dx / y instead of the normalized one.
CVector raw_differentials_at(const HyperellipticCurve& curve, const CurvePoint& point);

struct LatticeReduction {
  CVector reduced;
  Eigen::VectorXi m;  // v = reduced + m + tau n
  Eigen::VectorXi n;
};

LatticeReduction reduce_mod_lattice(const CMatrix& tau, const CVector& v);
/// Distance from v to the nearest point of Z^g + tau Z^g.
double lattice_distance(const CMatrix& tau, const CVector& v);
bool equal_mod_lattice(const CMatrix& tau, const CVector& v, const CVector& w, double tol);

struct AbelJacobiValue {
  CVector value;  // integral of the normalized differentials from p to q
  LatticeReduction reduction;
};

AbelJacobiValue abel_jacobi(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                            const CurvePoint& p, const CurvePoint& q, const PeriodOptions& options = {});

/// j-invariant of a genus-1 curve from the cross-ratio of its branch points.
Complex j_algebraic(const HyperellipticCurve& curve);

}  // namespace periodvar
