#pragma once

// First-order variation tensors of period matrices (point-supported and
// node-forming deformations) and their finite-difference validation on
// hyperelliptic families.

#include <string>
#include <vector>

#include "periodvar/exact_span.hpp"
#include "periodvar/hyperelliptic.hpp"

namespace periodvar {

enum class VariationKind { schiffer, fay };

const char* to_string(VariationKind kind);

struct VariationTensor {
  VariationKind kind = VariationKind::schiffer;
  CMatrix matrix;  // symmetric g x g
  std::string scale_convention;

  int genus() const { return static_cast<int>(matrix.rows()); }
  Eigen::VectorXd singular_values() const;
  /// second singular value / first
  double rank_ratio() const;
};

/// 2 pi i w w^T with w the normalized differentials at `a` against the local
/// coordinate z / lambda (z = x - x(a), or sqrt(x - lambda_k) at a branch point).
VariationTensor schiffer_tensor(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                                const CurvePoint& a, Complex lambda = 1.0);

/// 2 pi i (u v^T + v u^T) with u, v the normalized differentials at a and b.
VariationTensor fay_tensor(const HyperellipticCurve& curve, const RiemannMatrix& periods, const CurvePoint& a,
                           const CurvePoint& b);

/// u v^T + v u^T + sum_{j != k,l} w_j w_j^T for the points a_1..a_n, with
/// (k, l) the 1-based Fay pair (default: the last two points). The 2 pi i is
/// omitted.
SymMatrix<Complex> composite_sigma(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                                   const std::vector<CurvePoint>& points, int k = 0, int l = 0);

struct RauchOptions {
  std::vector<double> steps{1e-3, 5e-4, 2.5e-4};  // relative to the distance to the nearest branch point
  PeriodOptions periods;
  double convergence_tol = 1e-4;  // relative disagreement allowed between the last two extrapolants
};

struct VariationReport {
  int branch_index = 0;
  double step_scale = 0.0;
  std::vector<double> steps;                 // absolute step sizes
  std::vector<CMatrix> central_differences;  // one per step
  std::vector<std::vector<CMatrix>> richardson;  // richardson[level][i]
  CMatrix fd_matrix;                         // extrapolated d tau / d lambda_k
  CVector w;                                 // normalized differentials at lambda_k
  double rank1_ratio = 0.0;
  double collinearity_angle = 0.0;
  Complex scalar;                            // fd_matrix ~ scalar * w w^T
  double fd_symmetry_defect = 0.0;
  std::vector<double> halving_ratios;        // successive central-difference error ratios (~4)
  double extrapolation_residual = 0.0;
};

/// d tau / d lambda_k by central differences with Richardson extrapolation,
/// compared with w w^T for w the normalized differentials at lambda_k.
VariationReport rauch_fd_check(const HyperellipticCurve& curve, int branch_index, const RauchOptions& options = {});

struct Deformation {
  enum class Kind { collide, move } kind = Kind::collide;
  int i = 0, j = 1;          // collide: the pair; move: index in i
  Complex direction = 1.0;   // move only
};

struct FamilySpec {
  HyperellipticCurve base;
  Deformation deformation;
  std::vector<double> t_grid;
};

/// Fibre of the family at t. A colliding pair m -/+ d (base curve at t = 1)
/// becomes m -/+ d sqrt(t); a moving point becomes lambda_i + t * direction.
HyperellipticCurve family_curve(const FamilySpec& family, double t);

/// The curve obtained at t = 0 of a collision family after removing the node:
/// the colliding pair is dropped.
HyperellipticCurve normalization_curve(const FamilySpec& family);

struct FayFitOptions {
  PeriodOptions periods;
  int limit_points = 3;  // smallest t values used for the t -> 0 extrapolations
};

struct DegenerationFit {
  std::vector<double> t_grid;
  std::vector<CMatrix> taus;  // vanishing cycle moved to the last index
  Complex alpha;              // tau_vv ~ alpha log t + c
  Complex c;
  double r_squared = 0.0;
  double residual = 0.0;      // max |fit - tau_vv|
  Complex alpha_reference;    // 1 / (2 pi i)
  CVector offdiag_limit;      // tau_{p, v} at t -> 0, p < v
  CVector aj_target;          // AJ on the normalization between the node preimages
  double aj_distance = 0.0;   // distance of offdiag_limit - aj_target to the lattice
  CMatrix upper_block_limit;
  CMatrix normalization_tau;
  double upper_block_distance = 0.0;
};

/// Periods along a collision family with the homology basis frozen at the
/// first (largest) t; throws BasisTrackingError when the frozen basis stops
/// being the sorted one or the colliding pair is not an a-cut.
DegenerationFit fay_degeneration_fit(const FamilySpec& family, const FayFitOptions& options = {});

}  // namespace periodvar
