#include "periodvar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "periodvar/errors.hpp"

namespace periodvar {

namespace {

constexpr Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

bool same_point(const CurvePoint& a, const CurvePoint& b) {
  if (a.branch || b.branch) return a.branch == b.branch;
  return a.x == b.x && a.y == b.y;
}

// <A, B> = sum conj(A) B
Complex frobenius(const CMatrix& a, const CMatrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

}  // namespace

const char* to_string(VariationKind kind) { return kind == VariationKind::schiffer ? "schiffer" : "fay"; }

Eigen::VectorXd VariationTensor::singular_values() const {
  return Eigen::JacobiSVD<CMatrix>(matrix).singularValues();
}

double VariationTensor::rank_ratio() const {
  const auto s = singular_values();
  if (s.size() < 2) return 0.0;
  return s(0) == 0.0 ? 0.0 : s(1) / s(0);
}

VariationTensor schiffer_tensor(const HyperellipticCurve& curve, const RiemannMatrix& periods, const CurvePoint& a,
                                Complex lambda) {
  if (lambda == 0.0) throw ArgumentError("schiffer_tensor: coordinate scale must be nonzero");
  const CVector w = lambda * normalized_differentials_at(curve, periods, a);
  if (w.norm() == 0.0) throw NumericalError("schiffer_tensor: normalized differentials vanish at the point");
  VariationTensor t;
  t.kind = VariationKind::schiffer;
  t.matrix = two_pi_i * w * w.transpose();
  std::ostringstream conv;
  conv << "2*pi*i * w w^T, local coordinate " << (a.branch ? "sqrt(x - lambda_k)" : "x - x0") << " / (" << lambda.real()
       << (lambda.imag() < 0 ? "-" : "+") << std::abs(lambda.imag()) << "i)";
  t.scale_convention = conv.str();
  return t;
}

VariationTensor fay_tensor(const HyperellipticCurve& curve, const RiemannMatrix& periods, const CurvePoint& a,
                           const CurvePoint& b) {
  if (same_point(a, b)) throw ArgumentError("fay_tensor: the two points coincide");
  const CVector u = normalized_differentials_at(curve, periods, a);
  const CVector v = normalized_differentials_at(curve, periods, b);
  VariationTensor t;
  t.kind = VariationKind::fay;
  t.matrix = two_pi_i * (u * v.transpose() + v * u.transpose());
  t.scale_convention = "2*pi*i * (u v^T + v u^T), local coordinates x - x0 or sqrt(x - lambda_k)";
  return t;
}

SymMatrix<Complex> composite_sigma(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                                   const std::vector<CurvePoint>& points, int k, int l) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw ArgumentError("composite_sigma: need at least 3 points");
  if (k == 0 && l == 0) {
    k = n - 1;
    l = n;
  }
  if (k < 1 || l > n || k >= l) throw ArgumentError("composite_sigma: need 1 <= k < l <= n");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (same_point(points[i], points[j])) throw ArgumentError("composite_sigma: coincident points");
  std::vector<ComplexVector> w;
  for (const auto& p : points) {
    const CVector v = normalized_differentials_at(curve, periods, p);
    w.emplace_back(v.data(), v.data() + v.size());
  }
  return sigma_tensor(w, k, l, SigmaForm::period_tensor);
}

VariationReport rauch_fd_check(const HyperellipticCurve& curve, int branch_index, const RauchOptions& options) {
  const auto& pts = curve.finite_branch_points();
  if (branch_index < 0 || branch_index >= static_cast<int>(pts.size()))
    throw ArgumentError("rauch_fd_check: branch index out of range");
  if (options.steps.empty()) throw ArgumentError("rauch_fd_check: empty step list");
  for (std::size_t i = 0; i < options.steps.size(); ++i) {
    if (!(options.steps[i] > 0.0)) throw ArgumentError("rauch_fd_check: steps must be positive");
    if (i > 0 && !(options.steps[i] < options.steps[i - 1]))
      throw ArgumentError("rauch_fd_check: steps must be strictly decreasing");
  }

  const RiemannMatrix base = period_matrix(curve, options.periods);
  VariationReport rep;
  rep.branch_index = branch_index;
  double scale = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (static_cast<int>(i) != branch_index) scale = std::min(scale, std::abs(pts[i] - pts[branch_index]));
  rep.step_scale = scale;

  auto shifted = [&](double h) {
    auto moved = pts;
    moved[branch_index] += h;
    return period_matrix(HyperellipticCurve(moved, curve.branch_point_at_infinity()), base.layout(),
                         options.periods)
        .tau();
  };
  for (double s : options.steps) {
    const double h = s * scale;
    rep.steps.push_back(h);
    rep.central_differences.push_back((shifted(h) - shifted(-h)) / (2.0 * h));
  }

  rep.richardson.push_back(rep.central_differences);
  for (std::size_t level = 1; level < rep.steps.size(); ++level) {
    const auto& prev = rep.richardson.back();
    std::vector<CMatrix> next;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const double r = std::pow(rep.steps[i] / rep.steps[i + level], 2.0 * static_cast<double>(level));
      next.push_back((r * prev[i + 1] - prev[i]) / (r - 1.0));
    }
    rep.richardson.push_back(std::move(next));
  }
  rep.fd_matrix = rep.richardson.back().front();

  const auto& d = rep.central_differences;
  for (std::size_t i = 0; i + 2 < d.size(); ++i) {
    const double num = (d[i] - d[i + 1]).norm(), den = (d[i + 1] - d[i + 2]).norm();
    rep.halving_ratios.push_back(den == 0.0 ? 0.0 : num / den);
  }
  if (rep.richardson.size() >= 2) {
    const auto& last = rep.richardson[rep.richardson.size() - 2];
    rep.extrapolation_residual = (rep.fd_matrix - last.back()).norm() / rep.fd_matrix.norm();
    if (!(rep.extrapolation_residual <= options.convergence_tol)) {
      std::ostringstream msg;
      msg << "rauch_fd_check: Richardson extrapolation did not converge (relative residual "
          << rep.extrapolation_residual << ", halving ratios";
      for (double r : rep.halving_ratios) msg << " " << r;
      msg << ")";
      throw DiagnosticFailure(msg.str());
    }
  }

  rep.w = normalized_differentials_at(curve, base, branch_point(curve, branch_index));
  const CMatrix ww = rep.w * rep.w.transpose();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(rep.fd_matrix).singularValues();
  rep.rank1_ratio = sv.size() < 2 ? 0.0 : sv(1) / sv(0);
  rep.scalar = frobenius(ww, rep.fd_matrix) / frobenius(ww, ww);
  rep.collinearity_angle = std::atan2((rep.fd_matrix - rep.scalar * ww).norm(), (rep.scalar * ww).norm());
  rep.fd_symmetry_defect = (rep.fd_matrix - rep.fd_matrix.transpose()).norm() / rep.fd_matrix.norm();
  return rep;
}

HyperellipticCurve family_curve(const FamilySpec& family, double t) {
  auto pts = family.base.finite_branch_points();
  const auto& d = family.deformation;
  const int m = static_cast<int>(pts.size());
  if (d.kind == Deformation::Kind::collide) {
    if (d.i < 0 || d.j < 0 || d.i >= m || d.j >= m || d.i == d.j)
      throw ArgumentError("family: collide pair out of range");
    if (!(t > 0.0)) throw ArgumentError("family: collision parameter must be positive");
    const Complex mid = 0.5 * (pts[d.i] + pts[d.j]);
    const Complex half = 0.5 * (pts[d.j] - pts[d.i]);
    pts[d.i] = mid - half * std::sqrt(t);
    pts[d.j] = mid + half * std::sqrt(t);
  } else {
    if (d.i < 0 || d.i >= m) throw ArgumentError("family: moving index out of range");
    pts[d.i] += t * d.direction;
  }
  return HyperellipticCurve(pts, family.base.branch_point_at_infinity());
}

HyperellipticCurve normalization_curve(const FamilySpec& family) {
  const auto& d = family.deformation;
  if (d.kind != Deformation::Kind::collide) throw ArgumentError("normalization: family is not a collision");
  const auto& pts = family.base.finite_branch_points();
  std::vector<Complex> rest;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    if (i != d.i && i != d.j) rest.push_back(pts[i]);
  return HyperellipticCurve(rest, family.base.branch_point_at_infinity());
}

namespace {

// Least-squares fit of values ~ a + b x; returns {a, b}.
std::pair<Complex, Complex> linear_fit(const std::vector<double>& x, const std::vector<Complex>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sxx = 0;
  Complex sy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sxx += x[i] * x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  const Complex b = (n * sxy - sx * sy) / det;
  const Complex a = (sy - b * sx) / n;
  return {a, b};
}

}  // namespace

DegenerationFit fay_degeneration_fit(const FamilySpec& family, const FayFitOptions& options) {
  const auto& d = family.deformation;
  if (d.kind != Deformation::Kind::collide) throw ArgumentError("fay_degeneration_fit: family must be a collision");
  const auto& grid = family.t_grid;
  if (grid.size() < 3) throw ArgumentError("fay_degeneration_fit: need at least 3 grid values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw ArgumentError("fay_degeneration_fit: t values must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw ArgumentError("fay_degeneration_fit: t grid must be strictly decreasing");
  }
  if (options.limit_points < 2 || options.limit_points > static_cast<int>(grid.size()))
    throw ArgumentError("fay_degeneration_fit: bad number of limit points");

  const HyperellipticCurve first = family_curve(family, grid.front());
  const ChainLayout layout = default_layout(first);
  const int big_g = first.genus();
  if (big_g < 2) throw ArgumentError("fay_degeneration_fit: nearby fibres must have genus >= 2");
  // position of the colliding pair in the chain
  int cut = -1;
  for (int c = 0; c < big_g; ++c) {
    const int p = layout.order[2 * c], q = layout.order[2 * c + 1];
    if ((p == d.i && q == d.j) || (p == d.j && q == d.i)) cut = c;
  }
  if (cut < 0)
    throw BasisTrackingError("fay_degeneration_fit: the colliding pair does not form one of the a-cuts",
                             grid.front());

  DegenerationFit fit;
  fit.t_grid = grid;
  std::vector<int> perm;
  for (int c = 0; c < big_g; ++c)
    if (c != cut) perm.push_back(c);
  perm.push_back(cut);

  std::vector<RiemannMatrix> rms;
  for (double t : grid) {
    const HyperellipticCurve curve = family_curve(family, t);
    if (default_layout(curve).order != layout.order)
      throw BasisTrackingError("fay_degeneration_fit: branch point ordering changed along the family", t);
    try {
      rms.push_back(period_matrix(curve, layout, options.periods));
    } catch (const ConditioningError& e) {
      throw BasisTrackingError(std::string("fay_degeneration_fit: frozen homology basis broke down: ") + e.what(), t);
    }
    const CMatrix& tau = rms.back().tau();
    CMatrix p(big_g, big_g);
    for (int r = 0; r < big_g; ++r)
      for (int s = 0; s < big_g; ++s) p(r, s) = tau(perm[r], perm[s]);
    fit.taus.push_back(p);
  }

  const int v = big_g - 1;
  std::vector<double> logt;
  std::vector<Complex> tvv;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    logt.push_back(std::log(grid[i]));
    tvv.push_back(fit.taus[i](v, v));
  }
  std::tie(fit.c, fit.alpha) = linear_fit(logt, tvv);
  Complex mean = 0.0;
  for (const auto& z : tvv) mean += z;
  mean /= static_cast<double>(tvv.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < tvv.size(); ++i) {
    const double r = std::abs(tvv[i] - (fit.alpha * logt[i] + fit.c));
    fit.residual = std::max(fit.residual, r);
    ss_res += r * r;
    ss_tot += std::norm(tvv[i] - mean);
  }
  fit.r_squared = 1.0 - ss_res / ss_tot;
  fit.alpha_reference = 1.0 / two_pi_i;

  // t -> 0 limits by a linear fit in t over the smallest grid values
  const std::size_t k = static_cast<std::size_t>(options.limit_points);
  std::vector<double> small_t(grid.end() - k, grid.end());
  auto limit_of = [&](int r, int s) {
    std::vector<Complex> vals;
    for (std::size_t i = grid.size() - k; i < grid.size(); ++i) vals.push_back(fit.taus[i](r, s));
    return linear_fit(small_t, vals).first;
  };
  fit.offdiag_limit = CVector(v);
  fit.upper_block_limit = CMatrix(v, v);
  for (int r = 0; r < v; ++r) {
    fit.offdiag_limit(r) = limit_of(r, v);
    for (int s = 0; s < v; ++s) fit.upper_block_limit(r, s) = limit_of(r, s);
  }

  // The normalization, with the frozen chain minus the colliding pair.
  const HyperellipticCurve norm = normalization_curve(family);
  ChainLayout norm_layout;
  norm_layout.mobius_center = layout.mobius_center;
  for (int label : layout.order) {
    if (label == d.i || label == d.j) continue;
    int shifted = label;
    if (label > d.i) --shifted;
    if (label > d.j) --shifted;
    norm_layout.order.push_back(label == -1 ? -1 : shifted);
  }
  const RiemannMatrix norm_rm = period_matrix(norm, norm_layout, options.periods);
  fit.normalization_tau = norm_rm.tau();
  fit.upper_block_distance = (fit.upper_block_limit - fit.normalization_tau).cwiseAbs().maxCoeff();

  // Node preimages (m, +-y1) with y1 the continuous limit of y / (x - m)
  // taken along the upper side of the chain, starting from the edge that
  // leaves the collapsing cut at the smallest t.
  const auto& base_pts = family.base.finite_branch_points();
  const Complex node_x = 0.5 * (base_pts[d.i] + base_pts[d.j]);
  const RiemannMatrix& last = rms.back();
  const CurvePoint start = chain_edge_point(last, 2 * cut + 1, 0.5);
  const Complex ytilde = start.y / (start.x - node_x);
  const Complex root = std::sqrt(norm.f(start.x));
  CurvePoint walk{start.x, std::real(ytilde / root) >= 0.0 ? root : -root, std::nullopt};
  // Walk back to the node along the image of the chain edge (a straight
  // segment in the internal chart).
  const int steps = 64;
  for (int s = 1; s <= steps; ++s) {
    const double frac = 0.5 * (1.0 - static_cast<double>(s) / steps);
    const Complex target = s == steps ? node_x : chain_edge_point(last, 2 * cut + 1, frac).x;
    walk = continue_along_segment(norm, walk, target);
  }
  const CurvePoint plus{node_x, walk.y, std::nullopt};
  const CurvePoint minus{node_x, -walk.y, std::nullopt};
  fit.aj_target = abel_jacobi(norm, norm_rm, minus, plus, options.periods).value;
  fit.aj_distance = lattice_distance(fit.normalization_tau, fit.offdiag_limit - fit.aj_target);
  return fit;
}

}  // namespace periodvar
