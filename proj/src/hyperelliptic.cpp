#include "periodvar/hyperelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "periodvar/errors.hpp"
#include "periodvar/quadrature.hpp"

namespace periodvar {

namespace detail {

// Product of sqrt(x - root) over a set of roots, each factor with its cut on
// the ray from the root perpendicular to a reference segment and pointing
// away from it. The product is analytic on a neighbourhood of the segment
// minus the roots.
struct SegmentBranch {
  std::vector<Complex> roots;
  std::vector<Complex> rotation;    // maps the cut ray onto the negative reals
  std::vector<Complex> unrotation;  // 1 / sqrt(rotation)

  Complex factor(std::size_t i, Complex x) const {
    return std::sqrt((x - roots[i]) * rotation[i]) * unrotation[i];
  }
  Complex eval(Complex x) const {
    Complex p = 1.0;
    for (std::size_t i = 0; i < roots.size(); ++i) p *= factor(i, x);
    return p;
  }
  Complex eval_skipping(Complex x, std::size_t skip_a, std::size_t skip_b) const {
    Complex p = 1.0;
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (i != skip_a && i != skip_b) p *= factor(i, x);
    return p;
  }
};

SegmentBranch make_branch(Complex from, Complex to, const std::vector<Complex>& roots) {
  const Complex d = to - from;
  const Complex left = Complex(0.0, 1.0) * d / std::abs(d);
  SegmentBranch b;
  b.roots = roots;
  for (const auto& r : roots) {
    const double side = std::imag(std::conj(d) * (r - from));
    const Complex dir = side < 0.0 ? -left : left;
    const Complex rot = -std::conj(dir);
    b.rotation.push_back(rot);
    b.unrotation.push_back(1.0 / std::sqrt(rot));
  }
  return b;
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(std::real((p - a) * std::conj(d)) / len2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

struct ChainModel {
  int g = 0;
  std::vector<Complex> nodes;  // model coordinates, chain order
  std::vector<int> labels;     // finite branch point index, -1 for infinity
  bool mobius = false;
  Complex center = 0.0;
  Complex sqrt_c = 1.0;
  double diameter = 0.0;
  CMatrix basis_change;  // raw original basis = basis_change * raw model basis
  std::vector<SegmentBranch> edge_branch;
  std::vector<int> signs;
  std::vector<CVector> edges;
  CMatrix a_model, b_model, a_model_inv;

  int edge_count() const { return static_cast<int>(nodes.size()) - 1; }
  Complex edge_y(int e, Complex u) const { return static_cast<double>(signs[e]) * edge_branch[e].eval(u); }

  Complex to_model_x(Complex x) const {
    if (!mobius) return x;
    if (x == center) throw DomainError("point lies over the centre of the internal Moebius chart");
    return 1.0 / (x - center);
  }
  Complex to_model_y(Complex x, Complex y) const {
    if (!mobius) return y;
    const Complex u = to_model_x(x);
    return y * std::pow(u, g + 1) / sqrt_c;
  }
  Complex from_model_x(Complex u) const { return mobius ? center + 1.0 / u : u; }
  Complex from_model_y(Complex u, Complex eta) const {
    return mobius ? sqrt_c * eta / std::pow(u, g + 1) : eta;
  }
  int position_of_label(int label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    throw ArgumentError("branch point is not part of the chain");
  }
};

}  // namespace detail

using detail::ChainModel;
using detail::SegmentBranch;

namespace {

double diameter_of(const std::vector<Complex>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  return d;
}

double separation_ratio(const std::vector<Complex>& pts) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
  return dmin / diameter_of(pts);
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<Complex> model_nodes(const HyperellipticCurve& curve, const std::vector<int>& order,
                                 const std::optional<Complex>& center) {
  std::vector<Complex> nodes;
  for (int label : order) {
    if (label == -1) {
      nodes.push_back(0.0);
    } else {
      const Complex lam = curve.finite_branch_points().at(label);
      nodes.push_back(center ? 1.0 / (lam - *center) : lam);
    }
  }
  return nodes;
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto orient = [](Complex p, Complex q, Complex r) { return std::imag(std::conj(q - p) * (r - p)); };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

void validate_layout(const HyperellipticCurve& curve, const ChainLayout& layout) {
  const auto& pts = curve.finite_branch_points();
  const std::size_t expected = pts.size() + (curve.branch_point_at_infinity() ? 1 : 0);
  if (layout.order.size() != expected) throw ArgumentError("chain layout: wrong number of nodes");
  std::vector<int> sorted = layout.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const int want = curve.branch_point_at_infinity() ? static_cast<int>(i) - 1 : static_cast<int>(i);
    if (sorted[i] != want) throw ArgumentError("chain layout: order is not a permutation of the branch points");
  }
  if (curve.branch_point_at_infinity() != layout.mobius_center.has_value())
    throw ArgumentError("chain layout: a Moebius centre is required exactly when infinity is a branch point");
  if (layout.mobius_center)
    for (const auto& p : pts)
      if (std::abs(p - *layout.mobius_center) < 1e-12 * (1.0 + curve.diameter()))
        throw ConditioningError("chain layout: Moebius centre coincides with a branch point");
}

void check_chain_geometry(const std::vector<Complex>& nodes, double diameter) {
  const std::size_t m = nodes.size();
  for (std::size_t e = 0; e + 1 < m; ++e) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == e || i == e + 1) continue;
      if (detail::segment_distance(nodes[i], nodes[e], nodes[e + 1]) < 1e-10 * diameter)
        throw ConditioningError("chain edge passes through another branch point");
    }
    for (std::size_t f = e + 2; f + 1 < m; ++f)
      if (segments_cross(nodes[e], nodes[e + 1], nodes[f], nodes[f + 1]))
        throw ConditioningError("chain layout is not a simple arc");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::shared_ptr<ChainModel> build_model(const HyperellipticCurve& curve, const ChainLayout& layout) {
  validate_layout(curve, layout);
  auto model = std::make_shared<ChainModel>();
  const int g = curve.genus();
  model->g = g;
  model->labels = layout.order;
  model->nodes = model_nodes(curve, layout.order, layout.mobius_center);
  model->diameter = diameter_of(model->nodes);
  model->basis_change = CMatrix::Identity(g, g);
  if (layout.mobius_center) {
    model->mobius = true;
    model->center = *layout.mobius_center;
    Complex c_prod = 1.0;
    for (const auto& lam : curve.finite_branch_points()) c_prod *= model->center - lam;
    model->sqrt_c = std::sqrt(c_prod);
    // x^k dx / y = -(c u + 1)^k u^{g-1-k} / sqrt(C) du / eta
    model->basis_change = CMatrix::Zero(g, g);
    for (int k = 0; k < g; ++k)
      for (int i = 0; i <= k; ++i)
        model->basis_change(k, i + g - 1 - k) -= binomial(k, i) * std::pow(model->center, i) / model->sqrt_c;
  }
  check_chain_geometry(model->nodes, model->diameter);

  for (int e = 0; e < model->edge_count(); ++e)
    model->edge_branch.push_back(detail::make_branch(model->nodes[e], model->nodes[e + 1], model->nodes));
  return model;
}

// Signs making the per-edge branches one analytic continuation along the
// upper (left) side of the chain. Going from edge e to edge e+1 around the
// vertex v on the left side sweeps clockwise through angle delta, turning
// sqrt(x - v) by exp(-i delta / 2); the other factors move continuously.
void compute_signs(ChainModel& model) {
  const auto& nodes = model.nodes;
  model.signs.assign(model.edge_count(), 1);
  for (int e = 0; e + 1 < model.edge_count(); ++e) {
    const Complex v = nodes[e + 1];
    const Complex uin = nodes[e] - v;
    const Complex uout = nodes[e + 2] - v;
    double dmin = std::min(std::abs(uin), std::abs(uout));
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (static_cast<int>(i) != e + 1) dmin = std::min(dmin, std::abs(nodes[i] - v));
    const double rad = 0.25 * dmin;
    const Complex xin = v + rad * uin / std::abs(uin);
    const Complex xout = v + rad * uout / std::abs(uout);
    double delta = std::arg(uin) - std::arg(uout);
    while (delta <= 0.0) delta += 2.0 * std::numbers::pi;
    while (delta > 2.0 * std::numbers::pi) delta -= 2.0 * std::numbers::pi;

    Complex factor = std::exp(Complex(0.0, -0.5 * delta));
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (static_cast<int>(i) != e + 1) factor *= std::sqrt((xout - nodes[i]) / (xin - nodes[i]));
    const Complex continued = model.edge_y(e, xin) * factor;
    const Complex ratio = continued / model.edge_branch[e + 1].eval(xout);
    const int s = ratio.real() > 0.0 ? 1 : -1;
    if (std::abs(ratio - static_cast<double>(s)) > 1e-6)
      throw NumericalError("sheet continuation around a branch point failed");
    model.signs[e + 1] = s;
  }
}

AdaptiveOptions quadrature_options(const PeriodOptions& options, int base_nodes) {
  AdaptiveOptions q;
  q.base_nodes = base_nodes;
  q.rel_tol = 0.1 * options.precision;
  q.abs_tol = 1e-300;
  return q;
}

// Integral of u^k du / eta over edge e on its upper-side branch. With
// u = m + (d/2) cos(theta) the endpoint square roots cancel against
// du = -(d/2) sin(theta) d theta.
CVector edge_integral(const ChainModel& model, int e, const AdaptiveOptions& q) {
  const Complex a = model.nodes[e], b = model.nodes[e + 1];
  const Complex half = 0.5 * (b - a), mid = 0.5 * (a + b);
  const auto& br = model.edge_branch[e];
  const auto ia = static_cast<std::size_t>(e), ib = static_cast<std::size_t>(e + 1);
  const Complex r1 = std::sqrt(half * br.rotation[ia]) * br.unrotation[ia];
  const Complex r2 = std::sqrt(-half * br.rotation[ib]) * br.unrotation[ib];
  const Complex scale = half / (static_cast<double>(model.signs[e]) * r1 * r2);
  const int g = model.g;
  auto f = [&](double theta, std::vector<Complex>& out) {
    const Complex u = mid + half * std::cos(theta);
    const Complex val = scale / br.eval_skipping(u, ia, ib);
    Complex p = 1.0;
    for (int k = 0; k < g; ++k) {
      out[k] = p * val;
      p *= u;
    }
  };
  const auto r = integrate_adaptive(f, g, 0.0, std::numbers::pi, q);
  return Eigen::Map<const CVector>(r.value.data(), g);
}

void assemble_periods(ChainModel& model, const AdaptiveOptions& q) {
  const int g = model.g;
  model.edges.clear();
  for (int e = 0; e < model.edge_count(); ++e) model.edges.push_back(edge_integral(model, e, q));
  model.a_model = CMatrix(g, g);
  model.b_model = CMatrix(g, g);
  for (int i = 0; i < g; ++i) {
    model.a_model.col(i) = -2.0 * model.edges[2 * i];
    // Out along the upper side, back along the lower side of the other sheet:
    // the cut edges in between cancel and the gaps count twice.
    CVector s = CVector::Zero(g);
    for (int e = 2 * i + 1; e <= 2 * g - 1; e += 2) s += model.edges[e];
    model.b_model.col(i) = -2.0 * s;
  }
}

CMatrix solve_tau(const CMatrix& a, const CMatrix& b) {
  Eigen::FullPivLU<CMatrix> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-13)
    throw ConditioningError("a-period matrix is numerically singular");
  return lu.solve(b);
}

}  // namespace

HyperellipticCurve::HyperellipticCurve(std::vector<Complex> finite_branch_points, bool infinity_listed)
    : points_(std::move(finite_branch_points)) {
  if (points_.size() < 3) throw ArgumentError("hyperelliptic curve needs at least 3 finite branch points");
  if (infinity_listed && points_.size() % 2 == 0)
    throw ArgumentError("infinity is a branch point only for an odd number of finite branch points");
  for (const auto& p : points_)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) throw ArgumentError("non-finite branch point");
  diameter_ = diameter_of(points_);
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (!(std::abs(points_[i] - points_[j]) > 1e-10 * diameter_))
        throw ConditioningError("branch points are coincident or nearly so");
}

Complex HyperellipticCurve::f(Complex x) const {
  Complex p = 1.0;
  for (const auto& lam : points_) p *= x - lam;
  return p;
}

CurvePoint point_on_sheet(const HyperellipticCurve& curve, Complex x, int sheet) {
  if (sheet != 1 && sheet != -1) throw ArgumentError("sheet must be +1 or -1");
  const auto& pts = curve.finite_branch_points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (x == pts[i]) return CurvePoint{x, 0.0, static_cast<int>(i)};
  return CurvePoint{x, static_cast<double>(sheet) * std::sqrt(curve.f(x)), std::nullopt};
}

CurvePoint branch_point(const HyperellipticCurve& curve, int index) {
  const auto& pts = curve.finite_branch_points();
  if (index < 0 || index >= static_cast<int>(pts.size())) throw ArgumentError("branch point index out of range");
  return CurvePoint{pts[index], 0.0, index};
}

CurvePoint continue_along_segment(const HyperellipticCurve& curve, const CurvePoint& from, Complex to_x) {
  if (from.branch) throw ArgumentError("continuation must start at an ordinary point");
  const auto& pts = curve.finite_branch_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (to_x == pts[i]) return CurvePoint{to_x, 0.0, static_cast<int>(i)};
    if (detail::segment_distance(pts[i], from.x, to_x) < 1e-12 * curve.diameter())
      throw PathError("continuation segment passes through a branch point");
  }
  if (to_x == from.x) return from;
  const auto br = detail::make_branch(from.x, to_x, pts);
  return CurvePoint{to_x, from.y * br.eval(to_x) / br.eval(from.x), std::nullopt};
}

ChainLayout default_layout(const HyperellipticCurve& curve) {
  const auto& pts = curve.finite_branch_points();
  ChainLayout layout;
  std::vector<int> labels(pts.size());
  std::iota(labels.begin(), labels.end(), 0);
  if (curve.branch_point_at_infinity()) {
    labels.push_back(-1);
    Complex centroid = 0.0;
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());
    double radius = 0.0;
    for (const auto& p : pts) radius = std::max(radius, std::abs(p - centroid));
    if (radius == 0.0) radius = 1.0;
    double best = -1.0;
    Complex best_center = centroid;
    for (double rho : {0.75, 1.5}) {
      for (int k = 0; k < 12; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / 12.0 + 0.1;
        const Complex c = centroid + rho * radius * std::polar(1.0, angle);
        std::vector<Complex> nodes{0.0};
        for (const auto& p : pts) nodes.push_back(1.0 / (p - c));
        const double q = separation_ratio(nodes);
        if (q > best) {
          best = q;
          best_center = c;
        }
      }
    }
    layout.mobius_center = best_center;
  }
  const auto nodes = model_nodes(curve, labels, layout.mobius_center);
  std::vector<std::size_t> idx(labels.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(nodes[a], nodes[b]); });
  for (auto i : idx) layout.order.push_back(labels[i]);
  return layout;
}

double RiemannMatrix::symmetry_defect() const {
  return (tau_ - tau_.transpose()).norm() / tau_.norm();
}

double RiemannMatrix::min_imag_eigenvalue() const {
  const Eigen::MatrixXd im = 0.5 * (tau_.imag() + tau_.imag().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
  return es.eigenvalues().minCoeff();
}

RiemannMatrix period_matrix(const HyperellipticCurve& curve, const PeriodOptions& options) {
  return period_matrix(curve, default_layout(curve), options);
}

RiemannMatrix period_matrix(const HyperellipticCurve& curve, const ChainLayout& layout,
                            const PeriodOptions& options) {
  if (!(options.precision >= 1e-13)) throw ArgumentError("period_matrix: precision must be >= 1e-13");
  if (options.base_nodes < 2) throw ArgumentError("period_matrix: base_nodes must be >= 2");
  auto model = build_model(curve, layout);
  compute_signs(*model);

  assemble_periods(*model, quadrature_options(options, options.base_nodes));
  const CMatrix coarse_tau = solve_tau(model->a_model, model->b_model);
  assemble_periods(*model, quadrature_options(options, 2 * options.base_nodes));
  const CMatrix tau = solve_tau(model->a_model, model->b_model);
  model->a_model_inv = model->a_model.inverse();

  RiemannMatrix rm;
  rm.tau_ = tau;
  rm.a_ = model->basis_change * model->a_model;
  rm.b_ = model->basis_change * model->b_model;
  rm.a_inv_ = rm.a_.inverse();
  const double tau_scale = std::max(1.0, tau.cwiseAbs().maxCoeff());
  const double doubling = (tau - coarse_tau).cwiseAbs().maxCoeff();
  rm.error_estimate_ = std::max(doubling, options.precision * tau_scale);
  if (doubling > 1e3 * options.precision * tau_scale)
    throw PrecisionError("period_matrix: node doubling changed tau beyond the requested precision");
  rm.layout_ = layout;
  rm.model_ = std::move(model);

  if (rm.symmetry_defect() > 1e-6) throw ConditioningError("period_matrix: computed tau is not symmetric");
  if (!(rm.min_imag_eigenvalue() > 0.0))
    throw ConditioningError("period_matrix: Im tau is not positive definite");
  return rm;
}

CurvePoint chain_edge_point(const RiemannMatrix& periods, int edge, double s) {
  const auto& model = periods.model();
  if (edge < 0 || edge >= model.edge_count()) throw ArgumentError("chain_edge_point: edge out of range");
  if (!(s > 0.0 && s < 1.0)) throw ArgumentError("chain_edge_point: parameter must be in (0, 1)");
  const Complex u = model.nodes[edge] + s * (model.nodes[edge + 1] - model.nodes[edge]);
  const Complex eta = model.edge_y(edge, u);
  return CurvePoint{model.from_model_x(u), model.from_model_y(u, eta), std::nullopt};
}

CVector raw_differentials_at(const HyperellipticCurve& curve, const CurvePoint& point) {
  const int g = curve.genus();
  CVector raw(g);
  if (point.branch) {
    const auto& pts = curve.finite_branch_points();
    const int k = *point.branch;
    if (k < 0 || k >= static_cast<int>(pts.size())) throw ArgumentError("branch point index out of range");
    const Complex lam = pts[k];
    Complex prod = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (static_cast<int>(i) != k) prod *= lam - pts[i];
    // x = lambda + z^2, y = z sqrt(prod) + O(z^3), dx = 2 z dz
    const Complex base = 2.0 / std::sqrt(prod);
    Complex p = 1.0;
    for (int j = 0; j < g; ++j) {
      raw(j) = p * base;
      p *= lam;
    }
    return raw;
  }
  if (point.y == 0.0) throw ArgumentError("ordinary point with y = 0; use branch_point()");
  Complex p = 1.0;
  for (int j = 0; j < g; ++j) {
    raw(j) = p / point.y;
    p *= point.x;
  }
  return raw;
}

CVector normalized_differentials_at(const HyperellipticCurve& curve, const RiemannMatrix& periods,
                                    const CurvePoint& point) {
  return periods.normalization() * raw_differentials_at(curve, point);
}

LatticeReduction reduce_mod_lattice(const CMatrix& tau, const CVector& v) {
  const Eigen::Index g = tau.rows();
  if (v.size() != g) throw ArgumentError("reduce_mod_lattice: dimension mismatch");
  const Eigen::VectorXd n = tau.imag().fullPivLu().solve(v.imag());
  const Eigen::VectorXd m = v.real() - tau.real() * n;
  LatticeReduction r;
  r.n = n.unaryExpr([](double x) { return std::floor(x + 0.5); }).cast<int>();
  r.m = m.unaryExpr([](double x) { return std::floor(x + 0.5); }).cast<int>();
  r.reduced = v - r.m.cast<double>().cast<Complex>() - tau * r.n.cast<double>().cast<Complex>();
  return r;
}

double lattice_distance(const CMatrix& tau, const CVector& v) {
  const auto r = reduce_mod_lattice(tau, v);
  const auto g = static_cast<int>(tau.rows());
  double best = r.reduced.norm();
  if (g > 4) return best;
  // Rounding lattice coordinates can miss the nearest point for skewed
  // lattices; check the neighbouring cells as well.
  const int dims = 2 * g;
  int combos = 1;
  for (int i = 0; i < dims; ++i) combos *= 3;
  for (int c = 0; c < combos; ++c) {
    int code = c;
    CVector w = r.reduced;
    for (int i = 0; i < g; ++i) {
      const int dm = code % 3 - 1;
      code /= 3;
      w(i) -= static_cast<double>(dm);
    }
    Eigen::VectorXd dn(g);
    for (int i = 0; i < g; ++i) {
      dn(i) = code % 3 - 1;
      code /= 3;
    }
    w -= tau * dn.cast<Complex>();
    best = std::min(best, w.norm());
  }
  return best;
}

bool equal_mod_lattice(const CMatrix& tau, const CVector& v, const CVector& w, double tol) {
  return lattice_distance(tau, v - w) <= tol;
}

namespace {

// Integral of the raw model differentials from chain node `node` to the model
// point (u, eta) along the straight segment, with u = node + (u - node) r^2.
CVector node_to_point(const ChainModel& model, int node, Complex u, Complex eta, const PeriodOptions& options) {
  const Complex lam = model.nodes[node];
  const Complex d = u - lam;
  std::vector<Complex> others;
  for (std::size_t i = 0; i < model.nodes.size(); ++i)
    if (static_cast<int>(i) != node) others.push_back(model.nodes[i]);
  const auto br = detail::make_branch(lam, u, others);
  const Complex c = eta / br.eval(u);
  const Complex scale = 2.0 * d / c;
  const int g = model.g;
  auto f = [&](double r, std::vector<Complex>& out) {
    const Complex x = lam + d * (r * r);
    const Complex val = scale / br.eval(x);
    Complex p = 1.0;
    for (int k = 0; k < g; ++k) {
      out[k] = p * val;
      p *= x;
    }
  };
  const auto res = integrate_adaptive(f, g, 0.0, 1.0, quadrature_options(options, 2 * options.base_nodes));
  return Eigen::Map<const CVector>(res.value.data(), g);
}

// Integral along the upper side of the chain from node a to node b.
CVector chain_path(const ChainModel& model, int a, int b) {
  CVector s = CVector::Zero(model.g);
  if (a < b)
    for (int e = a; e < b; ++e) s += model.edges[e];
  else
    for (int e = b; e < a; ++e) s -= model.edges[e];
  return s;
}

struct Anchor {
  int node = 0;
  CVector offset;  // integral from the node to the point
};

Anchor anchor_point(const HyperellipticCurve& curve, const ChainModel& model, const CurvePoint& p,
                    const PeriodOptions& options) {
  if (p.branch) {
    const int pos = model.position_of_label(*p.branch);
    return Anchor{pos, CVector::Zero(model.g)};
  }
  if (std::abs(p.y * p.y - curve.f(p.x)) > 1e-8 * (1.0 + std::abs(curve.f(p.x))))
    throw ArgumentError("abel_jacobi: point does not lie on the curve");
  const Complex u = model.to_model_x(p.x);
  const Complex eta = model.to_model_y(p.x, p.y);
  std::vector<int> candidates(model.nodes.size());
  std::iota(candidates.begin(), candidates.end(), 0);
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return std::abs(model.nodes[a] - u) < std::abs(model.nodes[b] - u);
  });
  const double clearance = 1e-8 * model.diameter;
  for (int node : candidates) {
    bool clear = true;
    for (std::size_t i = 0; i < model.nodes.size() && clear; ++i)
      if (static_cast<int>(i) != node && detail::segment_distance(model.nodes[i], model.nodes[node], u) < clearance)
        clear = false;
    if (clear) return Anchor{node, node_to_point(model, node, u, eta, options)};
  }
  throw PathError("abel_jacobi: no integration path keeps clear of the branch points");
}

}  // namespace

AbelJacobiValue abel_jacobi(const HyperellipticCurve& curve, const RiemannMatrix& periods, const CurvePoint& p,
                            const CurvePoint& q, const PeriodOptions& options) {
  const auto& model = periods.model();
  const Anchor ap = anchor_point(curve, model, p, options);
  const Anchor aq = anchor_point(curve, model, q, options);
  const CVector raw = -ap.offset + chain_path(model, ap.node, aq.node) + aq.offset;
  AbelJacobiValue out;
  out.value = model.a_model_inv * raw;
  if (p.x == q.x && p.y == q.y && p.branch == q.branch) out.value.setZero();
  out.reduction = reduce_mod_lattice(periods.tau(), out.value);
  return out;
}

Complex j_algebraic(const HyperellipticCurve& curve) {
  if (curve.genus() != 1) throw DomainError("j_algebraic: curve is not of genus 1");
  const auto& e = curve.finite_branch_points();
  Complex lambda;
  if (curve.branch_point_at_infinity()) {
    lambda = (e[2] - e[0]) / (e[2] - e[1]);
  } else {
    lambda = ((e[2] - e[0]) * (e[3] - e[1])) / ((e[2] - e[1]) * (e[3] - e[0]));
  }
  const Complex num = lambda * lambda - lambda + 1.0;
  return 256.0 * num * num * num / (lambda * lambda * (lambda - 1.0) * (lambda - 1.0));
}

}  // namespace periodvar
