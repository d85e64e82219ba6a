#include "periodvar/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "periodvar/errors.hpp"
#include "periodvar/exact_span.hpp"
#include "periodvar/lattice.hpp"
#include "periodvar/theta.hpp"
#include "periodvar/variation.hpp"

namespace periodvar::acceptance {

using io::Json;

namespace {

constexpr Complex I{0.0, 1.0};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Explicit mapping rather than std::uniform_real_distribution, whose output
  // is implementation defined.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

struct Outcome {
  bool pass = true;
  Json checks = Json::array();
  Json extra = Json::object();

  void add(const std::string& name, const std::string& claim, bool ok, const Json& value,
           const Json& threshold = nullptr) {
    pass = pass && ok;
    checks.push_back(io::check(name, claim, ok, value, threshold));
  }
};

double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------------------

Outcome lemma_span(std::uint64_t seed) {
  Outcome out;
  Json rows = Json::array();
  for (int n = 3; n <= 12; ++n) {
    const auto tau = verify_tau_independence(n);
    const auto sum = verify_direct_sum_e1V(n);
    const auto generic = verify_sigma_span(n, n, 5, false, seed + static_cast<std::uint64_t>(n));
    const auto zero = verify_sigma_span(n, n, 5, true, seed + 1000 + static_cast<std::uint64_t>(n));
    const std::string sn = "n=" + std::to_string(n);
    out.add("tau_independence " + sn, "the tensors tau_kl are linearly independent", tau.pass, tau.rank,
            tau.expected);
    out.add("direct_sum " + sn, "T and e1.V together span Sym^2 V", sum.pass, sum.rank_union, sum.expected);
    out.add("sigma_span generic " + sn, "the sigma tensors of n general vectors span T", generic.pass,
            io::to_json(generic)["trials"], generic.expected);
    out.add("sigma_span zero_sum " + sn, "the sigma tensors span T for vectors summing to zero", zero.pass,
            io::to_json(zero)["trials"], zero.expected);
  }
  return out;
}

Outcome genus1_j(std::uint64_t) {
  Outcome out;
  struct Case {
    std::string name;
    std::vector<Complex> points;
    double exact;
  };
  const double s3 = std::sqrt(3.0) / 2.0;
  const std::vector<Case> cases{
      {"y^2 = x^3 - x", {0.0, 1.0, -1.0}, 1728.0},
      {"y^2 = x^3 - 1", {1.0, Complex(-0.5, s3), Complex(-0.5, -s3)}, 0.0},
  };
  for (const auto& c : cases) {
    const HyperellipticCurve curve(c.points, true);
    const Complex j_alg = j_algebraic(curve);
    out.add("j_algebraic " + c.name, "cross-ratio j-invariant of the curve", rel_diff(j_alg, c.exact) < 1e-9,
            io::to_json(j_alg), 1e-9);
    const auto rm = period_matrix(curve);
    const Complex j_tau = j_invariant(SiegelPoint(rm.symmetric_tau()));
    // Relative to max(|j|, 1): j = 0 has no relative scale of its own.
    const double err = std::abs(j_tau - j_alg) / std::max(1.0, std::abs(j_alg));
    out.add("j(tau) " + c.name, "j of the computed period equals the algebraic j-invariant", err < 1e-6, err, 1e-6);
    out.extra[c.name] = Json{{"tau", io::to_json(rm.tau()(0, 0))}, {"j_tau", io::to_json(j_tau)}};
  }
  return out;
}

Outcome riemann_invariants(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  for (int g : {2, 3}) {
    double worst_sym = 0.0, worst_eig = INFINITY;
    int failures = 0;
    for (int k = 0; k < 20; ++k) {
      const auto curve = random_curve(g, k % 2 == 0, rng);
      const auto rm = period_matrix(curve);
      const double sym = rm.symmetry_defect();
      const double eig = rm.min_imag_eigenvalue();
      worst_sym = std::max(worst_sym, sym);
      worst_eig = std::min(worst_eig, eig);
      if (!(sym < 1e-6 && eig > 0.0)) ++failures;
    }
    const std::string sg = "genus " + std::to_string(g);
    out.add("symmetry " + sg, "tau is symmetric", worst_sym < 1e-6, worst_sym, 1e-6);
    out.add("positivity " + sg, "Im tau is positive definite", worst_eig > 0.0, worst_eig, 0.0);
    out.extra[sg] = Json{{"curves", 20}, {"failures", failures}};
  }
  return out;
}

HyperellipticCurve rauch_curve() {
  return HyperellipticCurve({Complex(0.1, 0.2), Complex(1, -0.3), Complex(-1, 0.5), Complex(2, 1),
                             Complex(-0.5, -1.5), Complex(0.7, 1.7)});
}

Outcome schiffer_rank1(std::uint64_t) {
  Outcome out;
  const auto curve = rauch_curve();
  Json reports = Json::array();
  for (int k = 0; k < static_cast<int>(curve.finite_branch_points().size()); ++k) {
    const auto r = rauch_fd_check(curve, k);
    const std::string sk = "branch " + std::to_string(k);
    out.add("rank1_ratio " + sk, "d tau / d lambda is of rank one", r.rank1_ratio < 1e-3, r.rank1_ratio, 1e-3);
    out.add("collinearity " + sk, "d tau / d lambda is proportional to w w^T", r.collinearity_angle < 1e-3,
            r.collinearity_angle, 1e-3);
    reports.push_back(Json{{"branch_index", k},
                           {"scalar", io::to_json(r.scalar)},
                           {"halving_ratios", r.halving_ratios},
                           {"extrapolation_residual", r.extrapolation_residual}});
  }
  out.extra["branches"] = reports;
  out.extra["curve"] = io::curve_to_json(curve);
  return out;
}

Outcome rescaling(std::uint64_t) {
  Outcome out;
  const auto curve = rauch_curve();
  const auto rm = period_matrix(curve);
  const std::vector<std::pair<std::string, CurvePoint>> points{
      {"generic point", point_on_sheet(curve, Complex(0.4, -0.6), 1)},
      {"branch point", branch_point(curve, 2)},
  };
  for (const auto& [where, p] : points) {
    const CMatrix base = schiffer_tensor(curve, rm, p, 1.0).matrix;
    for (const Complex lambda : {Complex(2.0), I, Complex(1.0, 1.0)}) {
      const CMatrix scaled = schiffer_tensor(curve, rm, p, lambda).matrix;
      const CMatrix expect = lambda * lambda * base;
      const double err = (scaled - expect).norm() / expect.norm();
      out.add("lambda=" + std::to_string(lambda.real()) + "+" + std::to_string(lambda.imag()) + "i " + where,
              "rescaling the local coordinate by lambda multiplies the Schiffer tensor by lambda^2", err < 1e-12, err,
              1e-12);
    }
  }
  return out;
}

FamilySpec fay_family() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(std::pow(10.0, -2.0 - 3.0 * i / 9.0));
  return FamilySpec{HyperellipticCurve({-1.0, 1.0, 2.0, 3.0, 4.0, 5.0}),
                    Deformation{Deformation::Kind::collide, 0, 1, 1.0}, grid};
}

Outcome fay_degeneration(std::uint64_t) {
  Outcome out;
  const auto fit = fay_degeneration_fit(fay_family());
  out.add("log_fit", "tau_vv = alpha log t + c along the collision", fit.r_squared > 0.999, fit.r_squared, 0.999);
  out.add("offdiag_limit", "the off-diagonal column tends to the Abel-Jacobi image of the node preimages",
          fit.aj_distance < 1e-3, fit.aj_distance, 1e-3);
  out.extra["fit"] = io::to_json(fit);
  return out;
}

Outcome theta_checks(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  {
    const SiegelPoint ti(CMatrix::Constant(1, 1, I));
    const Complex th = theta_constant({{0}, {0}}, ti);
    const double ref = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
    const double err = std::abs(th - ref);
    out.add("theta3(i)", "theta3(i) = pi^(1/4) / Gamma(3/4)", err < 1e-10, err, 1e-10);
  }
  {
    const auto th = all_theta_constants(SiegelPoint(CMatrix::Constant(1, 1, 2.0 * I)));
    const double err = std::abs(std::pow(th[2], 4) + std::pow(th[1], 4) - std::pow(th[0], 4));
    out.add("jacobi(2i)", "theta3^4 = theta2^4 + theta4^4", err < 1e-10, err, 1e-10);
  }
  for (int g = 1; g <= 4; ++g) {
    const auto point = random_siegel_point(g, rng);
    const auto th = all_theta_constants(point);
    double worst = 0.0;
    for (const auto& ch : all_characteristics(g))
      if (!ch.even()) worst = std::max(worst, std::abs(th[characteristic_index(ch)]));
    out.add("odd_vanish g=" + std::to_string(g), "odd theta constants vanish", worst < 1e-10, worst, 1e-10);
  }
  CMatrix t1(1, 1);
  t1 << Complex(0.3, 2.0);
  CMatrix t2(2, 2);
  t2 << Complex(0.1, 2.0), Complex(0.3, 0.4), Complex(0.3, 0.4), Complex(-0.2, 2.1);
  struct Case {
    const char* lattice;
    LatticeFamily family;
    int bound;
  };
  for (const auto& T : {SiegelPoint(t1), SiegelPoint(t2)}) {
    for (const Case c : {Case{"E8", LatticeFamily::e8, 12}, Case{"D16+", LatticeFamily::d16_plus, 6}}) {
      const auto spec = LatticeSpec::by_name(c.lattice);
      const auto lat = lattice_theta(spec, T, {c.bound});
      const Complex cst = theta_series_via_constants(c.family, T);
      const double err = rel_diff(lat.value, cst);
      const std::string label = std::string(c.lattice) + " g=" + std::to_string(T.g());
      out.add("lattice_vs_constants " + label, "the lattice theta series equals its theta-constant expression",
              err < 1e-6, err, 1e-6);
      out.extra["tail_estimate " + label] = lat.tail_estimate;
    }
  }
  return out;
}

Outcome schottky(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  for (int g = 1; g <= 3; ++g) {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) worst = std::max(worst, schottky_form(random_siegel_point(g, rng)).relative());
    out.add("vanishes degree " + std::to_string(g), "the Schottky form vanishes identically in degree <= 3",
            worst < 1e-8, worst, 1e-8);
  }
  const auto sample = genus4_hyperelliptic(rng);
  const auto on = schottky_form(sample.tau);
  out.add("hyperelliptic jacobian", "the Schottky form vanishes on Jacobians", on.relative() < 1e-4, on.relative(),
          1e-4);
  const auto off = schottky_form(perturb(sample.tau, 0.1, rng));
  out.add("perturbed point", "the Schottky form does not vanish off the Jacobian locus", off.relative() > 1e-2,
          off.relative(), 1e-2);
  out.extra["curve"] = io::curve_to_json(sample.curve);
  out.extra["draws"] = sample.draws;
  out.extra["min_imag_eigenvalue"] = sample.tau.min_imag_eigenvalue();
  out.extra["on_jacobian"] = io::to_json(on);
  out.extra["perturbed"] = io::to_json(off);
  return out;
}

Outcome phi_operator(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  const std::vector<double> ts{2.0, 4.0, 6.0, 8.0, 10.0};
  const SiegelForm e8_deg2 = [](const SiegelPoint& T) { return theta_series_via_constants(LatticeFamily::e8, T); };
  for (int k = 0; k < 3; ++k) {
    const auto tau = random_siegel_point(1, rng);
    const auto phi = siegel_phi(e8_deg2, tau, ts);
    const Complex lat = lattice_theta(LatticeSpec::e8(), tau, {12}).value;
    const double err = rel_diff(phi.value, lat);
    out.add("phi E8 point " + std::to_string(k), "Phi maps the degree-2 E8 theta series to the degree-1 one",
            err < 1e-6, err, 1e-6);
  }
  const SiegelForm f4 = [](const SiegelPoint& T) { return schottky_form(T).value; };
  for (int k = 0; k < 3; ++k) {
    const auto tau = random_siegel_point(3, rng);
    const double scale = schottky_form(SiegelPoint::block_diagonal(tau, 10.0 * I)).scale;
    const auto phi = siegel_phi(f4, tau, ts, 1e-12 * scale);
    const double rel = std::abs(phi.value) / scale;
    out.add("phi schottky point " + std::to_string(k), "Phi of the degree-4 Schottky form vanishes", rel < 1e-8,
            rel, 1e-8);
  }
  return out;
}

Outcome two_torsion(std::uint64_t) {
  Outcome out;
  const auto curve = rauch_curve();
  const auto rm = period_matrix(curve);
  const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 3}, {1, 4}, {2, 5}, {3, 5}};
  for (const auto& [i, j] : pairs) {
    const auto aj = abel_jacobi(curve, rm, branch_point(curve, i), branch_point(curve, j));
    const double d = lattice_distance(rm.symmetric_tau(), 2.0 * aj.value);
    out.add("pair " + std::to_string(i) + "," + std::to_string(j),
            "twice the Abel-Jacobi image of a difference of branch points lies in the lattice", d < 1e-5, d, 1e-5);
  }
  return out;
}

struct Entry {
  const char* name;
  const char* claim;
  std::function<Outcome(std::uint64_t)> run;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"lemma_span", {"Sigma span suite", "exact ranks of the tau, e1.V and sigma families for n = 3..12", lemma_span}},
      {"genus1_j", {"Genus-1 periods", "j(tau) matches the algebraic j-invariant for j = 1728 and j = 0", genus1_j}},
      {"riemann_invariants",
       {"Riemann-matrix invariants", "random genus-2 and genus-3 period matrices are symmetric with Im tau > 0",
        riemann_invariants}},
      {"schiffer_rank1",
       {"Schiffer rank-1", "moving a branch point changes tau by a rank-one tensor along w w^T", schiffer_rank1}},
      {"rescaling", {"Coordinate rescaling", "the Schiffer tensor scales as lambda^2", rescaling}},
      {"fay_degeneration",
       {"Fay degeneration", "logarithmic growth and Abel-Jacobi limit along a branch-point collision",
        fay_degeneration}},
      {"theta_checks", {"Theta cross-checks", "classical identities and lattice theta series", theta_checks}},
      {"schottky", {"Schottky form", "vanishing in low degree and on Jacobians, not elsewhere", schottky}},
      {"phi_operator", {"Phi operator", "Phi lowers the E8 series and kills the Schottky form", phi_operator}},
      {"two_torsion", {"Abel-Jacobi 2-torsion", "differences of branch points are 2-torsion", two_torsion}},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids{"lemma_span",       "genus1_j",     "riemann_invariants", "schiffer_rank1",
                                            "rescaling",        "fay_degeneration", "theta_checks",   "schottky",
                                            "phi_operator",     "two_torsion"};
  return ids;
}

CriterionResult run_criterion(const std::string& id, std::uint64_t seed) {
  const auto& r = registry();
  const auto it = r.find(id);
  if (it == r.end()) throw ArgumentError("unknown criterion '" + id + "'");
  CriterionResult result{id, it->second.name, it->second.claim, false, Json::object()};
  try {
    auto outcome = it->second.run(seed);
    result.pass = outcome.pass;
    result.detail["checks"] = std::move(outcome.checks);
    if (!outcome.extra.empty()) result.detail["data"] = std::move(outcome.extra);
  } catch (const NumericalError& e) {
    result.detail["error"] = e.what();
  }
  return result;
}

Json to_json(const CriterionResult& r) {
  return Json{{"id", r.id}, {"name", r.name}, {"claim", r.claim}, {"pass", r.pass}, {"detail", r.detail}};
}

HyperellipticCurve random_curve(int g, bool with_infinity, std::mt19937_64& rng, double min_separation) {
  if (g < 1) throw ArgumentError("random_curve: genus must be positive");
  const int count = with_infinity ? 2 * g + 1 : 2 * g + 2;
  std::vector<Complex> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Complex z(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
    const bool clear =
        std::all_of(pts.begin(), pts.end(), [&](Complex p) { return std::abs(p - z) >= min_separation; });
    if (clear) pts.push_back(z);
  }
  return HyperellipticCurve(pts, with_infinity);
}

SiegelPoint random_siegel_point(int g, std::mt19937_64& rng, double y_min) {
  if (g < 1) throw ArgumentError("random_siegel_point: degree must be positive");
  Eigen::MatrixXd a(g, g), x(g, g);
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c) a(r, c) = uniform(rng, -0.5, 0.5);
  for (int r = 0; r < g; ++r)
    for (int c = r; c < g; ++c) x(r, c) = x(c, r) = uniform(rng, -0.5, 0.5);
  const Eigen::MatrixXd y = a * a.transpose() / g + y_min * Eigen::MatrixXd::Identity(g, g);
  return SiegelPoint(x.cast<Complex>() + I * y.cast<Complex>());
}

Genus4Sample genus4_hyperelliptic(std::mt19937_64& rng, double min_imag) {
  for (int draw = 1; draw <= 200; ++draw) {
    const auto curve = random_curve(4, false, rng, 0.5);
    try {
      const SiegelPoint tau(period_matrix(curve).symmetric_tau());
      if (tau.min_imag_eigenvalue() >= min_imag) return Genus4Sample{curve, tau, draw};
    } catch (const NumericalError&) {
      // redraw
    }
  }
  throw DiagnosticFailure("no genus-4 hyperelliptic sample met the conditioning requirement");
}

SiegelPoint perturb(const SiegelPoint& tau, double size, std::mt19937_64& rng) {
  const int g = tau.g();
  for (int attempt = 0; attempt < 100; ++attempt) {
    CMatrix s(g, g);
    for (int r = 0; r < g; ++r)
      for (int c = r; c < g; ++c) s(r, c) = s(c, r) = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    const CMatrix t = tau.T + size * s / s.norm();
    const Eigen::MatrixXd im = t.imag();
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff() > 0.0) return SiegelPoint(t);
  }
  throw DiagnosticFailure("perturb: could not keep Im tau positive");
}

}  // namespace periodvar::acceptance
