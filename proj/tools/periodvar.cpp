// periodvar: command-line access to the verification suites.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad arguments or input,
// 3 numerical failure (conditioning, precision, truncation, paths).

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "periodvar/acceptance.hpp"
#include "periodvar/errors.hpp"
#include "periodvar/exact_span.hpp"
#include "periodvar/hyperelliptic.hpp"
#include "periodvar/io.hpp"
#include "periodvar/lattice.hpp"
#include "periodvar/theta.hpp"
#include "periodvar/variation.hpp"

using namespace periodvar;
using io::Json;

namespace {

struct Common {
  std::string out = "-";
  std::uint64_t seed = acceptance::default_seed;
};

// Collects checks and the overall verdict for one command.
struct Report {
  Json doc;
  bool pass = true;

  explicit Report(const std::string& command) { doc["command"] = command; }

  void check(const std::string& name, const std::string& claim, bool ok, const Json& value,
             const Json& threshold = nullptr) {
    pass = pass && ok;
    doc["checks"].push_back(io::check(name, claim, ok, value, threshold));
  }

  int finish(const Common& common) {
    doc["pass"] = pass;
    io::write_report(doc, common.out);
    return pass ? 0 : 1;
  }
};

// --- span-check ------------------------------------------------------------

struct SpanArgs {
  int n = 0;
  bool zero_sum = false;
  int trials = 5;
  int g = 0;
};

int span_check(const SpanArgs& a, const Common& common) {
  if (a.n < 2) throw ArgumentError("span-check: --n must be at least 2");
  Report r("span-check");
  r.doc["n"] = a.n;
  const auto tau = verify_tau_independence(a.n);
  const auto sum = verify_direct_sum_e1V(a.n);
  r.doc["tau_independence"] = io::to_json(tau);
  r.doc["direct_sum"] = io::to_json(sum);
  r.check("tau_independence", "the tensors tau_kl are linearly independent", tau.pass, tau.rank, tau.expected);
  r.check("direct_sum", "T and e1.V together span Sym^2 V", sum.pass, sum.rank_union, sum.expected);
  if (a.n >= 3) {
    const int g = a.g > 0 ? a.g : a.n;
    const auto sigma = verify_sigma_span(a.n, g, a.trials, a.zero_sum, common.seed);
    r.doc["sigma_span"] = io::to_json(sigma);
    r.check("sigma_span", a.zero_sum ? "the sigma tensors span T for vectors summing to zero"
                                     : "the sigma tensors of n general vectors span T",
            sigma.pass, sigma.trials.empty() ? 0 : sigma.trials.front().rank, sigma.expected);
  } else {
    r.doc["sigma_span"] = nullptr;  // needs n >= 3
  }
  return r.finish(common);
}

// --- periods ---------------------------------------------------------------

int periods(const std::string& curve_file, double precision, const Common& common) {
  const auto curve = io::parse_curve(io::read_file(curve_file));
  PeriodOptions opts;
  opts.precision = precision;
  const auto rm = period_matrix(curve, opts);
  Report r("periods");
  r.doc["curve"] = io::curve_to_json(curve);
  auto body = io::to_json(rm);
  for (auto& [k, v] : body.items()) r.doc[k] = v;
  if (rm.genus() == 1) {
    const Complex j_tau = j_invariant(SiegelPoint(rm.symmetric_tau()));
    const Complex j_alg = j_algebraic(curve);
    r.doc["diagnostics"]["j_from_tau"] = io::to_json(j_tau);
    r.doc["diagnostics"]["j_algebraic"] = io::to_json(j_alg);
    const double err = std::abs(j_tau - j_alg) / std::max(1.0, std::abs(j_alg));
    r.check("j_invariant", "j of the computed period equals the algebraic j-invariant", err < 1e-6, err, 1e-6);
  }
  r.check("symmetry", "tau is symmetric", rm.symmetry_defect() < 1e-6, rm.symmetry_defect(), 1e-6);
  r.check("positivity", "Im tau is positive definite", rm.min_imag_eigenvalue() > 0.0, rm.min_imag_eigenvalue(),
          0.0);
  return r.finish(common);
}

// --- rauch -----------------------------------------------------------------

int rauch(const std::string& curve_file, int branch, const std::vector<double>& h, const Common& common) {
  const auto curve = io::parse_curve(io::read_file(curve_file));
  RauchOptions opts;
  if (!h.empty()) opts.steps = h;
  const auto rep = rauch_fd_check(curve, branch, opts);
  Report r("rauch");
  r.doc["curve"] = io::curve_to_json(curve);
  r.doc["report"] = io::to_json(rep);
  r.check("rank1_ratio", "d tau / d lambda is of rank one", rep.rank1_ratio < 1e-3, rep.rank1_ratio, 1e-3);
  r.check("collinearity", "d tau / d lambda is proportional to w w^T", rep.collinearity_angle < 1e-3,
          rep.collinearity_angle, 1e-3);
  return r.finish(common);
}

// --- fay-fit ---------------------------------------------------------------

int fay_fit(const std::string& family_file, const Common& common) {
  const auto family = io::parse_family(io::read_file(family_file));
  const auto fit = fay_degeneration_fit(family);
  Report r("fay-fit");
  r.doc["fit"] = io::to_json(fit);
  r.check("log_fit", "tau_vv = alpha log t + c along the collision", fit.r_squared > 0.999, fit.r_squared, 0.999);
  r.check("offdiag_limit", "the off-diagonal column tends to the Abel-Jacobi image of the node preimages",
          fit.aj_distance < 1e-3, fit.aj_distance, 1e-3);
  return r.finish(common);
}

// --- schottky --------------------------------------------------------------

int schottky(const std::string& point_file, const std::string& curve_file, const std::string& expect,
             const Common& common) {
  if (point_file.empty() == curve_file.empty()) throw ArgumentError("schottky: give exactly one of --point, --curve");
  Report r("schottky");
  SiegelPoint tau;
  bool jacobian = false;
  if (!curve_file.empty()) {
    const auto curve = io::parse_curve(io::read_file(curve_file));
    if (curve.genus() > 4) throw DomainError("schottky: the Schottky form lives in degree <= 4");
    r.doc["curve"] = io::curve_to_json(curve);
    tau = SiegelPoint(period_matrix(curve).symmetric_tau());
    jacobian = true;
  } else {
    tau = io::parse_siegel_point(io::read_file(point_file));
  }
  r.doc["point"] = io::siegel_point_to_json(tau);
  const auto value = schottky_form(tau);
  r.doc["value"] = io::to_json(value);

  std::string mode = expect;
  if (mode == "auto") mode = tau.g() <= 3 ? "vanish" : (jacobian ? "vanish" : "none");
  const double rel = value.relative();
  if (mode == "vanish") {
    const double tol = tau.g() <= 3 ? 1e-8 : 1e-4;
    r.check("vanishes", tau.g() <= 3 ? "the Schottky form vanishes identically in degree <= 3"
                                     : "the Schottky form vanishes on Jacobians",
            rel < tol, rel, tol);
  } else if (mode == "nonvanish") {
    r.check("nonvanishing", "the Schottky form does not vanish off the Jacobian locus", rel > 1e-2, rel, 1e-2);
  }
  return r.finish(common);
}

// --- phi -------------------------------------------------------------------

int phi(const std::string& form_name, const std::string& point_file, std::vector<double> t_list,
        const Common& common) {
  const auto tau = io::parse_siegel_point(io::read_file(point_file));
  if (t_list.empty()) t_list = {2.0, 4.0, 6.0, 8.0, 10.0};
  Report r("phi");
  r.doc["form"] = form_name;
  r.doc["point"] = io::siegel_point_to_json(tau);
  if (form_name == "schottky") {
    const SiegelForm f = [](const SiegelPoint& T) { return schottky_form(T).value; };
    if (tau.g() != 3) throw ArgumentError("phi: the Schottky form needs a degree-3 point");
    const double scale = schottky_form(SiegelPoint::block_diagonal(tau, Complex(0.0, t_list.back()))).scale;
    const auto res = siegel_phi(f, tau, t_list, 1e-12 * scale);
    r.doc["result"] = io::to_json(res);
    const double rel = std::abs(res.value) / scale;
    r.check("vanishes", "Phi of the degree-4 Schottky form vanishes", rel < 1e-8, rel, 1e-8);
    return r.finish(common);
  }
  LatticeFamily family;
  if (form_name == "E8")
    family = LatticeFamily::e8;
  else if (form_name == "E8xE8")
    family = LatticeFamily::e8_squared;
  else if (form_name == "D16+")
    family = LatticeFamily::d16_plus;
  else
    throw ArgumentError("phi: --form must be E8, E8xE8, D16+ or schottky");
  const SiegelForm f = [family](const SiegelPoint& T) { return theta_series_via_constants(family, T); };
  const auto res = siegel_phi(f, tau, t_list);
  r.doc["result"] = io::to_json(res);
  const Complex lower = theta_series_via_constants(family, tau);
  const double err = std::abs(res.value - lower) / std::max(1.0, std::abs(lower));
  r.doc["lower_degree_value"] = io::to_json(lower);
  r.check("matches_lower_degree", "Phi maps the theta series to the one of degree one less", err < 1e-6, err, 1e-6);
  return r.finish(common);
}

// --- verify-all ------------------------------------------------------------

int verify_all(const std::vector<std::string>& only, const Common& common) {
  const auto& ids = only.empty() ? acceptance::criterion_ids() : only;
  Json doc{{"command", "verify-all"}, {"seed", common.seed}};
  Json crit = Json::array();
  bool pass = true;
  for (const auto& id : ids) {
    auto res = acceptance::run_criterion(id, common.seed);
    std::cerr << (res.pass ? "PASS " : "FAIL ") << res.id << "\n";
    pass = pass && res.pass;
    crit.push_back(acceptance::to_json(res));
  }
  doc["criteria"] = crit;
  doc["pass"] = pass;
  io::write_report(doc, common.out);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Period matrices, their variations and Siegel theta constants"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out, "Report path (default: stdout)");
  app.add_option("--seed", common.seed, "Seed for randomized suites");

  SpanArgs span;
  auto* span_cmd = app.add_subcommand("span-check", "Exact rank checks of the span lemma");
  span_cmd->add_option("--n", span.n, "Number of points")->required();
  span_cmd->add_flag("--zero-sum", span.zero_sum, "Sample vectors summing to zero");
  span_cmd->add_option("--trials", span.trials, "Random trials for the sigma suite");
  span_cmd->add_option("--g", span.g, "Dimension of V (default n)");

  std::string curve_file, family_file, point_file, expect = "auto", form = "E8";
  double precision = 1e-12;
  int branch = 0;
  std::vector<double> h_list, t_list;
  std::vector<std::string> only;

  auto* periods_cmd = app.add_subcommand("periods", "Period matrix of a hyperelliptic curve");
  periods_cmd->add_option("--curve", curve_file, "Curve file")->required();
  periods_cmd->add_option("--precision", precision, "Target accuracy of tau");

  auto* rauch_cmd = app.add_subcommand("rauch", "Finite-difference check of the branch-point variation");
  rauch_cmd->add_option("--curve", curve_file, "Curve file")->required();
  rauch_cmd->add_option("--branch", branch, "Finite branch point index")->required();
  rauch_cmd->add_option("--steps", h_list, "Relative step sizes, decreasing");

  auto* fay_cmd = app.add_subcommand("fay-fit", "Logarithmic fit along a degenerating family");
  fay_cmd->add_option("--family", family_file, "Family file")->required();

  auto* schottky_cmd = app.add_subcommand("schottky", "Schottky form at a Siegel point or a curve");
  schottky_cmd->add_option("--point", point_file, "Siegel point file");
  schottky_cmd->add_option("--curve", curve_file, "Curve file (genus <= 4)");
  schottky_cmd->add_option("--expect", expect, "auto, vanish, nonvanish or none")
      ->check(CLI::IsMember({"auto", "vanish", "nonvanish", "none"}));

  auto* phi_cmd = app.add_subcommand("phi", "Siegel Phi operator of a theta series or the Schottky form");
  phi_cmd->add_option("--form", form, "E8, E8xE8, D16+ or schottky");
  phi_cmd->add_option("--point", point_file, "Siegel point file")->required();
  phi_cmd->add_option("--t", t_list, "Increasing t values, last >= 10");

  auto* all_cmd = app.add_subcommand("verify-all", "Run the acceptance suite");
  all_cmd->add_option("--only", only, "Restrict to these criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*span_cmd) return span_check(span, common);
    if (*periods_cmd) return periods(curve_file, precision, common);
    if (*rauch_cmd) return rauch(curve_file, branch, h_list, common);
    if (*fay_cmd) return fay_fit(family_file, common);
    if (*schottky_cmd) return schottky(point_file, curve_file, expect, common);
    if (*phi_cmd) return phi(form, point_file, t_list, common);
    if (*all_cmd) return verify_all(only, common);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
