#include "periodvar/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "periodvar/errors.hpp"

namespace periodvar::io {

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const Json& report) { return report.dump(2) + "\n"; }

void write_report(const Json& report, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << dump(report);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << dump(report);
}

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ArgumentError(std::string("expected a number for ") + what);
  return j.get<double>();
}

}  // namespace

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ArgumentError("expected a complex number as [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const CMatrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    a.push_back(row);
  }
  return a;
}

HyperellipticCurve parse_curve(const Json& j) {
  if (!j.is_object()) throw ArgumentError("curve: expected an object");
  if (j.value("type", std::string()) != "hyperelliptic") throw ArgumentError("curve: type must be \"hyperelliptic\"");
  if (!j.contains("branch_points") || !j["branch_points"].is_array())
    throw ArgumentError("curve: missing branch_points array");
  std::vector<Complex> pts;
  int infinities = 0;
  for (const auto& p : j["branch_points"]) {
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") throw ArgumentError("curve: the only allowed string is \"inf\"");
      ++infinities;
    } else {
      pts.push_back(complex_from_json(p));
    }
  }
  if (infinities > 1) throw ArgumentError("curve: \"inf\" may appear at most once");
  if (infinities == 1 && pts.size() % 2 == 0)
    throw ArgumentError("curve: with \"inf\" listed the number of finite branch points must be odd");
  return HyperellipticCurve(pts, infinities == 1);
}

Json curve_to_json(const HyperellipticCurve& curve) {
  Json pts = Json::array();
  for (const auto& p : curve.finite_branch_points()) pts.push_back(to_json(p));
  if (curve.branch_point_at_infinity()) pts.push_back("inf");
  return Json{{"type", "hyperelliptic"}, {"branch_points", pts}};
}

FamilySpec parse_family(const Json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("deformation") || !j.contains("t_grid"))
    throw ArgumentError("family: expected base, deformation and t_grid");
  Deformation d;
  const auto& dj = j["deformation"];
  const std::string kind = dj.value("kind", std::string());
  if (kind == "collide") {
    if (!dj.contains("pair") || !dj["pair"].is_array() || dj["pair"].size() != 2)
      throw ArgumentError("family: collide needs a pair [i, j]");
    d.kind = Deformation::Kind::collide;
    d.i = dj["pair"][0].get<int>();
    d.j = dj["pair"][1].get<int>();
  } else if (kind == "move") {
    if (!dj.contains("index") || !dj.contains("direction"))
      throw ArgumentError("family: move needs index and direction");
    d.kind = Deformation::Kind::move;
    d.i = dj["index"].get<int>();
    d.direction = complex_from_json(dj["direction"]);
  } else {
    throw ArgumentError("family: deformation kind must be \"collide\" or \"move\"");
  }
  std::vector<double> grid;
  for (const auto& t : j["t_grid"]) {
    const double v = number(t, "t_grid entry");
    if (!(v > 0.0)) throw ArgumentError("family: t values must be positive");
    grid.push_back(v);
  }
  if (grid.empty()) throw ArgumentError("family: empty t_grid");
  return FamilySpec{parse_curve(j["base"]), d, grid};
}

SiegelPoint parse_siegel_point(const Json& j) {
  if (!j.is_object() || !j.contains("T")) throw ArgumentError("Siegel point: expected an object with T");
  const auto& t = j["T"];
  if (!t.is_array() || t.empty()) throw ArgumentError("Siegel point: T must be a nonempty matrix");
  const int g = static_cast<int>(t.size());
  if (j.contains("g") && j["g"].get<int>() != g) throw ArgumentError("Siegel point: g does not match T");
  CMatrix m(g, g);
  for (int r = 0; r < g; ++r) {
    if (!t[r].is_array() || static_cast<int>(t[r].size()) != g) throw ArgumentError("Siegel point: T is not square");
    for (int c = 0; c < g; ++c) m(r, c) = complex_from_json(t[r][c]);
  }
  return SiegelPoint(m);
}

Json siegel_point_to_json(const SiegelPoint& p) { return Json{{"g", p.g()}, {"T", to_json(p.T)}}; }

Json check(const std::string& name, const std::string& claim, bool pass, const Json& value, const Json& threshold) {
  Json c{{"name", name}, {"claim", claim}, {"pass", pass}, {"value", value}};
  if (!threshold.is_null()) c["threshold"] = threshold;
  return c;
}

Json to_json(const TauIndependenceReport& r) {
  return Json{{"n", r.n}, {"rank", r.rank}, {"expected", r.expected}, {"pass", r.pass}};
}

Json to_json(const DirectSumReport& r) {
  return Json{{"n", r.n}, {"rank_union", r.rank_union}, {"expected", r.expected}, {"pass", r.pass}};
}

Json to_json(const SigmaSpanReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back(Json{{"rank", t.rank}, {"vector_rank", t.vector_rank}, {"redraws", t.redraws}});
  return Json{{"n", r.n},          {"g", r.g},          {"zero_sum", r.zero_sum}, {"form", to_string(r.form)},
              {"trials", trials},  {"expected", r.expected}, {"pass", r.pass}};
}

Json to_json(const RiemannMatrix& rm) {
  Json order = Json::array();
  for (int l : rm.layout().order) order.push_back(l < 0 ? Json("inf") : Json(l));
  Json layout{{"order", order}};
  if (rm.layout().mobius_center) layout["mobius_center"] = to_json(*rm.layout().mobius_center);
  return Json{{"genus", rm.genus()},
              {"tau", to_json(rm.tau())},
              {"A", to_json(rm.a_periods())},
              {"B", to_json(rm.b_periods())},
              {"layout", layout},
              {"diagnostics",
               {{"symmetry_defect", rm.symmetry_defect()},
                {"min_imag_eigenvalue", rm.min_imag_eigenvalue()},
                {"error_estimate", rm.error_estimate()}}}};
}

Json to_json(const VariationReport& r) {
  Json steps = Json::array(), ratios = Json::array();
  for (double h : r.steps) steps.push_back(h);
  for (double q : r.halving_ratios) ratios.push_back(q);
  return Json{{"branch_index", r.branch_index},
              {"step_scale", r.step_scale},
              {"steps", steps},
              {"fd_matrix", to_json(r.fd_matrix)},
              {"w", to_json(r.w)},
              {"rank1_ratio", r.rank1_ratio},
              {"collinearity_angle", r.collinearity_angle},
              {"scalar", to_json(r.scalar)},
              {"fd_symmetry_defect", r.fd_symmetry_defect},
              {"halving_ratios", ratios},
              {"extrapolation_residual", r.extrapolation_residual}};
}

Json to_json(const DegenerationFit& f) {
  Json grid = Json::array(), tvv = Json::array();
  for (std::size_t i = 0; i < f.t_grid.size(); ++i) {
    grid.push_back(f.t_grid[i]);
    const auto v = f.taus[i].rows() - 1;
    tvv.push_back(to_json(f.taus[i](v, v)));
  }
  return Json{{"t_grid", grid},
              {"tau_vv", tvv},
              {"alpha", to_json(f.alpha)},
              {"c", to_json(f.c)},
              {"alpha_reference", to_json(f.alpha_reference)},
              {"r_squared", f.r_squared},
              {"max_residual", f.residual},
              {"offdiag_limit", to_json(f.offdiag_limit)},
              {"aj_target", to_json(f.aj_target)},
              {"aj_distance", f.aj_distance},
              {"upper_block_limit", to_json(f.upper_block_limit)},
              {"normalization_tau", to_json(f.normalization_tau)},
              {"upper_block_distance", f.upper_block_distance}};
}

Json to_json(const SchottkyValue& s) {
  return Json{{"F", to_json(s.value)},
              {"e8_squared_term", to_json(s.e8_squared)},
              {"d16_plus_term", to_json(s.d16_plus)},
              {"scale", s.scale},
              {"relative", s.relative()}};
}

Json to_json(const PhiResult& p) {
  Json ts = Json::array(), vals = Json::array(), diffs = Json::array();
  for (double t : p.t_list) ts.push_back(t);
  for (const auto& v : p.values) vals.push_back(to_json(v));
  for (double d : p.differences) diffs.push_back(d);
  return Json{{"value", to_json(p.value)}, {"t_list", ts}, {"values", vals}, {"differences", diffs}};
}

}  // namespace periodvar::io
