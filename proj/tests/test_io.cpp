#include "doctest.h"
#include "periodvar/acceptance.hpp"
#include "periodvar/io.hpp"

using namespace periodvar;
using io::Json;

TEST_CASE("curve files") {
  const auto c = io::parse_curve(Json::parse(R"({"type":"hyperelliptic","branch_points":[[0,0],[1,0],[-1,0],"inf"]})"));
  CHECK(c.genus() == 1);
  CHECK(c.branch_point_at_infinity());
  const auto back = io::parse_curve(io::curve_to_json(c));
  CHECK(back.finite_branch_points() == c.finite_branch_points());

  CHECK(io::parse_curve(Json::parse(R"({"type":"hyperelliptic","branch_points":[[0,0],[1,0],[2,0]]})")).genus() == 1);
  CHECK_THROWS_AS(io::parse_curve(Json::parse(R"({"type":"plane","branch_points":[]})")), ArgumentError);
  CHECK_THROWS_AS(io::parse_curve(Json::parse(R"({"type":"hyperelliptic","branch_points":[[0,0],[1,0],"inf","inf"]})")),
                  ArgumentError);
  CHECK_THROWS_AS(io::parse_curve(Json::parse(R"({"type":"hyperelliptic","branch_points":[[0,0],[1,0],[2,0],[3,0],"inf"]})")),
                  ArgumentError);
  CHECK_THROWS_AS(io::parse_curve(Json::parse(R"({"type":"hyperelliptic","branch_points":[[0,0,1],[1,0],[2,0]]})")),
                  ArgumentError);
}

TEST_CASE("family files") {
  const auto f = io::parse_family(Json::parse(R"({
    "base": {"type":"hyperelliptic","branch_points":[[-1,0],[1,0],[2,0],[3,0],[4,0],[5,0]]},
    "deformation": {"kind":"collide","pair":[0,1]},
    "t_grid": [1e-2, 1e-3, 1e-4]})"));
  CHECK(f.deformation.kind == Deformation::Kind::collide);
  CHECK(f.deformation.j == 1);
  CHECK(f.t_grid.size() == 3);
  const auto m = io::parse_family(Json::parse(R"({
    "base": {"type":"hyperelliptic","branch_points":[[-1,0],[1,0],[2,0]]},
    "deformation": {"kind":"move","index":2,"direction":[0,1]},
    "t_grid": [0.1]})"));
  CHECK(m.deformation.direction == Complex(0.0, 1.0));
  CHECK_THROWS_AS(io::parse_family(Json::parse(R"({"base":{},"deformation":{"kind":"twist"},"t_grid":[1]})")),
                  ArgumentError);
}

TEST_CASE("Siegel point files") {
  const auto p = io::parse_siegel_point(Json::parse(R"({"g":2,"T":[[[0,1],[0.5,0]],[[0.5,0],[0,2]]]})"));
  CHECK(p.g() == 2);
  CHECK(p.T(0, 1) == Complex(0.5, 0.0));
  const auto q = io::parse_siegel_point(io::siegel_point_to_json(p));
  CHECK(q.T == p.T);
  CHECK_THROWS_AS(io::parse_siegel_point(Json::parse(R"({"g":3,"T":[[[0,1]]]})")), ArgumentError);
  CHECK_THROWS_AS(io::parse_siegel_point(Json::parse(R"({"T":[[[0,-1]]]})")), DomainError);
}

TEST_CASE("reports are deterministic") {
  const auto a = acceptance::run_criterion("rescaling", 1);
  const auto b = acceptance::run_criterion("rescaling", 1);
  CHECK(io::dump(acceptance::to_json(a)) == io::dump(acceptance::to_json(b)));
  CHECK(a.pass);
  CHECK_THROWS_AS(acceptance::run_criterion("nonsense"), ArgumentError);
}
