#include "doctest.h"
#include "periodvar/exact_span.hpp"

#include <random>

using namespace periodvar;

namespace {

RationalVector rv(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("tau tensor expansions") {
  // v1 v2 + v3^2
  SymTensor expect(3);
  expect.set(1, 2, 1);
  expect.set(3, 3, 1);
  CHECK(tau_tensor(1, 2, 3) == expect);

  CHECK(tau_tensor(1, 2, 2) == SymTensor::monomial(2, 1, 2));

  const auto t = tau_tensor(2, 3, 4);
  CHECK(t.coeff(1, 1) == 1);
  CHECK(t.coeff(2, 2) == 0);
  CHECK(t.coeff(3, 3) == 0);
  CHECK(t.coeff(4, 4) == 1);
  CHECK(t.coeff(2, 3) == 1);

  CHECK_THROWS_AS(tau_tensor(2, 2, 3), ArgumentError);
  CHECK_THROWS_AS(tau_tensor(3, 2, 3), ArgumentError);
  CHECK_THROWS_AS(tau_tensor(1, 4, 3), ArgumentError);
}

TEST_CASE("sigma tensor by hand") {
  const std::vector<RationalVector> w{rv({1, 0}), rv({0, 1}), rv({1, 1})};
  const auto s = sigma_tensor(w, 2, 3);
  // independent dense build: w2 w3^T + w3 w2^T + w1 w1^T
  long dense[2][2] = {};
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      dense[p][q] = w[1][p].get_num().get_si() * w[2][q].get_num().get_si() +
                    w[2][p].get_num().get_si() * w[1][q].get_num().get_si() +
                    w[0][p].get_num().get_si() * w[0][q].get_num().get_si();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) CHECK(s(p, q) == dense[p][q]);
  CHECK(s(0, 0) == 1);
  CHECK(s(0, 1) == 1);
  CHECK(s(1, 1) == 2);

  CHECK_THROWS_AS(sigma_tensor(std::vector<RationalVector>{rv({1, 0}), rv({1})}, 1, 2), ArgumentError);
}

TEST_CASE("symmetric_product form is the image of tau_kl") {
  const std::vector<RationalVector> w{rv({1, 2, 0}), rv({0, 1, 3}), rv({2, 0, 1}), rv({1, 1, 1})};
  for (int k = 1; k <= 4; ++k)
    for (int l = k + 1; l <= 4; ++l)
      CHECK(sigma_tensor(w, k, l, SigmaForm::symmetric_product) == project(tau_tensor(k, l, 4), w));
}

TEST_CASE("span ranks") {
  CHECK(span_rank(std::vector<SymTensor>{}) == 0);
  CHECK(span_rank({tau_tensor(1, 2, 3)}) == 1);
  CHECK(span_rank({tau_tensor(1, 2, 3), Rational(2) * tau_tensor(1, 2, 3)}) == 1);
  std::vector<SymTensor> all;
  for (int k = 1; k <= 5; ++k)
    for (int l = k + 1; l <= 5; ++l) all.push_back(tau_tensor(k, l, 5));
  CHECK(span_rank(all) == 10);
  CHECK_THROWS_AS(span_rank({SymTensor(2), SymTensor(3)}), ArgumentError);
}

TEST_CASE("lemma suites at small n") {
  auto t3 = verify_tau_independence(3);
  CHECK(t3.rank == 3);
  CHECK(t3.pass);
  CHECK(verify_tau_independence(4).rank == 6);
  CHECK(verify_tau_independence(12).rank == 66);

  CHECK(verify_direct_sum_e1V(3).rank_union == 6);
  auto d2 = verify_direct_sum_e1V(2);
  CHECK(d2.rank_union == 3);
  CHECK(d2.pass);
  CHECK(verify_direct_sum_e1V(10).rank_union == 55);

  auto s = verify_sigma_span(3, 4, 3, false, 7);
  CHECK(s.pass);
  CHECK(s.expected == 3);
  for (const auto& t : s.trials) CHECK(t.rank == 3);

  auto z = verify_sigma_span(5, 8, 3, true, 11);
  CHECK(z.pass);
  for (const auto& t : z.trials) CHECK(t.rank == 10);

  CHECK_THROWS_AS(verify_sigma_span(2, 2, 1, false, 1), ArgumentError);
}

TEST_CASE("sigma suite is reproducible from the seed") {
  const auto a = verify_sigma_span(4, 4, 2, false, 99);
  const auto b = verify_sigma_span(4, 4, 2, false, 99);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].redraws == b.trials[i].redraws);
}

TEST_CASE("coincident vectors give a flagged degenerate sample") {
  const auto r = sigma_span_rank({rv({1, 2, 3}), rv({1, 2, 3}), rv({1, 2, 3})});
  CHECK(r.rank == 1);
  CHECK(r.degenerate);
}

TEST_CASE("quadrics through point sets") {
  // twisted cubic cone (1, t, t^2, t^3): 10 - 7 = 3 quadrics
  std::vector<RationalVector> cubic;
  for (long t = -6; t <= 6; ++t) cubic.push_back(rv({1, t, t * t, t * t * t}));
  const auto q = quadrics_through(cubic);
  CHECK(q.size() == 3);
  for (const auto& Q : q)
    for (const auto& p : cubic) CHECK(evaluate_quadric(Q, p) == 0);

  std::vector<RationalVector> generic;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coord(-40, 40);
  for (int i = 0; i < 20; ++i) generic.push_back(rv({coord(rng), coord(rng), coord(rng), coord(rng)}));
  CHECK(quadrics_through(generic).empty());

  for (int g : {2, 3, 5}) {
    RationalVector e(static_cast<std::size_t>(g), Rational(0));
    e[0] = 1;
    CHECK(quadrics_through(std::vector<RationalVector>{e}).size() == static_cast<std::size_t>(g * (g + 1) / 2 - 1));
  }
}

TEST_CASE("trace pairing equals evaluation on a square") {
  const auto v = rv({2, -1, 3});
  SymMatrix<Rational> Q(3);
  Q.set(0, 0, 1);
  Q.set(0, 2, 2);
  Q.set(1, 1, -3);
  const auto sq = SymMatrix<Rational>::outer_square(v);
  CHECK(trace_pairing(Q, sq) == evaluate_quadric(Q, v));
}
