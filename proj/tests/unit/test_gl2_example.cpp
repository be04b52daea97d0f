#include <random>

#include "agr/gl2_example.hpp"
#include "agr/lattice.hpp"
#include "agr/witt.hpp"
#include "doctest.h"

using namespace agr;

namespace {

// Integer 2×2 matrices modulo m = p^3, so W_3(F_p) = Z/p^3.
struct IntMat {
  std::int64_t a, b, c, d;
};

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

int vp(std::int64_t x, std::int64_t p, int cap) {
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

template <class F>
void for_each_intmat(std::int64_t m, F&& f) {
  for (std::int64_t a = 0; a < m; ++a)
    for (std::int64_t b = 0; b < m; ++b)
      for (std::int64_t c = 0; c < m; ++c)
        for (std::int64_t d = 0; d < m; ++d) f(IntMat{a, b, c, d});
}

RingMatrix to_ring(const CoefficientRing& R, const IntMat& X) {
  RingMatrix M(2, 2);
  M(0, 0) = R.from_int(X.a);
  M(0, 1) = R.from_int(X.b);
  M(1, 0) = R.from_int(X.c);
  M(1, 1) = R.from_int(X.d);
  return M;
}

RingMatrix random_gl2(const CoefficientRing& R, std::mt19937_64& rng) {
  for (;;) {
    RingMatrix g(2, 2);
    for (auto& x : g.a) x = R.random(rng);
    if (R.is_unit(mat_det(R, g))) return g;
  }
}

}  // namespace

TEST_CASE("gl2 example: Teichmuller digits round trip") {
  std::mt19937_64 rng(5);
  for (std::uint64_t q : {2u, 3u, 4u, 9u}) {
    const auto R = w3_ring(q);
    for (int t = 0; t < 200; ++t) {
      const RingElem a = R.random(rng);
      CHECK(from_teichmuller_digits(R, teichmuller_digits(R, a)) == a);
    }
  }
  const auto R = w3_ring(5);
  // 5 = p·[1], since the Teichmüller lifts of 0 and 1 are 0 and 1
  const auto d = teichmuller_digits(R, R.from_int(5));
  CHECK(d[0].is_zero());
  CHECK(d[1] == R.field().one());
  CHECK(d[2].is_zero());
}

TEST_CASE("gl2 example: V_{2,3} membership against integer determinants") {
  for (std::int64_t p : {2, 3}) {
    const std::int64_t m = p * p * p;
    const auto R = w3_ring(std::uint64_t(p));
    std::int64_t count = 0, mismatches = 0;
    for_each_intmat(m, [&](const IntMat& X) {
      const std::int64_t det = mod(X.a * X.d - X.b * X.c, m);
      const bool oracle = det != 0 && vp(det, p, 3) == 2;
      count += oracle;
      if (v23_membership(R, to_ring(R, X)) != oracle) ++mismatches;
    });
    CHECK(mismatches == 0);
    const auto rep = quotient_count_check(std::uint64_t(p));
    CHECK(rep.v23 == count);
  }
}

TEST_CASE("gl2 example: quotient counts against brute force at q = 2") {
  const std::int64_t m = 8;
  std::vector<IntMat> all, V;
  for_each_intmat(m, [&](const IntMat& X) {
    all.push_back(X);
    const std::int64_t det = mod(X.a * X.d - X.b * X.c, m);
    if (det == 4) V.push_back(X);
  });
  std::int64_t gl = 0;
  for (const auto& g : all) gl += mod(g.a * g.d - g.b * g.c, m) % 2 == 1;
  CHECK(gl == gl2_w3_order(2));
  std::int64_t J = 0;
  for (const auto& X : V)
    for (const auto& g : all) {
      if (mod(g.a * g.d - g.b * g.c, m) % 2 == 0) continue;
      J += mod(X.a * g.a + X.b * g.c - X.a, m) == 0 && mod(X.a * g.b + X.b * g.d - X.b, m) == 0 &&
           mod(X.c * g.a + X.d * g.c - X.c, m) == 0 && mod(X.c * g.b + X.d * g.d - X.d, m) == 0;
    }
  const auto rep = quotient_count_check(2);
  CHECK(rep.v23 == std::int64_t(V.size()));
  CHECK(rep.v23 == 672);
  CHECK(rep.stabilizers == J);
  CHECK(rep.stabilizers == 10752);
  CHECK(rep.gr2 == 7);
  CHECK(rep.gl2_w3 == 1536);
  CHECK(rep.torsor_identity());
  // every stabilizer has q^4 elements, so the action on V is not free
  CHECK(rep.v23 * 16 == rep.stabilizers);
  CHECK_FALSE(rep.free_action_identity());
}

TEST_CASE("gl2 example: quotient counts at q = 3, 4") {
  for (std::uint64_t q : {3u, 4u}) {
    const auto rep = quotient_count_check(q);
    const auto Q = std::int64_t(q);
    CHECK(rep.gr2 == Q * Q + Q + 1);
    CHECK(rep.torsor_identity());
    CHECK(rep.v23 * Q * Q * Q * Q == rep.stabilizers);
  }
}

TEST_CASE("gl2 example: membership examples") {
  std::mt19937_64 rng(11);
  for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
    const auto R = w3_ring(q);
    RingMatrix pId(2, 2), Id(2, 2), D(2, 2);
    pId(0, 0) = pId(1, 1) = R.uniformizer_power(1);
    Id(0, 0) = Id(1, 1) = R.one();
    D(0, 0) = R.uniformizer_power(2);
    D(1, 1) = R.one();
    CHECK(v23_membership(R, pId));
    CHECK_FALSE(v23_membership(R, Id));
    for (int t = 0; t < 20; ++t) CHECK(v23_membership(R, mat_mul(R, D, random_gl2(R, rng))));
    RingMatrix P3(2, 2);
    P3(0, 0) = R.uniformizer_power(2);
    P3(1, 1) = R.uniformizer_power(1);
    CHECK_FALSE(v23_membership(R, P3));
  }
}

TEST_CASE("gl2 example: chart solution and factorization") {
  std::mt19937_64 rng(17);
  for (std::uint64_t q : {3u, 5u, 9u}) {
    const auto R = w3_ring(q);
    const auto& F = R.field();
    std::int64_t solved = 0;
    for (int t = 0; t < 100; ++t) {
      const FqElem x = F.random(rng), y = F.random(rng);
      ChartPoint c = y.is_zero() ? ChartPoint{F.zero(), F.zero(), F.random(rng)} : ChartPoint{x, y, x * x * y.inverse()};
      const RingMatrix A = chart_matrix(R, c);
      CHECK(v23_membership(R, A));
      CHECK(solve_xyz(R, A) == std::optional<ChartPoint>(c));
      CHECK(factor_check(R, A) == FactorResult::ok);
      const RingMatrix X = mat_mul(R, A, random_gl2(R, rng));
      const auto pt = solve_xyz(R, X);
      if (!pt) continue;
      ++solved;
      CHECK(*pt == c);
      CHECK(factor_check(R, X) == FactorResult::ok);
    }
    CHECK(solved > 50);
  }
  // p·Id has X_1 = Id, so b_1 c_1 - a_1 d_1 = -1 and (x, y, z) = 0
  const auto R = w3_ring(3);
  RingMatrix pId(2, 2);
  pId(0, 0) = pId(1, 1) = R.uniformizer_power(1);
  const ChartPoint zero{R.field().zero(), R.field().zero(), R.field().zero()};
  CHECK(solve_xyz(R, pId) == std::optional<ChartPoint>(zero));
  RingMatrix Id(2, 2);
  Id(0, 0) = Id(1, 1) = R.one();
  CHECK_THROWS_AS(solve_xyz(R, Id), std::invalid_argument);
  CHECK_THROWS_AS(solve_xyz(w3_ring(2), pId), std::invalid_argument);
  CHECK_THROWS_AS(chart_matrix(R, ChartPoint{R.field().one(), R.field().zero(), R.field().zero()}),
                  std::invalid_argument);
}

TEST_CASE("gl2 example: randomized suite") {
  for (std::uint64_t q : {3u, 5u}) {
    const auto rep = b3_suite(q, 300, 42);
    CHECK(rep.pass());
    CHECK(rep.skipped < 300);
    const auto again = b3_suite(q, 300, 42);
    CHECK(again.skipped == rep.skipped);
  }
}

TEST_CASE("gl2 example: equal characteristic and Demazure") {
  for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
    const auto Q = std::int64_t(q);
    const auto e = equal_char_compare(q);
    CHECK(e.pass());
    CHECK(e.cells.at(Coweight{2, 0}).first == Q * Q + Q);
    CHECK(e.cells.at(Coweight{1, 1}).first == 1);
    CHECK(e.mixed_total == Q * Q + Q + 1);
    const auto d = demazure_check(q);
    CHECK(d.pass());
    CHECK(d.chains == (Q + 1) * (Q + 1));
  }
}
