#include <random>

#include "agr/witt.hpp"
#include "doctest.h"
#include "ghost_oracle.hpp"

using namespace agr;

namespace {

WittVector random_witt(const Fq& F, unsigned h, std::mt19937_64& rng) {
  std::vector<FqElem> c;
  for (unsigned i = 0; i < h; ++i) c.push_back(F.random(rng));
  return {F, c};
}

WittVector coords(const Fq& F, std::initializer_list<std::uint32_t> raw) {
  std::vector<FqElem> c;
  for (auto v : raw) c.push_back(F.from_raw(v));
  return {F, c};
}

}  // namespace

TEST_CASE("witt sums and products match the ghost recursion") {
  std::mt19937_64 rng(5);
  for (auto [p, r, h] : {std::tuple{2u, 1u, 5u}, {3u, 1u, 4u}, {2u, 3u, 4u}, {3u, 2u, 3u}, {5u, 2u, 3u}, {2u, 6u, 3u}}) {
    const Fq& F = Fq::get(p, r);
    for (int t = 0; t < 60; ++t) {
      auto a = random_witt(F, h, rng), b = random_witt(F, h, rng);
      CHECK(witt_add(a, b).coords() == oracle::combine(a.coords(), b.coords(), oracle::Op::add));
      CHECK(witt_mul(a, b).coords() == oracle::combine(a.coords(), b.coords(), oracle::Op::mul));
    }
  }
}

TEST_CASE("witt ring axioms on the test grid") {
  std::mt19937_64 rng(17);
  for (auto [p, r, h] : {std::tuple{2u, 1u, 8u}, {3u, 2u, 4u}, {5u, 1u, 6u}, {2u, 4u, 5u}, {5u, 3u, 3u}}) {
    const Fq& F = Fq::get(p, r);
    for (int t = 0; t < 1000; ++t) {
      auto a = random_witt(F, h, rng), b = random_witt(F, h, rng), c = random_witt(F, h, rng);
      REQUIRE(witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c)));
      REQUIRE(witt_mul(witt_mul(a, b), c) == witt_mul(a, witt_mul(b, c)));
      REQUIRE(witt_mul(a, witt_add(b, c)) == witt_add(witt_mul(a, b), witt_mul(a, c)));
      REQUIRE(witt_add(a, b) == witt_add(b, a));
      REQUIRE(witt_mul(a, b) == witt_mul(b, a));
    }
  }
}

TEST_CASE("small witt examples") {
  const Fq& F2 = Fq::get(2, 1);
  auto one = WittVector::one(F2, 3);
  CHECK(witt_add(one, one) == coords(F2, {0, 1, 0}));
  CHECK(witt_mul(coords(F2, {0, 1, 0}), coords(F2, {0, 1, 0})) == coords(F2, {0, 0, 1}));
  CHECK(witt_add(one, WittVector::zero(F2, 3)) == one);

  const Fq& F3 = Fq::get(3, 1);
  // [2] = -1 for odd p, so [1] + [2] = 0; and 1 + 2 = 3 = (0, 1)
  CHECK(witt_add(teichmuller(F3.from_raw(1), 2), teichmuller(F3.from_raw(2), 2)).is_zero());
  CHECK(witt_add(WittVector::one(F3, 2), WittVector::from_int(F3, 2, 2)) == coords(F3, {0, 1}));
}

TEST_CASE("teichmuller and frobenius") {
  std::mt19937_64 rng(9);
  const Fq& F = Fq::get(3, 3);
  for (int t = 0; t < 20; ++t) {
    FqElem x = F.random(rng), y = F.random(rng);
    CHECK(witt_mul(teichmuller(x, 4), teichmuller(y, 4)) == teichmuller(x * y, 4));
    CHECK(frobenius_sigma(teichmuller(x, 4)) == teichmuller(x.frobenius(), 4));
  }
  CHECK(teichmuller(F.zero(), 3).is_zero());
  CHECK(teichmuller(F.one(), 3) == WittVector::one(F, 3));
  for (int t = 0; t < 50; ++t) {
    auto a = random_witt(F, 4, rng), b = random_witt(F, 4, rng);
    auto s = a;
    for (unsigned i = 0; i < F.r(); ++i) s = frobenius_sigma(s);
    CHECK(s == a);
    CHECK(frobenius_sigma(witt_add(a, b)) == witt_add(frobenius_sigma(a), frobenius_sigma(b)));
    CHECK(frobenius_sigma(witt_mul(a, b)) == witt_mul(frobenius_sigma(a), frobenius_sigma(b)));
    CHECK(times_p(a) == witt_mul(WittVector::from_int(F, 4, 3), a));
    // the Galois-ring Frobenius agrees with coordinatewise p-th powers
    auto R = a.ring();
    CHECK(WittVector::from_ring(R, R.frobenius(a.to_ring())) == frobenius_sigma(a));
  }
}

TEST_CASE("truncation is a ring map") {
  std::mt19937_64 rng(2);
  const Fq& F = Fq::get(5, 2);
  for (int t = 0; t < 50; ++t) {
    auto a = random_witt(F, 5, rng), b = random_witt(F, 5, rng);
    CHECK(witt_add(a, b).truncate(3) == witt_add(a.truncate(3), b.truncate(3)));
    CHECK(witt_mul(a, b).truncate(2) == witt_mul(a.truncate(2), b.truncate(2)));
  }
}

TEST_CASE("det components") {
  std::mt19937_64 rng(4);
  const Fq& F = Fq::get(3, 2);
  WittMatrix I = {{WittVector::one(F, 3), WittVector::zero(F, 3)}, {WittVector::zero(F, 3), WittVector::one(F, 3)}};
  auto d = det_components(I);
  CHECK(d[0] == F.one());
  CHECK(d[1].is_zero());
  auto p = WittVector::from_int(F, 3, 3);
  WittMatrix P = {{p, WittVector::zero(F, 3)}, {WittVector::zero(F, 3), p}};
  auto dp = det_components(P);
  CHECK(dp[0].is_zero());
  CHECK(dp[1].is_zero());
  CHECK(dp[2] == F.one());
  FqElem x = F.random(rng), y = F.random(rng);
  WittMatrix D = {{teichmuller(x, 3), WittVector::zero(F, 3)}, {WittVector::zero(F, 3), teichmuller(y, 3)}};
  CHECK(det_components(D) == teichmuller(x * y, 3).coords());
  WittMatrix bad = {{p, p}};
  CHECK_THROWS_AS(det_components(bad), std::invalid_argument);
}

TEST_CASE("det by elimination agrees with cofactor expansion") {
  std::mt19937_64 rng(21);
  auto R = CoefficientRing::mixed(2, 2, 4);
  for (int t = 0; t < 200; ++t) {
    RingMatrix A(4, 4);
    for (auto& x : A.a) x = (rng() % 3 == 0) ? R.shift_up(R.random(rng), unsigned(rng() % 3)) : R.random(rng);
    RingMatrix adj = mat_adj(R, A);
    RingMatrix prod = mat_mul(R, adj, A);
    RingElem d = mat_det(R, A);
    for (unsigned i = 0; i < 4; ++i)
      for (unsigned j = 0; j < 4; ++j) CHECK(prod(i, j) == (i == j ? d : R.zero()));
  }
}

TEST_CASE("padic windows track precision") {
  const Fq& F = Fq::get(3, 1);
  auto a = PadicWindow::uniformizer_power(F, 3, -1);
  auto b = PadicWindow::from_int(F, 3, 1);
  auto s = a + b;
  CHECK(s.offset() == -1);
  CHECK(s.precision() == 2);
  auto prod = a * PadicWindow::uniformizer_power(F, 3, 1);
  CHECK(prod.equals(PadicWindow::from_int(F, 3, 1)));
  CHECK((a * a.inverse()).equals(b));
  auto z = PadicWindow::from_int(F, 2, 0);
  CHECK_THROWS_AS(z.inverse(), PrecisionError);
  CHECK_THROWS_AS(z.valuation(), PrecisionError);
  CHECK_THROWS_AS(s.digit(2), PrecisionError);
  // 0 * p^{-3} only knows digits below the zero body's precision minus 3
  auto u = PadicWindow(0, WittVector::zero(F, 2)) * PadicWindow::uniformizer_power(F, 1, -3);
  CHECK(u.precision() == -1);
  CHECK_THROWS_AS(u.digit(-1), PrecisionError);
  CHECK(u.digit(-2).is_zero());
}

TEST_CASE("famous identity") {
  CHECK(verify_famous_identity(2, 4));
  CHECK(verify_famous_identity(3, 3));
  CHECK(verify_famous_identity(5, 5));
  CHECK_THROWS(verify_famous_identity(2, 1));
}

TEST_CASE("witt string round trip") {
  std::mt19937_64 rng(1);
  for (auto [p, r] : {std::pair{5u, 1u}, {3u, 2u}}) {
    const Fq& F = Fq::get(p, r);
    auto a = random_witt(F, 4, rng);
    CHECK(witt_from_strings(F, witt_to_strings(a)) == a);
  }
  CHECK_THROWS(witt_from_strings(Fq::get(3, 1), {"7"}));
}
