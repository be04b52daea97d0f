#include <random>

#include "agr/coefficient_ring.hpp"
#include "doctest.h"

using namespace agr;

namespace {

void ring_axioms(const CoefficientRing& R, std::mt19937_64& rng, int trials) {
  for (int t = 0; t < trials; ++t) {
    RingElem a = R.random(rng), b = R.random(rng), c = R.random(rng);
    REQUIRE(R.add(a, b) == R.add(b, a));
    REQUIRE(R.mul(a, b) == R.mul(b, a));
    REQUIRE(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
    REQUIRE(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
    REQUIRE(R.sub(R.add(a, b), b) == a);
    REQUIRE(R.mul(a, R.one()) == a);
    if (R.is_unit(a)) REQUIRE(R.mul(a, R.unit_inverse(a)) == R.one());
    REQUIRE(R.frobenius(R.mul(a, b)) == R.mul(R.frobenius(a), R.frobenius(b)));
    REQUIRE(R.frobenius(R.add(a, b)) == R.add(R.frobenius(a), R.frobenius(b)));
    REQUIRE(R.frobenius_pow(a, R.r()) == a);
    REQUIRE(R.from_witt_coordinates(R.witt_coordinates(a)) == a);
    unsigned v = R.valuation(a);
    if (v < R.h()) REQUIRE(R.is_unit(R.shift_down(a, v)));
    auto [rep, quot] = R.reduce(a, 2);
    REQUIRE(R.add(rep, R.shift_up(quot, 2)) == a);
  }
}

}  // namespace

TEST_CASE("coefficient rings satisfy ring axioms") {
  std::mt19937_64 rng(11);
  for (RingKind k : {RingKind::mixed, RingKind::equal})
    for (auto [p, r, h] : {std::tuple{2u, 1u, 4u}, {2u, 3u, 3u}, {3u, 2u, 3u}, {5u, 2u, 2u}, {3u, 1u, 5u}})
      ring_axioms(CoefficientRing::make(k, p, r, h), rng, 100);
}

TEST_CASE("teichmuller lifts are multiplicative and frobenius-equivariant") {
  std::mt19937_64 rng(3);
  auto R = CoefficientRing::mixed(3, 3, 4);
  for (int t = 0; t < 50; ++t) {
    FqElem x = R.field().random(rng), y = R.field().random(rng);
    CHECK(R.mul(R.teichmuller(x), R.teichmuller(y)) == R.teichmuller(x * y));
    CHECK(R.frobenius(R.teichmuller(x)) == R.teichmuller(x.frobenius()));
    auto w = R.witt_coordinates(R.teichmuller(x));
    CHECK(w[0] == x);
    for (unsigned i = 1; i < w.size(); ++i) CHECK(w[i].is_zero());
  }
}

TEST_CASE("mixed ring over F_p is Z/p^h") {
  auto R = CoefficientRing::mixed(2, 1, 3);
  CHECK(R.add(R.one(), R.one()) == R.from_int(2));
  CHECK(R.valuation(R.from_int(4)) == 2);
  CHECK(R.valuation(R.zero()) == 3);
  CHECK(R.residue_count(2) == 4);
  CHECK_THROWS_AS(R.unit_inverse(R.from_int(2)), std::domain_error);
}
