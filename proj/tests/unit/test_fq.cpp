#include <random>

#include "agr/fq.hpp"
#include "doctest.h"

using namespace agr;

TEST_CASE("finite field axioms on samples") {
  std::mt19937_64 rng(7);
  for (auto [p, r] : {std::pair{2u, 1u}, {2u, 3u}, {3u, 2u}, {5u, 1u}, {5u, 3u}, {2u, 6u}, {3u, 4u}}) {
    const Fq& F = Fq::get(p, r);
    CHECK(F.q() == [&] { std::uint32_t q = 1; for (unsigned i = 0; i < r; ++i) q *= p; return q; }());
    for (int t = 0; t < 200; ++t) {
      FqElem a = F.random(rng), b = F.random(rng), c = F.random(rng);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == F.zero());
      CHECK(a.pow(F.q()) == a);
      if (!a.is_zero()) CHECK(a * a.inverse() == F.one());
      CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
    }
  }
}

TEST_CASE("field addition is coordinatewise mod p") {
  const Fq& F = Fq::get(3, 2);
  std::uint32_t a[] = {2, 1}, b[] = {2, 2}, s[] = {1, 0};
  CHECK(F.from_coords(a) + F.from_coords(b) == F.from_coords(s));
}

TEST_CASE("interned fields and generator order") {
  CHECK(&Fq::get(5, 2) == &Fq::get(5, 2));
  const Fq& F = Fq::get(5, 2);
  FqElem g = F.generator();
  for (std::uint32_t k = 1; k < F.q() - 1; ++k) CHECK(g.pow(k) != F.one());
  CHECK_THROWS(Fq::get(4, 1));
}
