#include <random>

#include "agr/lattice.hpp"
#include "agr/polynomial.hpp"
#include "doctest.h"

using namespace agr;

namespace {

// |Gr_μ(F_q)| = q^{(2ρ,μ)} W(q^{-1}) / W_μ(q^{-1}) with W(t) the Poincaré
// polynomial of S_n and W_μ that of the stabilizer of μ.
Rational macdonald_cell(const Coweight& mu, std::int64_t q) {
  auto factorial_t = [&](unsigned m) {
    Rational t = Rational(1) / q, acc = 1;
    for (unsigned i = 1; i <= m; ++i) {
      Rational num = 0, tp = 1;
      for (unsigned k = 0; k < i; ++k) {
        num += tp;
        tp *= t;
      }
      acc *= num;
    }
    return acc;
  };
  Rational val = factorial_t(unsigned(mu.size()));
  for (std::size_t i = 0; i < mu.size();) {
    std::size_t j = i;
    while (j < mu.size() && mu[j] == mu[i]) ++j;
    val /= factorial_t(unsigned(j - i));
    i = j;
  }
  for (int k = 0; k < pairing_2rho(mu); ++k) val *= q;
  return val;
}

RingMatrix mat2(const CoefficientRing& R, RingElem a, RingElem b, RingElem c, RingElem d) {
  RingMatrix M(2, 2);
  M(0, 0) = a;
  M(0, 1) = b;
  M(1, 0) = c;
  M(1, 1) = d;
  return M;
}

}  // namespace

TEST_CASE("relative position basics") {
  auto R = CoefficientRing::mixed(3, 1, 6);
  auto L0 = Lattice::standard(R, 3);
  CHECK(relative_position(L0, L0) == Coweight{0, 0, 0});
  CHECK(relative_position(L0.scaled(1), L0) == Coweight{1, 1, 1});
  CHECK(relative_position(L0, L0.scaled(1)) == Coweight{-1, -1, -1});
  auto R2 = CoefficientRing::mixed(5, 1, 6);
  for (int x = 0; x < 25; ++x) {
    auto L = Lattice::from_generators(R2, 0, mat2(R2, R2.from_int(25), R2.from_int(x), R2.zero(), R2.one()));
    CHECK(relative_position(L, Lattice::standard(R2, 2)) == Coweight{2, 0});
  }
  // x a unit: Iwasawa type (2,0)
  auto L = Lattice::from_generators(R2, 0, mat2(R2, R2.from_int(25), R2.from_int(3), R2.zero(), R2.one()));
  CHECK(iwasawa_type(L) == Coweight{2, 0});
  CHECK(kottwitz_index(L) == 2);
  CHECK(iwasawa_type(Lattice::torus_point(R2, {1, -2})) == Coweight{1, -2});
  CHECK(kottwitz_index(Lattice::torus_point(R2, {1, -2})) == -1);
}

TEST_CASE("relative position is anti-symmetric up to -w0") {
  std::mt19937_64 rng(8);
  for (RingKind kind : {RingKind::mixed, RingKind::equal}) {
    auto R = CoefficientRing::make(kind, 2, 2, 10);
    for (int t = 0; t < 200; ++t) {
      RingMatrix G1(3, 3), G2(3, 3);
      for (auto* G : {&G1, &G2})
        for (auto& x : G->a) x = R.shift_up(R.random(rng), unsigned(rng() % 2));
      for (unsigned i = 0; i < 3; ++i) {
        G1(i, i) = R.add(G1(i, i), R.uniformizer_power(unsigned(rng() % 2)));
        G2(i, i) = R.add(G2(i, i), R.uniformizer_power(unsigned(rng() % 2)));
      }
      try {
        auto L1 = Lattice::from_generators(R, int(rng() % 3) - 1, G1);
        auto L2 = Lattice::from_generators(R, int(rng() % 3) - 1, G2);
        auto inv = relative_position(L1, L2);
        CHECK(is_dominant(inv));
        CHECK(relative_position(L2, L1) == dual(inv));
        CHECK(total(inv) == kottwitz_index(L1) - kottwitz_index(L2));
        // canonical form is independent of the generating set
        RingMatrix G = G1;
        for (unsigned i = 0; i < 3; ++i) G(i, 0) = R.add(G(i, 0), R.mul(G1(i, 2), R.from_int(3)));
        CHECK(Lattice::from_generators(R, L1.scale(), G) == L1);
      } catch (const PrecisionError&) {
      }
    }
  }
}

TEST_CASE("schubert cells of GL2") {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const std::int64_t Q = std::int64_t(q);
    CHECK(count_leq({0, 0}, q) == 1);
    CHECK(count_leq({1, 0}, q) == Q + 1);
    CHECK(count_leq({2, 0}, q) == Q * Q + Q + 1);
    CHECK(count_cell({2, 0}, q) == Q * Q + Q);
    CHECK(count_mv({1, 1}, {2, 0}, q) == Q - 1);
    CHECK(count_mv({2, 0}, {2, 0}, q) == Q * Q);
    CHECK(count_mv({0, 2}, {2, 0}, q) == 1);
    CHECK(count_mv({1, 0}, {2, 0}, q) == 0);
    auto t = mv_table({1, 0}, q);
    CHECK(t.mv[{1, 0}] == Q);
    CHECK(t.mv[{0, 1}] == 1);
  }
}

TEST_CASE("cell counts match the Macdonald formula") {
  for (const Coweight& mu : {Coweight{2, 1, 0}, {3, 0, 0}, {2, 2, 0}, {1, 0, -1}, {3, 1, 0}})
    for (std::uint64_t q : {2, 3}) CHECK(Rational(count_cell(mu, q)) == macdonald_cell(mu, std::int64_t(q)));
  for (const Coweight& mu : {Coweight{4, 0}, {3, 1}, {1, 0, 0, 0}, {1, 1, 0, 0}})
    for (std::uint64_t q : {2, 5}) CHECK(Rational(count_cell(mu, q)) == macdonald_cell(mu, std::int64_t(q)));
}

TEST_CASE("cartan decomposition of the window") {
  // every window lattice lies in exactly one cell, and the cells exhaust it
  const Coweight mu{3, 1, 0};
  auto t = mv_table(mu, 2);
  std::int64_t sum = 0;
  for (auto& [lam, c] : t.cells) {
    CHECK(dominance_leq(lam, mu));
    CHECK(Rational(c) == macdonald_cell(lam, 2));
    sum += c;
  }
  std::int64_t mvsum = 0;
  for (auto& [lam, c] : t.mv_leq) mvsum += c;
  CHECK(sum == mvsum);
}

TEST_CASE("mixed and equal characteristic agree") {
  for (const Coweight& mu : {Coweight{2, 0}, {2, 1, 0}, {3, 0}})
    for (std::uint64_t q : {2, 3, 4}) {
      auto a = mv_table(mu, q, RingKind::mixed), b = mv_table(mu, q, RingKind::equal);
      CHECK(a.cells == b.cells);
      CHECK(a.mv_leq == b.mv_leq);
      CHECK(a.mv == b.mv);
    }
}

TEST_CASE("chains and convolution fibers") {
  for (std::uint64_t q : {2, 3}) {
    const std::int64_t Q = std::int64_t(q);
    CHECK(count_chains({}, 2, q) == 1);
    CHECK(count_chains({{1, 0}}, 2, q) == Q + 1);
    CHECK(count_chains({{1, 0}, {1, 0}}, 2, q) == (Q + 1) * (Q + 1));
    CHECK(count_chains({{1, 0, 0}, {1, 0, 0}}, 3, q) == (1 + Q + Q * Q) * (1 + Q + Q * Q));
    CHECK(convolution_fiber_count({{1, 0}, {1, 0}}, {1, 1}, q) == Q + 1);
    CHECK(convolution_fiber_count({{1, 0}, {1, 0}}, {2, 0}, q) == 1);
    CHECK(convolution_fiber_count({{1, 0}, {1, 0}}, {1, 0}, q) == 0);
    CHECK(convolution_fiber_count({{1, -1}, {1, -1}}, {2, -2}, q) == 1);
    CHECK(count_chains({{1, -1}, {1, 0}}, 2, q) == (Q * Q + Q) * (Q + 1));
  }
}

TEST_CASE("window precision is enforced") {
  auto R = CoefficientRing::mixed(2, 1, 3);
  CHECK_THROWS_AS(for_each_window_lattice(R, Window{2, 0, 4, 4}, [](const Lattice&) {}), PrecisionError);
  CHECK_THROWS(prime_power(6));
  CHECK(prime_power(9) == std::pair<std::uint32_t, unsigned>{3, 2});
}
