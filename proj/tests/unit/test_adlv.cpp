#include <cmath>
#include <functional>
#include <random>

#include "agr/adlv.hpp"
#include "agr/lattice.hpp"
#include "doctest.h"

using namespace agr;

namespace {

NewtonPoint slopes(std::initializer_list<Rational> s) { return NewtonPoint(s); }

// g^{-1} B σ(g) for g with unit determinant.
RingMatrix sigma_conjugate(const CoefficientRing& R, const RingMatrix& B, const RingMatrix& g) {
  const RingElem inv_det = R.unit_inverse(mat_det(R, g));
  const RingMatrix g_inv = mat_scale(R, inv_det, mat_adj(R, g));
  return mat_mul(R, mat_mul(R, g_inv, B), mat_frobenius(R, g));
}

RingMatrix random_gl(const CoefficientRing& R, unsigned n, std::mt19937_64& rng) {
  for (;;) {
    RingMatrix g(n, n);
    for (auto& x : g.a) x = R.random(rng);
    if (R.is_unit(mat_det(R, g))) return g;
  }
}

// Σ over λ_i ≼ μ_i of the fiber counts of Gr_{λ•} over ϖ^λ.
std::int64_t closed_fiber(const std::vector<Coweight>& mu_seq, const Coweight& lambda, std::uint64_t q) {
  std::int64_t total_count = 0;
  std::vector<Coweight> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == mu_seq.size()) {
      total_count += convolution_fiber_count(cur, lambda, q);
      return;
    }
    for (const auto& l : dominant_below(mu_seq[i])) {
      cur.push_back(l);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return total_count;
}

}  // namespace

TEST_CASE("Newton points") {
  for (std::uint32_t p : {2u, 3u}) {
    CHECK(newton_point(SigmaClass::diagonal(p, {1, 0})) == slopes({1, 0}));
    CHECK(newton_point(SigmaClass::identity(3, p)) == slopes({0, 0, 0}));
    CHECK(newton_point(SigmaClass::superbasic(2, p, 1)) == slopes({Rational(1, 2), Rational(1, 2)}));
    CHECK(newton_point(SigmaClass::superbasic(3, p, 2)) ==
          slopes({Rational(2, 3), Rational(2, 3), Rational(2, 3)}));
    CHECK(newton_point(SigmaClass::superbasic(3, p, -1)) ==
          slopes({Rational(-1, 3), Rational(-1, 3), Rational(-1, 3)}));
    CHECK(newton_point(SigmaClass::diagonal(p, {2, 0, -1})) == slopes({2, 0, -1}));
    CHECK(newton_point(SigmaClass::superbasic(2, p, 1).central_twist(1)) ==
          slopes({Rational(3, 2), Rational(3, 2)}));
  }
  // stable under enlarging r
  for (const auto& b : {SigmaClass::superbasic(2, 3, 1), SigmaClass::superbasic(3, 2, 1), SigmaClass::diagonal(2, {1, 0}),
                        SigmaClass::parse("diag:2,1", 2, 5)})
    for (unsigned r = 2; r <= 3; ++r) CHECK(newton_point(b, r) == newton_point(b, 1));
}

TEST_CASE("Newton point of a non-diagonalizable b") {
  // [[p, 1], [0, 1]] has eigenvalues p and 1
  SigmaClass b = SigmaClass::identity(2, 3);
  b.entries = {3, 1, 0, 1};
  CHECK(newton_point(b) == slopes({1, 0}));
  // [[0, p^2], [1, 0]] has slopes (1, 1)
  b.entries = {0, 9, 1, 0};
  CHECK(newton_point(b) == slopes({1, 1}));
  CHECK(defect(newton_point(b)) == 0);
}

TEST_CASE("Newton point is a σ-conjugacy invariant") {
  std::mt19937_64 rng(20240611);
  for (std::uint32_t p : {2u, 3u}) {
    const auto R = CoefficientRing::mixed(p, 2, 14);
    for (const auto& b : {SigmaClass::superbasic(2, p, 1), SigmaClass::diagonal(p, {1, 0}), SigmaClass::identity(2, p),
                          SigmaClass::superbasic(3, p, 1), SigmaClass::diagonal(p, {2, 1, 0})}) {
      const NewtonPoint nu = newton_point(b);
      Rational sum = 0;
      for (const auto& s : nu) sum += s;
      CHECK(sum == b.kottwitz_index());
      const RingMatrix B = b.matrix(R);
      for (int t = 0; t < 20; ++t) {
        const RingMatrix Bg = sigma_conjugate(R, B, random_gl(R, b.n, rng));
        CHECK(newton_point(R, Bg, b.scale, 2) == nu);
        CHECK(newton_point(R, Bg, b.scale, 4) == nu);
      }
    }
  }
}

TEST_CASE("defect") {
  CHECK(defect(slopes({1, 0})) == 0);
  CHECK(defect(slopes({0, 0, 0})) == 0);
  CHECK(defect(slopes({Rational(1, 2), Rational(1, 2)})) == 1);
  CHECK(defect(slopes({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)})) == 2);
  CHECK(defect(slopes({Rational(2, 3), Rational(2, 3), Rational(2, 3)})) == 2);
  CHECK(defect(slopes({1, Rational(1, 2), Rational(1, 2)})) == 1);
  // block-diagonal with two superbasic blocks of slope 1/2
  SigmaClass b = SigmaClass::identity(4, 2);
  b.entries = {0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 2, 0, 0, 1, 0};
  const auto nu = newton_point(b);
  CHECK(nu == slopes({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  CHECK(defect(nu) == 2);
}

TEST_CASE("Mazur admissibility and the Rapoport formula") {
  const std::uint32_t p = 3;
  const auto sb = SigmaClass::superbasic(2, p, 1);
  CHECK(mazur_admissible({1, 0}, sb));
  CHECK_FALSE(mazur_admissible({1, 1}, sb));
  CHECK_FALSE(mazur_admissible({2, 0}, SigmaClass::identity(2, p)));
  CHECK(mazur_admissible({1, 0}, SigmaClass::diagonal(p, {1, 0})));
  CHECK_FALSE(mazur_admissible({2, -1}, SigmaClass::diagonal(p, {3, -2})));

  CHECK(rapoport_dimension({1, 0}, sb) == 0);
  CHECK(rapoport_dimension({1, -1}, SigmaClass::identity(2, p)) == 1);
  CHECK(rapoport_dimension({1, 0}, SigmaClass::diagonal(p, {1, 0})) == 0);
  CHECK(rapoport_dimension({3, 0}, sb.central_twist(1)) == 1);
  CHECK(rapoport_dimension({2, 1, 0}, SigmaClass::identity(3, p).central_twist(1)) == 2);
  CHECK(rapoport_dimension({1, 0, 0}, SigmaClass::superbasic(3, p, 1)) == 0);
  CHECK_THROWS_AS(rapoport_dimension({2, 0}, sb), std::invalid_argument);

  CHECK(sb.with_index(3)->kottwitz_index() == 3);
  CHECK_FALSE(sb.with_index(2).has_value());
  CHECK(SigmaClass::parse("diag:1,0", 2, p).kottwitz_index() == 1);
  CHECK_THROWS_AS(SigmaClass::parse("bogus", 2, p), std::invalid_argument);
}

TEST_CASE("point counts") {
  for (std::uint32_t p : {2u, 3u}) {
    // μ = 0, b = Id: only σ-stable lattices, i.e. the F_p-rational points of the window
    CHECK(count_points({0, 0}, SigmaClass::identity(2, p), 1, {0, 0}) == 1);
    for (int radius = 1; radius <= 2; ++radius)
      for (unsigned r = 1; r <= 2; ++r)
        CHECK(count_points({0, 0}, SigmaClass::identity(2, p), r, {radius, 0}) == count_leq({radius, -radius}, p));
    const auto sb = SigmaClass::superbasic(2, p, 1);
    for (unsigned r = 1; r <= 3; ++r) {
      CHECK(count_points({1, 0}, sb, r, {1, 0}) == 1);
      // the dimension-one stratum is a projective line
      CHECK(count_points({2, -1}, sb, r, {1, 0}) == std::int64_t(std::pow(p, r)) + 1);
      // the window exhausts X ∩ {κ = 0}
      CHECK(count_points({2, -1}, sb, r, {2, 0}) == count_points({2, -1}, sb, r, {1, 0}));
    }
    // equals-mode counts partition the leq count
    const auto id = SigmaClass::identity(2, p);
    const auto hist = count_by_type(id, 2, {1, 0});
    std::int64_t s = 0;
    for (const auto& lambda : dominant_below({1, -1})) {
      const auto k = count_points(lambda, id, 2, {1, 0}, CountMode::equals);
      CHECK(k == (hist.count(lambda) ? hist.at(lambda) : 0));
      s += k;
    }
    CHECK(s == count_points({1, -1}, id, 2, {1, 0}));
  }
  // mixed and equal characteristic agree
  for (const auto& b : {SigmaClass::identity(2, 2), SigmaClass::diagonal(2, {1, 0}), SigmaClass::superbasic(2, 2, 1)})
    for (unsigned r = 1; r <= 2; ++r)
      CHECK(count_by_type(b, r, {1, 0}, RingKind::mixed) == count_by_type(b, r, {1, 0}, RingKind::equal));
}

TEST_CASE("dimension estimates") {
  CHECK(estimate_dimension({{1, 5}, {2, 5}, {3, 5}}, 3).dimension == 0);
  CHECK(estimate_dimension({{1, 5}, {2, 5}, {3, 5}}, 3).reliable);
  const auto e = estimate_dimension({{1, 2}, {2, 4}, {3, 8}, {4, 16}}, 2);
  CHECK(e.dimension == 1);
  CHECK(e.residual < 1e-9);
  CHECK_FALSE(estimate_dimension({{1, 0}, {2, 3}}, 2).reliable);
  CHECK_FALSE(estimate_dimension({{1, 3}}, 2).reliable);
  CHECK_FALSE(estimate_dimension({{1, 1}, {2, 100}, {3, 2}}, 2).reliable);
  // superbasic μ = (3, 0): fitted growth matches the formula
  const auto b = SigmaClass::superbasic(2, 2, 1).central_twist(1);
  std::vector<std::pair<unsigned, std::int64_t>> counts;
  for (unsigned r = 1; r <= 4; ++r) counts.push_back({r, count_points({3, 0}, b, r, {1, 0})});
  const auto f = estimate_dimension(counts, 2);
  CHECK(f.reliable);
  CHECK(f.dimension == rapoport_dimension({3, 0}, b));
}

TEST_CASE("convolution counts") {
  const std::uint32_t p = 2;
  const auto id = SigmaClass::identity(2, p);
  CHECK(convolution_count({}, id, 1, {0, 0}) == 1);
  for (const auto& mu : std::vector<Coweight>{{0, 0}, {1, -1}})
    CHECK(convolution_count({mu}, id, 2, {1, 0}) == count_points(mu, id, 2, {1, 0}));
  CHECK(convolution_count({{2, -1}}, SigmaClass::superbasic(2, p, 1), 2, {1, 0}) ==
        count_points({2, -1}, SigmaClass::superbasic(2, p, 1), 2, {1, 0}));

  // |X_{≤μ•}(b)| = Σ_λ |X_λ(b)| · |fiber over ϖ^λ|
  struct Case {
    std::vector<Coweight> mu_seq;
    SigmaClass b;
  };
  const std::vector<Case> cases{{{{1, 0}, {0, -1}}, id},
                                {{{1, 0}, {1, 0}}, id.central_twist(1)},
                                {{{1, 0}, {1, 0}, {1, 0}}, SigmaClass::superbasic(2, p, 1).central_twist(1)},
                                {{{1, -1}, {1, 0}}, SigmaClass::diagonal(p, {1, 0})}};
  for (const auto& c : cases)
    for (unsigned r = 1; r <= 2; ++r) {
      const std::uint64_t q = std::uint64_t(std::pow(p, r));
      std::int64_t expect = 0;
      for (const auto& [lambda, k] : count_by_type(c.b, r, {1, 0})) expect += k * closed_fiber(c.mu_seq, lambda, q);
      CHECK(convolution_count(c.mu_seq, c.b, r, {1, 0}) == expect);
    }
}

TEST_CASE("norm reduction") {
  const std::uint32_t p = 3;
  // d = 1 is the identity reduction
  const auto sb = SigmaClass::superbasic(2, p, 1);
  auto one = norm_reduce({sb}, {{2, -1}}, 1, {1, 0});
  CHECK(one.pass());
  CHECK(one.lhs == count_points({2, -1}, sb, 1, {1, 0}));

  // GL_1, d = 2: one lattice per index, present iff the Kottwitz indices match
  for (int a = 0; a <= 2; ++a)
    for (int m0 = -1; m0 <= 2; ++m0)
      for (int index = -1; index <= 1; ++index) {
        const auto b0 = SigmaClass::diagonal(p, {a}), b1 = SigmaClass::diagonal(p, {1});
        const auto red = norm_reduce({b0, b1}, {{m0}, {1}}, 1, {1, index});
        CHECK(red.pass());
        CHECK(red.lhs == (a + 1 == m0 + 1 ? 1 : 0));
      }

  // GL_2, d = 2
  struct Case {
    SigmaClass b0, b1;
    Coweight mu0, mu1;
  };
  const auto id = SigmaClass::identity(2, p);
  const std::vector<Case> cases{{id, id, {1, -1}, {0, 0}},
                                {id, sb, {1, 0}, {0, 0}},
                                {id, sb, {1, 0}, {1, -1}},
                                {sb, sb, {1, 0}, {1, 0}},
                                {SigmaClass::diagonal(p, {1, 0}), id, {1, 0}, {1, -1}}};
  std::int64_t nonzero = 0;
  for (const auto& c : cases)
    for (unsigned r = 1; r <= 2; ++r) {
      const auto red = norm_reduce({c.b0, c.b1}, {c.mu0, c.mu1}, r, {1, 0});
      CHECK(red.pass());
      nonzero += red.lhs > 0;
    }
  CHECK(nonzero >= 8);
}
