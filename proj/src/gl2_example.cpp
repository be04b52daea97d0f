#include "agr/gl2_example.hpp"

#include <functional>
#include <random>
#include <stdexcept>

#include "agr/lattice.hpp"
#include "agr/parallel.hpp"
#include "agr/witt.hpp"

namespace agr {

namespace {

using Digits = std::array<std::vector<FqElem>, 4>;  // a, b, c, d

Digits matrix_digits(const CoefficientRing& R, const RingMatrix& X) {
  if (X.rows != 2 || X.cols != 2) throw std::invalid_argument("expected a 2x2 matrix");
  return {teichmuller_digits(R, X(0, 0)), teichmuller_digits(R, X(0, 1)), teichmuller_digits(R, X(1, 0)),
          teichmuller_digits(R, X(1, 1))};
}

void require_odd(const CoefficientRing& R) {
  if (R.p() == 2) throw std::invalid_argument("the chart computations need p odd, so that [-1] = -1");
}

void require_w3(const CoefficientRing& R) {
  if (R.kind() != RingKind::mixed || R.h() != 3) throw std::invalid_argument("expected the ring W_3(F_q)");
}

RingMatrix random_matrix(const CoefficientRing& R, std::mt19937_64& rng) {
  RingMatrix g(2, 2);
  for (auto& x : g.a) x = R.random(rng);
  return g;
}

RingMatrix random_gl2(const CoefficientRing& R, std::mt19937_64& rng) {
  for (;;) {
    RingMatrix g = random_matrix(R, rng);
    if (R.is_unit(mat_det(R, g))) return g;
  }
}

ChartPoint random_chart_point(const Fq& F, std::mt19937_64& rng) {
  const FqElem x = F.random(rng), y = F.random(rng);
  if (!y.is_zero()) return {x, y, x * x * y.inverse()};
  return {F.zero(), F.zero(), F.random(rng)};
}

// A random point of V_{2,3}: X_0 of rank <= 1, X_1 on the degree-one equation,
// and X_2 with a nonzero p^2-digit of the determinant.
RingMatrix random_v23(const CoefficientRing& R, std::mt19937_64& rng) {
  for (;;) {
    RingMatrix X = random_matrix(R, rng);
    if (R.valuation(mat_det(R, X)) == 2) return X;
    // force a singular residue, which raises the hit rate
    const FqElem u = R.field().random(rng), v = R.field().random(rng);
    const FqElem s = R.field().random(rng), t = R.field().random(rng);
    RingMatrix Y = X;
    Y(0, 0) = R.add(R.teichmuller(u * s), R.shift_up(R.random(rng), 1));
    Y(0, 1) = R.add(R.teichmuller(u * t), R.shift_up(R.random(rng), 1));
    Y(1, 0) = R.add(R.teichmuller(v * s), R.shift_up(R.random(rng), 1));
    Y(1, 1) = R.add(R.teichmuller(v * t), R.shift_up(R.random(rng), 1));
    if (R.valuation(mat_det(R, Y)) == 2) return Y;
  }
}

}  // namespace

CoefficientRing w3_ring(std::uint64_t q) {
  auto [p, r] = prime_power(q);
  return CoefficientRing::mixed(p, r, 3);
}

std::vector<FqElem> teichmuller_digits(const CoefficientRing& R, const RingElem& a) {
  std::vector<FqElem> d;
  RingElem cur = a;
  for (unsigned i = 0; i < R.h(); ++i) {
    d.push_back(R.residue(cur));
    if (i + 1 < R.h()) cur = R.shift_down(R.sub(cur, R.teichmuller(d.back())), 1);
  }
  return d;
}

RingElem from_teichmuller_digits(const CoefficientRing& R, const std::vector<FqElem>& d) {
  RingElem a = R.zero();
  for (unsigned i = 0; i < d.size(); ++i) {
    if (i >= R.h()) {
      if (!d[i].is_zero()) throw PrecisionError("digit beyond ring precision");
      continue;
    }
    a = R.add(a, R.shift_up(R.teichmuller(d[i]), i));
  }
  return a;
}

RingMatrix change_precision(const CoefficientRing& from, const CoefficientRing& to, const RingMatrix& X) {
  RingMatrix Y(X.rows, X.cols);
  for (std::size_t k = 0; k < X.a.size(); ++k) {
    auto d = teichmuller_digits(from, X.a[k]);
    if (d.size() > to.h()) d.resize(to.h());
    Y.a[k] = from_teichmuller_digits(to, d);
  }
  return Y;
}

RingMatrix chart_matrix(const CoefficientRing& R, const ChartPoint& c) {
  if (!(c.x * c.x == c.y * c.z)) throw std::invalid_argument("chart point off the cone x^2 = yz");
  const RingElem p = R.uniformizer_power(1);
  RingMatrix A(2, 2);
  A(0, 0) = R.add(p, R.teichmuller(c.x));
  A(0, 1) = R.neg(R.teichmuller(c.y));
  A(1, 0) = R.teichmuller(c.z);
  A(1, 1) = R.sub(p, R.teichmuller(c.x));
  return A;
}

bool v23_membership(const CoefficientRing& R, const RingMatrix& X) {
  require_w3(R);
  const auto D = matrix_digits(R, X);
  const auto &a = D[0], &b = D[1], &c = D[2], &d = D[3];
  if (!(a[0] * d[0] == b[0] * c[0])) return false;
  // X_1 X_0^* + X_0 X_1^* is the scalar a_1 d_0 - b_1 c_0 + a_0 d_1 - b_0 c_1
  if (!(a[1] * d[0] - b[1] * c[0] + a[0] * d[1] - b[0] * c[1]).is_zero()) return false;
  return !teichmuller_digits(R, mat_det(R, X))[2].is_zero();
}

std::optional<ChartPoint> solve_xyz(const CoefficientRing& R, const RingMatrix& X) {
  require_w3(R);
  require_odd(R);
  if (!v23_membership(R, X)) throw std::invalid_argument("solve_xyz: X is not in V_{2,3}");
  const auto D = matrix_digits(R, X);
  const FqElem a0 = D[0][0], b0 = D[1][0], c0 = D[2][0], d0 = D[3][0];
  const FqElem a1 = D[0][1], b1 = D[1][1], c1 = D[2][1], d1 = D[3][1];
  const FqElem den = b1 * c1 - a1 * d1;
  if (den.is_zero()) return std::nullopt;
  const FqElem s = den.inverse();
  // (1/den) X_1 X_0^*
  const FqElem m00 = s * (a1 * d0 - b1 * c0), m01 = s * (-a1 * b0 + b1 * a0);
  const FqElem m10 = s * (c1 * d0 - d1 * c0), m11 = s * (-c1 * b0 + d1 * a0);
  const ChartPoint pt{m00, -m01, m10};
  // both equations X_0^* N = 0 and X_1^* N = -X_0^* for N = [[x, -y], [z, -x]]
  const FqElem x = pt.x, y = pt.y, z = pt.z;
  const bool cone = x * x == y * z && m11 == -m00;
  const bool eq0 = (d0 * x - b0 * z).is_zero() && (-d0 * y + b0 * x).is_zero() && (-c0 * x + a0 * z).is_zero() &&
                   (c0 * y - a0 * x).is_zero();
  const bool eq1 = (d1 * x - b1 * z) == -d0 && (-d1 * y + b1 * x) == b0 && (-c1 * x + a1 * z) == c0 &&
                   (c1 * y - a1 * x) == -a0;
  if (!(cone && eq0 && eq1)) throw std::logic_error("solve_xyz: solution violates the chart equations");
  return pt;
}

FactorResult factor_check(const CoefficientRing& R, const RingMatrix& X) {
  const auto pt = solve_xyz(R, X);
  if (!pt) return FactorResult::skipped;
  const auto R5 = CoefficientRing::mixed(R.p(), R.r(), 5);
  const RingMatrix A = chart_matrix(R, *pt);
  // X = A g, so g = A^{-1} X = p^{-2} A^* X
  const RingMatrix P = mat_mul(R5, mat_adj(R5, change_precision(R, R5, A)), change_precision(R, R5, X));
  RingMatrix g5(2, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    if (R5.valuation(P.a[k]) < 2) return FactorResult::failed;
    g5.a[k] = R5.shift_down(P.a[k], 2);
  }
  // p^{-2} drops two digits, so g is known modulo p^3
  const RingMatrix g = change_precision(R5, R, g5);
  if (!R.is_unit(mat_det(R, g))) return FactorResult::failed;
  return mat_mul(R, A, g) == X ? FactorResult::ok : FactorResult::failed;
}

B3Report b3_suite(std::uint64_t q, std::uint64_t trials, std::uint64_t seed) {
  const auto R = w3_ring(q);
  require_odd(R);
  B3Report rep{q, trials, seed};
  struct Tally {
    std::int64_t membership = 0, solve = 0, factor = 0, orbit = 0, skipped = 0;
  };
  auto parts = parallel_map<Tally>(trials, [&](std::size_t t) {
    std::seed_seq ss{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(t), std::uint32_t(t >> 32)};
    std::mt19937_64 rng(ss);
    Tally k;
    auto membership_agrees = [&](const RingMatrix& X) {
      const auto dc = det_components(from_ring_matrix(R, X));
      const bool oracle = dc[0].is_zero() && dc[1].is_zero() && !dc[2].is_zero();
      if (v23_membership(R, X) != oracle) ++k.membership;
      return oracle;
    };
    // a point of the chart orbit
    const ChartPoint c = random_chart_point(R.field(), rng);
    const RingMatrix A = chart_matrix(R, c);
    const RingMatrix X = mat_mul(R, A, random_gl2(R, rng));
    if (!membership_agrees(X)) ++k.membership;
    membership_agrees(random_matrix(R, rng));
    RingMatrix D(2, 2);
    D(0, 0) = R.uniformizer_power(2);
    D(1, 1) = R.one();
    membership_agrees(mat_mul(R, D, random_gl2(R, rng)));
    const auto pt = solve_xyz(R, X);
    if (!pt) {
      ++k.skipped;
    } else {
      if (!(*pt == c)) ++k.solve;
      if (factor_check(R, X) != FactorResult::ok) ++k.factor;
      // the section is constant along the right orbit
      const RingMatrix Y = mat_mul(R, X, random_gl2(R, rng));
      const auto pt2 = solve_xyz(R, Y);
      if (pt2 && !(*pt2 == *pt)) ++k.orbit;
    }
    // the section on the chart itself
    if (solve_xyz(R, A) != std::optional<ChartPoint>(c)) ++k.solve;
    // a random point of V_{2,3}: the solution formula satisfies both equations
    const RingMatrix V = random_v23(R, rng);
    if (!membership_agrees(V)) ++k.membership;
    const auto r = factor_check(R, V);
    if (r == FactorResult::failed) ++k.factor;
    if (r == FactorResult::skipped) ++k.skipped;
    return k;
  });
  for (const auto& k : parts) {
    rep.membership_failures += k.membership;
    rep.solve_failures += k.solve;
    rep.factor_failures += k.factor;
    rep.orbit_failures += k.orbit;
    rep.skipped += k.skipped;
  }
  return rep;
}

std::int64_t gl2_w3_order(std::uint64_t q) {
  const auto Q = std::int64_t(q);
  std::int64_t q8 = 1;
  for (int i = 0; i < 8; ++i) q8 *= Q;
  return q8 * (Q * Q - 1) * (Q * Q - Q);
}

QuotientReport quotient_count_check(std::uint64_t q) {
  const auto R = w3_ring(q);
  const auto& F = R.field();
  QuotientReport rep;
  rep.q = q;
  rep.gr2 = count_leq({2, 0}, q);
  rep.gl2_w3 = gl2_w3_order(q);
  std::vector<FqElem> elems;
  for (std::uint32_t v = 0; v < F.q(); ++v) elems.push_back(F.from_raw(v));
  std::vector<std::array<RingElem, 4>> layer0, layer1;
  // all digit quadruples
  std::vector<std::array<FqElem, 4>> quads;
  for (const auto& a : elems)
    for (const auto& b : elems)
      for (const auto& c : elems)
        for (const auto& d : elems) quads.push_back({a, b, c, d});
  auto teich = [&](const std::array<FqElem, 4>& e, unsigned shift) {
    std::array<RingElem, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = R.shift_up(R.teichmuller(e[i]), shift);
    return out;
  };
  auto det = [&](const std::array<RingElem, 4>& m) { return R.sub(R.mul(m[0], m[3]), R.mul(m[1], m[2])); };
  auto sum = [&](const std::array<RingElem, 4>& m, const std::array<RingElem, 4>& n) {
    return std::array<RingElem, 4>{R.add(m[0], n[0]), R.add(m[1], n[1]), R.add(m[2], n[2]), R.add(m[3], n[3])};
  };
  // det ≡ 0 mod p, then mod p^2
  for (const auto& e : quads) {
    const auto m = teich(e, 0);
    if (R.valuation(det(m)) >= 1) layer0.push_back(m);
  }
  for (const auto& m0 : layer0)
    for (const auto& e : quads) {
      const auto m = sum(m0, teich(e, 1));
      if (R.valuation(det(m)) >= 2) layer1.push_back(m);
    }
  const std::vector<std::array<RingElem, 4>> tops = [&] {
    std::vector<std::array<RingElem, 4>> t;
    for (const auto& e : quads) t.push_back(teich(e, 2));
    return t;
  }();
  auto parts = parallel_map<std::pair<std::int64_t, std::int64_t>>(layer1.size(), [&](std::size_t i) {
    std::int64_t v = 0, j = 0;
    for (const auto& t : tops) {
      const auto m = sum(layer1[i], t);
      if (R.valuation(det(m)) != 2) continue;
      ++v;
      // |{γ : Xγ = X}| = |ker X|^2 with |ker X| = q^{Σ e_i} on (W_3)^2
      RingMatrix X(2, 2);
      for (int k = 0; k < 4; ++k) X.a[std::size_t(k)] = m[std::size_t(k)];
      unsigned e = 0;
      for (unsigned s : smith_valuations(R, X)) e += s;
      std::int64_t ker = 1;
      for (unsigned k = 0; k < e; ++k) ker *= std::int64_t(q);
      j += ker * ker;
    }
    return std::make_pair(v, j);
  });
  for (const auto& [v, j] : parts) {
    rep.v23 += v;
    rep.stabilizers += j;
  }
  return rep;
}

bool EqualCharReport::pass() const {
  for (const auto& [k, v] : cells)
    if (v.first != v.second) return false;
  return mixed_total == equal_total;
}

EqualCharReport equal_char_compare(std::uint64_t q) {
  EqualCharReport rep;
  rep.q = q;
  for (const auto& lambda : dominant_below({2, 0})) {
    const auto m = count_cell(lambda, q, RingKind::mixed), e = count_cell(lambda, q, RingKind::equal);
    rep.cells[lambda] = {m, e};
    rep.mixed_total += m;
    rep.equal_total += e;
  }
  return rep;
}

bool DemazureReport::pass() const {
  const auto Q = std::int64_t(q);
  if (chains != (1 + Q) * (1 + Q)) return false;
  for (const auto& [lambda, k] : fibers)
    if (k != (lambda == Coweight{1, 1} ? Q + 1 : 1)) return false;
  return true;
}

DemazureReport demazure_check(std::uint64_t q) {
  DemazureReport rep;
  rep.q = q;
  rep.chains = count_chains({{1, 0}, {1, 0}}, 2, q);
  rep.fibers = convolution_fiber_counts({{1, 0}, {1, 0}}, 2, q);
  return rep;
}

}  // namespace agr
