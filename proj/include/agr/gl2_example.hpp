#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "agr/coefficient_ring.hpp"
#include "agr/coweight.hpp"
#include "agr/fq.hpp"
#include "agr/ring_matrix.hpp"

namespace agr {

/// (x, y, z) on the cone x^2 = yz.
struct ChartPoint {
  FqElem x, y, z;
  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;
};

/// W_3(F_q) as used throughout this module.
CoefficientRing w3_ring(std::uint64_t q);

/// Teichmüller digits (a_0, ..., a_{h-1}) with a = Σ p^i [a_i].
std::vector<FqElem> teichmuller_digits(const CoefficientRing& R, const RingElem& a);
/// Σ p^i [d_i]; missing digits are zero, extra digits must vanish in R.
RingElem from_teichmuller_digits(const CoefficientRing& R, const std::vector<FqElem>& d);
/// Moves a 2×2 matrix to a ring of another precision through its digits
/// (truncation, or the Teichmüller-digit lifting).
RingMatrix change_precision(const CoefficientRing& from, const CoefficientRing& to, const RingMatrix& X);

/// A = [[p + [x], -[y]], [[z], p - [x]]] over R.
RingMatrix chart_matrix(const CoefficientRing& R, const ChartPoint& c);

/// det X ∈ p^2 W_3^×, tested on digits: a_0 d_0 = b_0 c_0, the degree-one matrix
/// equation X_1 X_0^* + X_0 X_1^* = 0, and a nonzero p^2-digit of det X.
bool v23_membership(const CoefficientRing& R, const RingMatrix& X);

/// The unique (x, y, z) with X = A(x, y, z) g on the locus a_1 d_1 - b_1 c_1 ≠ 0;
/// nullopt off that locus.  Requires p odd and X ∈ V_{2,3}.
std::optional<ChartPoint> solve_xyz(const CoefficientRing& R, const RingMatrix& X);

enum class FactorResult { ok, skipped, failed };
/// g = p^{-2} adj(Ã) X̃ over W_5 from Teichmüller lifts; ok when g is integral,
/// det g is a unit and A g = X in W_3.  Skipped off the solvable locus.
FactorResult factor_check(const CoefficientRing& R, const RingMatrix& X);

struct B3Report {
  std::uint64_t q = 0, trials = 0, seed = 0;
  std::int64_t membership_failures = 0;  // v23_membership disagrees with det_components
  std::int64_t solve_failures = 0;       // wrong or inconsistent (x, y, z)
  std::int64_t factor_failures = 0;
  std::int64_t orbit_failures = 0;       // solve_xyz not constant on a right orbit
  std::int64_t skipped = 0;              // samples off the solvable locus
  bool pass() const { return membership_failures + solve_failures + factor_failures + orbit_failures == 0; }
};
/// Randomized suite; trial t draws from its own generator seeded by (seed, t).
B3Report b3_suite(std::uint64_t q, std::uint64_t trials, std::uint64_t seed);

struct QuotientReport {
  std::uint64_t q = 0;
  std::int64_t v23 = 0;        // |V_{2,3}(F_q)|, matrices over W_3 with det ∈ p^2 W_3^×
  std::int64_t stabilizers = 0;  // |J(F_q)| = Σ_{X ∈ V} |{γ : Xγ = X}|
  std::int64_t gr2 = 0;        // |Gr̄_2(F_q)|
  std::int64_t gl2_w3 = 0;     // |GL_2(W_3(F_q))|
  /// |J| = |Gr̄_2| · |GL_2(W_3)|: the torsor Gr̄_{2,3} ≅ J is trivial.
  bool torsor_identity() const { return stabilizers == gr2 * gl2_w3; }
  /// |V_{2,3}| = |Gr̄_2| · |GL_2(W_3)|, which would make the right action on V free.
  bool free_action_identity() const { return v23 == gr2 * gl2_w3; }
};
/// Direct enumeration of V_{2,3}(F_q), pruned digit by digit.
QuotientReport quotient_count_check(std::uint64_t q);
/// q^8 (q^2 - 1)(q^2 - q).
std::int64_t gl2_w3_order(std::uint64_t q);

struct EqualCharReport {
  std::uint64_t q = 0;
  std::map<Coweight, std::pair<std::int64_t, std::int64_t>> cells;  // mixed, equal
  std::int64_t mixed_total = 0, equal_total = 0;
  bool pass() const;
};
/// |Gr̄_2(F_q)| over W(F_q) and over F_q[[t]], cell by cell.
EqualCharReport equal_char_compare(std::uint64_t q);

struct DemazureReport {
  std::uint64_t q = 0;
  std::int64_t chains = 0;                         // |w̃Gr_2(F_q)|
  std::map<Coweight, std::int64_t> fibers;         // chains over ϖ^λ
  bool pass() const;
};
/// Two-step ω_1 chains for GL_2: (1 + q)^2 of them, one over each point of the
/// open cell and q + 1 over ϖ^{(1,1)}.
DemazureReport demazure_check(std::uint64_t q);

}  // namespace agr
