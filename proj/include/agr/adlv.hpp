#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agr/coefficient_ring.hpp"
#include "agr/coweight.hpp"
#include "agr/lattice.hpp"
#include "agr/polynomial.hpp"
#include "agr/ring_matrix.hpp"

namespace agr {

/// b = p^{-scale} B with B an integer matrix.  Such b is σ-fixed, so X_μ(b) is
/// defined over F_p and can be counted over every F_{p^r}.
struct SigmaClass {
  unsigned n = 0;
  std::uint32_t p = 0;
  std::vector<std::int64_t> entries;  // row-major
  int scale = 0;

  static SigmaClass identity(unsigned n, std::uint32_t p);
  static SigmaClass diagonal(std::uint32_t p, const std::vector<int>& exponents);
  /// b e_i = e_{i+1} for i < n, b e_n = p^m e_1: the superbasic class of slope m/n.
  static SigmaClass superbasic(unsigned n, std::uint32_t p, int m);
  /// "id", "superbasic" (slope 1/n) or "diag:a1,...,an".
  static SigmaClass parse(const std::string& spec, unsigned n, std::uint32_t p);
  /// p^c b.
  SigmaClass central_twist(int c) const;
  /// p^c b with κ(p^c b) = index, if n divides index - κ(b).
  std::optional<SigmaClass> with_index(int index) const;

  std::int64_t at(unsigned i, unsigned j) const { return entries[std::size_t(i) * n + j]; }
  /// Integral part B over R.
  RingMatrix matrix(const CoefficientRing& R) const;
  /// v_p(det b); throws if b is singular.
  int kottwitz_index() const;
  std::string to_string() const;
};

/// Weakly decreasing slopes.
using NewtonPoint = std::vector<Rational>;

/// Slopes of b = p^{-scale} B over R = W_h(F_{p^s}): (1/r)·(Newton polygon
/// slopes of the characteristic polynomial of B σ(B) ⋯ σ^{r-1}(B)), minus scale.
/// r must be a multiple of s.  Throws PrecisionError when the polygon is not
/// determined by the available digits.
NewtonPoint newton_point(const CoefficientRing& R, const RingMatrix& B, int scale, unsigned r);
NewtonPoint newton_point(const SigmaClass& b, unsigned r = 1);

/// n - Σ_j m_j where slope a_j/d_j (lowest terms) occurs m_j d_j times.
int defect(const NewtonPoint& nu);
/// Σ ν_i = κ(b) and ν ≼ μ.
bool mazur_admissible(const Coweight& mu, const SigmaClass& b);
/// ⟨ρ, μ - ν_b⟩ - def(b)/2; throws std::invalid_argument unless admissible, and
/// std::logic_error if the value is not an integer.
int rapoport_dimension(const Coweight& mu, const SigmaClass& b);

enum class CountMode { equals, leq };

/// Lattices L over W(F_{p^r}) with p^radius Λ0 ⊂ L ⊂ p^{-radius} Λ0 and
/// κ(L) = index.  X_μ(b) is stable under J_b(F) and under central shifts, so it is
/// counted inside this window.  For superbasic b, X ∩ {κ = index} is of finite
/// type and the count stops changing once the radius is large enough.
struct AdlvWindow {
  int radius = 1;
  int index = 0;
};

/// |{L in window : inv(bσ(L), L) = μ (resp. ≼ μ)}| over F_{p^r}.
std::int64_t count_points(const Coweight& mu, const SigmaClass& b, unsigned r, const AdlvWindow& window,
                          CountMode mode = CountMode::leq, RingKind kind = RingKind::mixed);

/// Histogram λ -> |{L in window : inv(bσ(L), L) = λ}|.
std::map<Coweight, std::int64_t> count_by_type(const SigmaClass& b, unsigned r, const AdlvWindow& window,
                                               RingKind kind = RingKind::mixed);

struct DimensionEstimate {
  int dimension = 0;
  double slope = 0, residual = 0;  // residual: max |log_p count - fit|
  bool reliable = false;
};
/// Least-squares slope of log_p(count) against r, rounded.  Unreliable when a
/// count is zero, fewer than two points are given, or the residual exceeds
/// `threshold`.
DimensionEstimate estimate_dimension(const std::vector<std::pair<unsigned, std::int64_t>>& counts, std::uint32_t p,
                                     double threshold = 0.2);

/// Chains L = M_0, M_1, ..., M_m = bσ(L) with inv(M_i, M_{i-1}) ≼ μ_i, L in the
/// window, enumerated step by step.
std::int64_t convolution_count(const std::vector<Coweight>& mu_seq, const SigmaClass& b, unsigned r,
                               const AdlvWindow& window, RingKind kind = RingKind::mixed);

struct NormReduction {
  SigmaClass norm;              // Nm b = b_{d-1} σ(b_{d-2}) ⋯ σ^{d-1}(b_0), with σ^d as Frobenius
  std::vector<Coweight> mu_seq;  // μ_{d-1}, ..., μ_0
  std::int64_t lhs = 0, rhs = 0;
  bool pass() const { return lhs == rhs; }
};
/// Res_{E/F} GL_n for E/F unramified of degree d.  The left side counts tuples
/// (L_0, ..., L_{d-1}) with L_{d-1} in the window and inv(b_i σ(L_{i-1}), L_i) ≼ μ_i;
/// the right side counts chains L_{d-1} → Nm b σ^d(L_{d-1}) of type μ•.
NormReduction norm_reduce(const std::vector<SigmaClass>& b, const std::vector<Coweight>& mu, unsigned r,
                          const AdlvWindow& window, RingKind kind = RingKind::mixed);

}  // namespace agr
