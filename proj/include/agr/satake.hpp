#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agr/coefficient_ring.hpp"
#include "agr/coweight.hpp"
#include "agr/polynomial.hpp"

namespace agr {

/// (-1)^{(2ρ, μ)}.
int parity(const Coweight& mu);

/// dim V_μ(λ) for GL_n by Freudenthal's recursion; μ must be dominant.
std::int64_t weight_multiplicity(const Coweight& mu, const Coweight& lambda);
/// All weights of V_μ with multiplicities.
std::map<Coweight, std::int64_t> character(const Coweight& mu);

/// Multiplicity of V_λ in V_{μ1} ⊗ ... ⊗ V_{μm}, by iterated Brauer-Klimyk.
std::int64_t tensor_multiplicity(const std::vector<Coweight>& mu_seq, const Coweight& lambda);
/// The whole decomposition of the tensor product.
std::map<Coweight, std::int64_t> tensor_decomposition(const std::vector<Coweight>& mu_seq);

/// Coweight -> Laurent polynomial in u, u^2 = q.
using CharacterExpansion = std::map<Coweight, LaurentPoly>;

/// Sat(1_{KμK})(ϖ^λ) = q^{-(ρ,λ)} |S_λ ∩ Gr_μ(F_q)| for every λ, at one q; each
/// value is the monomial count * u^{-(2ρ,λ)}.
CharacterExpansion satake_transform(const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);

/// Default interpolation grid; large enough for (2ρ, μ) <= 4 with two checks.
const std::vector<std::uint64_t>& default_q_grid();

/// |S_λ ∩ Gr_μ| (or Gr_{≤μ}) as polynomials in q, interpolated from counts over
/// the grid.  Throws std::runtime_error when a fit is not integral or fails a
/// held-out point, and std::invalid_argument when the grid is too small.
std::map<Coweight, PolyFit> mv_count_polynomials(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                                 bool closure, RingKind kind = RingKind::mixed);

/// Sat(1_{KμK}) with polynomial coefficients in u.
CharacterExpansion satake_transform_poly(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                         RingKind kind = RingKind::mixed);

/// Symmetric under permuting the coordinates of λ.
bool is_weyl_invariant(const CharacterExpansion& e);

/// ν -> P_{μν}(v), v = q^{-1}, with q^{-(ρ,μ)} Sat(1_{KμK}) = Σ_ν P_{μν}(q^{-1}) ch V_ν
/// over dominant ν ≼ μ.
std::map<Coweight, LaurentPoly> lusztig_kato_expand(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                                    RingKind kind = RingKind::mixed);

/// K_{μλ}(t) from the Satake data: the inverse of the Lusztig-Kato matrix on
/// the dominant coweights below μ.
LaurentPoly kostka_foulkes(const Coweight& mu, const Coweight& lambda, const std::vector<std::uint64_t>& q_grid,
                           RingKind kind = RingKind::mixed);
/// K_{μλ}(t) = Σ_T t^{charge(T)} over semistandard tableaux of shape μ and content λ.
LaurentPoly kostka_foulkes_charge(const Coweight& mu, const Coweight& lambda);
/// Charge of a word whose content is a partition (letters 1..k).
int charge(const std::vector<int>& word);

struct MVLeadingEntry {
  Coweight lambda, mu;
  PolyFit fit;
  int expected_degree = 0;       // (ρ, λ + μ)
  std::int64_t expected_leading = 0;  // dim V_μ(λ)
  bool pass = false;
};
/// Fits |S_λ ∩ Gr_{≤μ}(F_q)| for every weight λ of V_μ.
std::vector<MVLeadingEntry> mv_leading_check(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                             RingKind kind = RingKind::mixed);

/// (-1)^{(ρ, μ+ν-λ) + (2ρ,μ)(2ρ,ν)}; λ must lie in the component of μ + ν with
/// (2ρ, μ+ν-λ) even.
int commutativity_sign(const Coweight& mu, const Coweight& nu, const Coweight& lambda);

struct SemismallEntry {
  Coweight lambda;
  PolyFit fit;
  int bound = 0;                 // (ρ, |μ•| - λ)
  Rational coeff_at_bound = 0;
  std::int64_t multiplicity = 0;
  bool pass = false;
};
/// Fiber counts of the convolution map over dominant λ: degree <= bound and
/// coefficient of q^bound = tensor multiplicity.
std::vector<SemismallEntry> semismall_report(const std::vector<Coweight>& mu_seq,
                                             const std::vector<std::uint64_t>& q_grid,
                                             RingKind kind = RingKind::mixed);

struct KFvsKLEntry {
  Coweight lambda, mu;
  LaurentPoly kf, kl_shifted;  // K_{μλ}(q) and q^{(ρ,μ-λ)} P_{d_λ,d_μ}(q^{-1})
  bool equal = false;
};
/// Exploratory comparison of Kostka-Foulkes polynomials with affine KL
/// polynomials at double-coset longest elements.
std::vector<KFvsKLEntry> kf_vs_kl_report(const Coweight& mu);

}  // namespace agr
