#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "agr/coweight.hpp"
#include "agr/polynomial.hpp"

namespace agr {

/// Group element.  For affine permutations: the window (f(1), ..., f(n)); for
/// generic Coxeter groups: the ShortLex normal form as a list of generators.
using Element = std::vector<std::int64_t>;
using Word = std::vector<unsigned>;

struct ElementHash {
  std::size_t operator()(const Element& w) const noexcept;
};

/// Thrown when a generic Coxeter element would exceed the configured length cap.
class LengthCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coxeter system (W, S) with S = {0, ..., rank-1}; m(s,t) = 0 encodes ∞.
class CoxeterGroup {
 public:
  explicit CoxeterGroup(std::vector<std::vector<int>> m);
  virtual ~CoxeterGroup() = default;

  unsigned rank() const { return unsigned(m_.size()); }
  int coxeter_m(unsigned s, unsigned t) const { return m_.at(s).at(t); }
  const std::vector<std::vector<int>>& coxeter_matrix() const { return m_; }
  /// Stable identifier used in cache fingerprints.
  virtual std::string type_name() const = 0;

  virtual Element identity() const = 0;
  virtual unsigned length(const Element& w) const = 0;
  virtual Element left_mul(unsigned s, const Element& w) const = 0;
  virtual Element right_mul(const Element& w, unsigned s) const = 0;
  /// ℓ(s w) < ℓ(w)
  virtual bool is_left_descent(unsigned s, const Element& w) const = 0;
  /// ℓ(w s) < ℓ(w)
  virtual bool is_right_descent(const Element& w, unsigned s) const = 0;
  virtual Element inverse(const Element& w) const = 0;
  virtual std::string to_string(const Element& w) const;

  /// ShortLex-least reduced word.
  Word normal_form(const Element& w) const;
  Element from_word(const Word& word) const;
  Element multiply(const Element& a, const Element& b) const;
  bool bruhat_leq(const Element& y, const Element& w) const;
  /// Length first, then lexicographic on normal forms.
  bool shortlex_less(const Element& a, const Element& b) const;
  /// Image under the diagram automorphism s -> perm[s].
  Element twist(const Element& w, const std::vector<unsigned>& perm) const;
  /// perm is an involution of S preserving m.
  bool is_diagram_involution(const std::vector<unsigned>& perm) const;

 private:
  std::vector<std::vector<int>> m_;
};

/// W_a of GL_n (affine type A_{n-1}, n >= 2) as affine permutations f: Z -> Z
/// with f(i + n) = f(i) + n and sum_{i=1}^{n} (f(i) - i) = 0.  s_i swaps i and
/// i+1 (mod n), s_0 swaps 0 and 1.  The static helpers work in the extended
/// group W~ = W_a ⋊ Ω, where Ω is generated by τ: i -> i + 1.
class AffinePermutationGroup : public CoxeterGroup {
 public:
  explicit AffinePermutationGroup(unsigned n);

  unsigned n() const { return n_; }
  std::string type_name() const override;
  Element identity() const override;
  unsigned length(const Element& w) const override;
  Element left_mul(unsigned s, const Element& w) const override;
  Element right_mul(const Element& w, unsigned s) const override;
  bool is_left_descent(unsigned s, const Element& w) const override;
  bool is_right_descent(const Element& w, unsigned s) const override;
  Element inverse(const Element& w) const override;
  std::string to_string(const Element& w) const override;

  // Extended affine Weyl group of GL_n.
  /// f(x) for any integer x.
  static std::int64_t apply(const Element& f, std::int64_t x);
  static Element compose(const Element& f, const Element& g);
  static Element ext_inverse(const Element& f);
  /// ϖ^λ: i -> i + n λ_i.
  static Element translation(const Coweight& lambda);
  static Element tau(unsigned n, std::int64_t k);
  static Element finite_permutation(const std::vector<unsigned>& perm);
  /// k with f ∈ W_a τ^k.
  static std::int64_t omega_component(const Element& f);
  /// Shi's inversion count; valid on all of W~.
  static unsigned ext_length(const Element& f);
  /// x -> n+1 - f(n+1-x): w_J w w_J on W_J, λ -> -w_0 λ on translations.
  static Element star(const Element& f);

 private:
  unsigned n_;
};

/// Generic Coxeter group by its Coxeter matrix.  Elements are ShortLex normal
/// forms, computed from the contragredient geometric representation; any normal
/// form longer than the cap raises LengthCapError.
class GenericCoxeterGroup : public CoxeterGroup {
 public:
  GenericCoxeterGroup(std::string name, std::vector<std::vector<int>> m, unsigned length_cap = 16);

  std::string type_name() const override { return name_; }
  unsigned length_cap() const { return cap_; }
  Element identity() const override { return {}; }
  unsigned length(const Element& w) const override { return unsigned(w.size()); }
  Element left_mul(unsigned s, const Element& w) const override;
  Element right_mul(const Element& w, unsigned s) const override;
  bool is_left_descent(unsigned s, const Element& w) const override;
  bool is_right_descent(const Element& w, unsigned s) const override;
  Element inverse(const Element& w) const override;

  /// Normal form of an arbitrary word.
  Element normalize(const Word& word) const;

 private:
  std::vector<double> act(const Word& word) const;
  Element from_vector(std::vector<double> x) const;

  std::string name_;
  unsigned cap_;
  std::vector<std::vector<double>> two_b_;  // 2 B(α_s, α_t)
};

/// "affine-aN" (N >= 1), or finite "aN", "bN", "dN", "e6".."e8", "f4", "g2",
/// "h3", "h4", "i2-m"; case-insensitive.
std::unique_ptr<CoxeterGroup> make_coxeter_group(const std::string& type, unsigned length_cap = 16);

/// Parses "0,1,2" (empty string is the identity) into an element.
Element parse_word(const CoxeterGroup& G, const std::string& s);
std::string word_to_string(const Word& w);

/// Lower Bruhat interval [e, w], sorted by length.
class BruhatInterval {
 public:
  BruhatInterval(const CoxeterGroup& G, const Element& w);

  std::size_t size() const { return elems_.size(); }
  const Element& element(std::size_t i) const { return elems_[i]; }
  unsigned length(std::size_t i) const { return len_[i]; }
  /// -1 when y is not in the interval.
  long index_of(const Element& y) const;
  std::size_t top() const { return elems_.size() - 1; }
  /// Index of s·elem(i), or -1 when outside the interval.
  long left(unsigned s, std::size_t i) const { return left_[i][s]; }

 private:
  std::vector<Element> elems_;
  std::vector<unsigned> len_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
  std::vector<std::vector<long>> left_;
};

/// Σ_{v ≤ w} q^{ℓ(v)}.
LaurentPoly schubert_poincare(const CoxeterGroup& G, const Element& w);

/// P_{x,w}(q) for every x in [e, w] (zero when x ≰ w), by inverting the
/// R-polynomial bar involution on the interval.
class KLTable {
 public:
  KLTable(const CoxeterGroup& G, const Element& w);
  const BruhatInterval& interval() const { return iv_; }
  /// Throws std::invalid_argument when y ≰ w.
  const LaurentPoly& at(const Element& y) const;
  const LaurentPoly& at_index(std::size_t i) const { return p_[i]; }

 private:
  BruhatInterval iv_;
  std::vector<LaurentPoly> p_;
};

/// P^σ_{x,w}(q) for every twisted involution x ≤ w, from the bar involution of
/// the twisted-involution module of the Hecke algebra.
class LVTable {
 public:
  LVTable(const CoxeterGroup& G, const std::vector<unsigned>& diamond, const Element& w);
  const std::vector<Element>& twisted() const { return tw_; }
  /// Throws std::invalid_argument when y is not a twisted involution ≤ w.
  const LaurentPoly& at(const Element& y) const;

 private:
  std::vector<Element> tw_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
  std::vector<LaurentPoly> p_;
};

LaurentPoly kl_polynomial(const CoxeterGroup& G, const Element& y, const Element& w);
LaurentPoly lv_polynomial(const CoxeterGroup& G, const std::vector<unsigned>& diamond,
                          const Element& y, const Element& w);

/// w^⋄ = w^{-1}.
bool is_twisted_involution(const CoxeterGroup& G, const std::vector<unsigned>& diamond,
                           const Element& w);

/// The maximal element of W_{J1} x W_{J2} by saturation; among ascents of equal
/// length the ShortLex-smallest is taken.  Throws when the coset is not finite
/// within max_steps.
Element double_coset_longest(const CoxeterGroup& G, const std::vector<unsigned>& J1,
                             const std::vector<unsigned>& J2, const Element& x,
                             unsigned max_steps = 4096);

/// No ascent in J1 on the left or J2 on the right.
bool is_double_coset_maximal(const CoxeterGroup& G, const std::vector<unsigned>& J1,
                             const std::vector<unsigned>& J2, const Element& x);

/// ⋄ = Ad(τ^k) ∘ * on W_a(GL_n): s_i -> s_{(k - i) mod n}.
std::vector<unsigned> diamond_involution(unsigned n, std::int64_t k);
/// J = {s_1, ..., s_{n-1}}.
std::vector<unsigned> finite_generators(unsigned n);

struct DoubleCosetData {
  Element d;            // d_μ ∈ W_a
  std::int64_t omega;   // ω = τ^omega
  std::vector<unsigned> diamond;
};

/// d_μ: the longest element of W_J (ϖ^μ ω^{-1}) W_J^⋄, with ω ∈ Ω the component
/// of ϖ^μ.
DoubleCosetData d_of_coweight(const AffinePermutationGroup& G, const Coweight& mu);

struct MinusQEntry {
  Coweight lambda, mu;
  unsigned len_lambda = 0, len_mu = 0;
  LaurentPoly kl, lv;
  bool pass = false;
};

struct MinusQReport {
  std::vector<MinusQEntry> entries;
  std::size_t failures = 0;
  /// Number of double-coset-maximal twisted involutions below each d_μ that did not
  /// arise as some d_λ; nonzero means the coset enumeration missed a pair.
  std::size_t unmatched = 0;
};

/// Dominant μ with μ_n = 0 and ℓ(d_μ) ≤ cap.
std::vector<Coweight> coweights_within_length(unsigned n, unsigned length_cap);

/// Compares P^σ_{d_λ,d_μ}(q) with P_{d_λ,d_μ}(-q) for every dominant λ ≤ μ,
/// μ ranging over coweights_within_length.  Also checks P^σ ≡ P mod 2, the
/// degree bounds and KL positivity; any violation counts as a failure.
MinusQReport verify_minus_q(unsigned n, unsigned length_cap);

/// Persistent memo of KL/LV polynomials keyed by (kind, ⋄, y, w) normal forms.
class KLCache {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit KLCache(std::string fingerprint) : fingerprint_(std::move(fingerprint)) {}
  /// Ignores (with a warning on stderr) missing, corrupt, or mismatched files.
  void load(const std::string& path);
  void save(const std::string& path) const;

  bool lookup(const std::string& key, LaurentPoly& out) const;
  void store(const std::string& key, const LaurentPoly& p);
  std::size_t size() const;

  static std::string key(const std::string& kind, const CoxeterGroup& G, const Element& y,
                         const Element& w, const std::vector<unsigned>& diamond = {});

 private:
  std::string fingerprint_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::int64_t>> table_;
};

}  // namespace agr
