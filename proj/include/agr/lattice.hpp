#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "agr/coefficient_ring.hpp"
#include "agr/coweight.hpp"
#include "agr/ring_matrix.hpp"

namespace agr {

/// (p, r) with q = p^r; throws unless q is a prime power.
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q);
CoefficientRing ring_for_q(RingKind kind, std::uint64_t q, unsigned h);

/// Full-rank lattice p^{-scale} · colspan(basis) in F^n.
///
/// The basis is the column Hermite form: upper triangular, pivot (i,i) equal to
/// π^{a_i}, entry (i,j) for i < j a canonical representative modulo π^{a_i}.  Two
/// lattices at the same scale are equal iff their bases are equal.  The ring must
/// carry more digits than the sum of the pivot valuations.
class Lattice {
 public:
  static Lattice standard(const CoefficientRing& R, unsigned n);
  /// ϖ^λ Λ0.
  static Lattice torus_point(const CoefficientRing& R, const Coweight& lambda);
  /// p^{-scale} · colspan(G) for a generating matrix G with n rows.
  static Lattice from_generators(const CoefficientRing& R, int scale, const RingMatrix& G);

  const CoefficientRing& ring() const { return ring_; }
  unsigned n() const { return basis_.rows; }
  int scale() const { return scale_; }
  const RingMatrix& basis() const { return basis_; }
  std::vector<unsigned> pivots() const;

  /// p^k L.
  Lattice scaled(int k) const;
  /// (p^{-g_scale} g) · L.
  Lattice transformed(const RingMatrix& g, int g_scale) const;
  /// σ(L), applying the Frobenius entrywise to a basis.
  Lattice frobenius() const;

  bool operator==(const Lattice& o) const;
  std::string to_string() const;

 private:
  friend class WindowEnumerator;
  Lattice(CoefficientRing R, int scale, RingMatrix B) : ring_(std::move(R)), scale_(scale), basis_(std::move(B)) {}
  CoefficientRing ring_;
  int scale_;
  RingMatrix basis_;
};

/// Hermite-reduces generators in place-free fashion; returns the canonical basis.
RingMatrix hermite_form(const CoefficientRing& R, const RingMatrix& G);
/// Canonical basis of an upper-triangular matrix whose pivots are already π-powers.
void reduce_above_pivots(const CoefficientRing& R, RingMatrix& B);

/// inv(L1, L2): the dominant elementary-divisor type of g2^{-1} g1 where Li = gi Λ0.
Coweight relative_position(const Lattice& L1, const Lattice& L2);
/// The λ with L = u ϖ^λ Λ0, u upper unitriangular: λ_i = a_i - scale.
Coweight iwasawa_type(const Lattice& L);
/// Valuation of the determinant of a basis.
int kottwitz_index(const Lattice& L);

/// All L with p^hi Λ0 ⊂ L ⊂ p^lo Λ0 and kottwitz_index(L) = index.
struct Window {
  unsigned n = 0;
  int lo = 0, hi = 0, index = 0;
  /// Digits a ring needs to enumerate this window exactly.
  unsigned required_precision() const;
};

/// Window with lo = μ_n, hi = μ_1, index = |μ|; contains Gr_{≤μ}.
Window window_for(const Coweight& mu);

/// Streams the window in deterministic order (pivot tuples lexicographic, then
/// entries column by column).  The Lattice reference is only valid during the call.
void for_each_window_lattice(const CoefficientRing& R, const Window& w, const std::function<void(const Lattice&)>& f);

using Histogram = std::map<std::vector<int>, std::int64_t>;
/// Counts window lattices by key; lattices whose key is empty are skipped.
/// Partitioned by pivot tuple and merged in order, so thread count is irrelevant.
Histogram window_histogram(const CoefficientRing& R, const Window& w,
                           const std::function<std::vector<int>(const Lattice&)>& key);

/// Lattices of Gr_{≤μ}: window lattices with inv(L, Λ0) ≼ μ.
void enumerate_lattices_leq(const CoefficientRing& R, const Coweight& mu, const std::function<void(const Lattice&)>& f);

std::int64_t count_cell(const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);
std::int64_t count_leq(const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);
std::int64_t count_mv(const Coweight& lambda, const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);
std::int64_t count_mv_leq(const Coweight& lambda, const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);

/// One pass over the window of μ.
struct MVTable {
  std::map<Coweight, std::int64_t> cells;     // inv(L, Λ0) -> count
  std::map<Coweight, std::int64_t> mv;        // iwasawa type on Gr_μ
  std::map<Coweight, std::int64_t> mv_leq;    // iwasawa type on Gr_{≤μ}
};
/// Memoized through CountCache::global().
MVTable mv_table(const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);
/// Uncached single pass.
MVTable compute_mv_table(const Coweight& mu, std::uint64_t q, RingKind kind = RingKind::mixed);

/// Process-wide memo of MV tables keyed by (ring kind, q, μ - μ_n), optionally
/// persisted as counts.json.  Entries are write-once; concurrent readers are safe.
class CountCache {
 public:
  static constexpr int kSchemaVersion = 1;
  static CountCache& global();
  /// Identifies the enumeration conventions the stored counts depend on.
  static std::string fingerprint();

  MVTable mv_table(const Coweight& mu, std::uint64_t q, RingKind kind);
  /// Merges entries from disk; missing files are silent, corrupt or mismatched
  /// ones are ignored with a warning on stderr.
  void load(const std::string& path);
  void save(const std::string& path) const;
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::map<std::string, MVTable> table_;
};

/// Chains Λ0 = L_0 ⊃ ... with inv(L_i, L_{i-1}) = μ_i.  The callback receives the
/// chain; returning false stops the enumeration.  Returns the number visited.
std::int64_t enumerate_chains(const CoefficientRing& R, const std::vector<Coweight>& mu_seq,
                              const std::function<bool(const std::vector<Lattice>&)>& f);
std::int64_t count_chains(const std::vector<Coweight>& mu_seq, unsigned n, std::uint64_t q,
                          RingKind kind = RingKind::mixed);
/// Ring precision adequate for chains of the given steps.
unsigned chain_precision(const std::vector<Coweight>& mu_seq);

/// |m^{-1}(ϖ^λ) ∩ Gr_{μ•}(F_q)|.
std::int64_t convolution_fiber_count(const std::vector<Coweight>& mu_seq, const Coweight& lambda, std::uint64_t q,
                                     RingKind kind = RingKind::mixed);
/// Fiber counts over every torus point ϖ^λ, in one pass.
std::map<Coweight, std::int64_t> convolution_fiber_counts(const std::vector<Coweight>& mu_seq, unsigned n,
                                                          std::uint64_t q, RingKind kind = RingKind::mixed);

}  // namespace agr
