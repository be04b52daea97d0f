#include "agr/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "agr/parallel.hpp"

namespace agr {

std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("q must be a prime power");
  std::uint64_t p = 2;
  while (p * p <= q && q % p) ++p;
  if (q % p) p = q;
  unsigned r = 0;
  std::uint64_t t = q;
  while (t % p == 0) {
    t /= p;
    ++r;
  }
  if (t != 1) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
  return {std::uint32_t(p), r};
}

CoefficientRing ring_for_q(RingKind kind, std::uint64_t q, unsigned h) {
  auto [p, r] = prime_power(q);
  return CoefficientRing::make(kind, p, r, h);
}

// ---- canonical forms -------------------------------------------------------

void reduce_above_pivots(const CoefficientRing& R, RingMatrix& B) {
  const unsigned n = B.rows;
  for (unsigned j = 1; j < n; ++j)
    for (unsigned i = j; i-- > 0;) {
      const unsigned a = R.valuation(B(i, i));
      auto [rep, quot] = R.reduce(B(i, j), a);
      if (R.is_zero(quot)) continue;
      // column j -= quot * column i; column i vanishes below row i
      for (unsigned t = 0; t <= i; ++t) B(t, j) = R.sub(B(t, j), R.mul(quot, B(t, i)));
    }
}

RingMatrix hermite_form(const CoefficientRing& R, const RingMatrix& G) {
  const unsigned n = G.rows;
  RingMatrix W = G;
  std::vector<unsigned> live(W.cols);
  std::iota(live.begin(), live.end(), 0u);
  RingMatrix B(n, n);
  for (unsigned i = n; i-- > 0;) {
    unsigned best = R.h(), bc = 0;
    for (unsigned c : live) {
      unsigned v = R.valuation(W(i, c));
      if (v < best) {
        best = v;
        bc = c;
      }
    }
    if (best == R.h()) throw PrecisionError("hermite_form: lattice not of full rank within precision");
    const RingElem uinv = R.unit_inverse(R.shift_down(W(i, bc), best));
    for (unsigned t = 0; t < n; ++t) W(t, bc) = R.mul(W(t, bc), uinv);
    for (unsigned c : live) {
      if (c == bc || R.is_zero(W(i, c))) continue;
      RingElem f = R.shift_down(W(i, c), best);
      for (unsigned t = 0; t <= i; ++t) W(t, c) = R.sub(W(t, c), R.mul(f, W(t, bc)));
    }
    for (unsigned t = 0; t < n; ++t) B(t, i) = t <= i ? W(t, bc) : R.zero();
    live.erase(std::find(live.begin(), live.end(), bc));
  }
  reduce_above_pivots(R, B);
  return B;
}

namespace {

void check_capacity(const CoefficientRing& R, const RingMatrix& B) {
  unsigned s = 0;
  for (unsigned i = 0; i < B.rows; ++i) s += R.valuation(B(i, i));
  if (s >= R.h()) throw PrecisionError("lattice exceeds ring precision: pivot sum " + std::to_string(s) +
                                       " needs more than " + std::to_string(R.h()) + " digits");
}

}  // namespace

Lattice Lattice::standard(const CoefficientRing& R, unsigned n) { return {R, 0, identity_matrix(R, n)}; }

Lattice Lattice::torus_point(const CoefficientRing& R, const Coweight& lambda) {
  const int m = *std::min_element(lambda.begin(), lambda.end());
  RingMatrix B(unsigned(lambda.size()), unsigned(lambda.size()));
  for (unsigned i = 0; i < B.rows; ++i) B(i, i) = R.uniformizer_power(unsigned(lambda[i] - m));
  check_capacity(R, B);
  return {R, -m, B};
}

Lattice Lattice::from_generators(const CoefficientRing& R, int scale, const RingMatrix& G) {
  RingMatrix B = hermite_form(R, G);
  check_capacity(R, B);
  return {R, scale, std::move(B)};
}

std::vector<unsigned> Lattice::pivots() const {
  std::vector<unsigned> a(n());
  for (unsigned i = 0; i < n(); ++i) a[i] = ring_.valuation(basis_(i, i));
  return a;
}

Lattice Lattice::scaled(int k) const { return {ring_, scale_ - k, basis_}; }

Lattice Lattice::transformed(const RingMatrix& g, int g_scale) const {
  return from_generators(ring_, scale_ + g_scale, mat_mul(ring_, g, basis_));
}

Lattice Lattice::frobenius() const {
  RingMatrix B = mat_frobenius(ring_, basis_);
  reduce_above_pivots(ring_, B);
  return {ring_, scale_, std::move(B)};
}

bool Lattice::operator==(const Lattice& o) const {
  if (!(ring_ == o.ring_) || n() != o.n()) return false;
  if (scale_ == o.scale_) return basis_ == o.basis_;
  // bring both to the larger scale
  const Lattice& lo = scale_ < o.scale_ ? *this : o;
  const Lattice& hi = scale_ < o.scale_ ? o : *this;
  RingMatrix B = mat_scale(ring_, ring_.uniformizer_power(unsigned(hi.scale_ - lo.scale_)), lo.basis_);
  check_capacity(ring_, B);
  reduce_above_pivots(ring_, B);
  return B == hi.basis_;
}

std::string Lattice::to_string() const {
  std::ostringstream os;
  os << "p^" << -scale_ << " * [";
  for (unsigned i = 0; i < n(); ++i) {
    os << (i ? "; " : "");
    for (unsigned j = 0; j < n(); ++j) os << (j ? " " : "") << ring_.to_string(basis_(i, j));
  }
  os << "]";
  return os.str();
}

Coweight relative_position(const Lattice& L1, const Lattice& L2) {
  if (!(L1.ring() == L2.ring()) || L1.n() != L2.n())
    throw std::invalid_argument("relative_position: lattices over different rings");
  const CoefficientRing& R = L1.ring();
  const auto a2 = L2.pivots();
  const int d = int(std::accumulate(a2.begin(), a2.end(), 0u));
  RingMatrix M = d == 0 ? L1.basis() : mat_mul(R, mat_adj(R, L2.basis()), L1.basis());
  auto e = smith_valuations(R, std::move(M));
  if (e.back() >= R.h()) throw PrecisionError("relative_position: elementary divisor beyond ring precision");
  Coweight inv(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) inv[k] = int(e[e.size() - 1 - k]) - d + L2.scale() - L1.scale();
  return inv;
}

Coweight iwasawa_type(const Lattice& L) {
  auto a = L.pivots();
  Coweight lambda(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) lambda[i] = int(a[i]) - L.scale();
  return lambda;
}

int kottwitz_index(const Lattice& L) {
  auto a = L.pivots();
  return int(std::accumulate(a.begin(), a.end(), 0u)) - int(L.n()) * L.scale();
}

// ---- window enumeration ----------------------------------------------------

unsigned Window::required_precision() const {
  const int k = hi - lo;
  const int D = index - int(n) * lo;
  return unsigned(std::max({D - k, k, D})) + 1;
}

Window window_for(const Coweight& mu) {
  if (!is_dominant(mu)) throw std::invalid_argument("window_for: μ not dominant");
  return {unsigned(mu.size()), mu.back(), mu.front(), total(mu)};
}

class WindowEnumerator {
 public:
  WindowEnumerator(const CoefficientRing& R, const Window& w) : R_(R), w_(w), k_(w.hi - w.lo) {
    if (w.hi < w.lo) throw std::invalid_argument("window: hi < lo");
    if (R.h() < w.required_precision()) throw PrecisionError("window too large for ring precision");
    const int D = w.index - int(w.n) * w.lo;
    if (D >= 0 && D <= int(w.n) * k_) {
      std::vector<unsigned> a(w.n);
      collect_tuples(a, 0, D);
    }
    reps_.resize(unsigned(k_) + 1);
    for (unsigned e = 0; e <= unsigned(k_); ++e) {
      const std::uint64_t cnt = R.residue_count(e);
      if (cnt > (std::uint64_t(1) << 24)) throw std::invalid_argument("window: residue table too large");
      for (std::uint64_t t = 0; t < cnt; ++t) reps_[e].push_back(R.representative(e, t));
    }
    for (unsigned j = 1; j < w.n; ++j)
      for (unsigned i = j; i-- > 0;) slots_.push_back({j, i});
  }

  const std::vector<std::vector<unsigned>>& tuples() const { return tuples_; }

  void run(std::size_t tuple_index, const std::function<void(const Lattice&)>& f) {
    const auto& a = tuples_[tuple_index];
    const unsigned n = w_.n;
    a_ = a;
    prefix_.assign(n + 1, 0);
    for (unsigned i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + a[i];
    RingMatrix B(n, n);
    for (unsigned i = 0; i < n; ++i) B(i, i) = R_.uniformizer_power(a[i]);
    Lattice L(R_, -w_.lo, std::move(B));
    u_.assign(n, R_.zero());
    rec(L, 0, f);
  }

 private:
  // S(i, j) = a_i + ... + a_j, zero when empty.
  unsigned S(unsigned i, int j) const { return int(i) > j ? 0 : prefix_[unsigned(j) + 1] - prefix_[i]; }

  void collect_tuples(std::vector<unsigned>& a, unsigned i, int remaining) {
    if (i + 1 == a.size()) {
      if (remaining >= 0 && remaining <= k_) {
        a[i] = unsigned(remaining);
        tuples_.push_back(a);
      }
      return;
    }
    for (int v = 0; v <= std::min(k_, remaining); ++v) {
      a[i] = unsigned(v);
      collect_tuples(a, i + 1, remaining - v);
    }
  }

  // Column j of p^k B^{-1} must be integral.  With u_l = p^{S(l,j)} y_l for
  // y = B^{-1} e_j, this reads v(u_i) >= S(i,j) - k, and u_i only involves
  // entries already chosen.
  void rec(Lattice& L, std::size_t slot, const std::function<void(const Lattice&)>& f) {
    if (slot == slots_.size()) {
      f(L);
      return;
    }
    auto [j, i] = slots_[slot];
    if (i + 1 == j) u_[j] = R_.one();
    RingMatrix& B = L.basis_;
    RingElem C = R_.zero();
    for (unsigned l = i + 1; l < j; ++l)
      C = R_.add(C, R_.mul(B(i, l), R_.shift_up(u_[l], S(i + 1, int(l) - 1))));
    const unsigned P = S(i + 1, int(j) - 1);
    const int T = int(S(i, int(j))) - k_;
    for (const RingElem& x : reps_[a_[i]]) {
      RingElem ui = R_.neg(R_.add(R_.shift_up(x, P), C));
      if (T > 0 && R_.valuation(ui) < unsigned(T)) continue;
      B(i, j) = x;
      u_[i] = ui;
      rec(L, slot + 1, f);
    }
    B(i, j) = R_.zero();
  }

  const CoefficientRing& R_;
  Window w_;
  int k_;
  std::vector<std::vector<unsigned>> tuples_;
  std::vector<std::vector<RingElem>> reps_;
  std::vector<std::pair<unsigned, unsigned>> slots_;
  std::vector<unsigned> a_, prefix_;
  std::vector<RingElem> u_;
};

void for_each_window_lattice(const CoefficientRing& R, const Window& w, const std::function<void(const Lattice&)>& f) {
  WindowEnumerator en(R, w);
  for (std::size_t t = 0; t < en.tuples().size(); ++t) en.run(t, f);
}

Histogram window_histogram(const CoefficientRing& R, const Window& w,
                           const std::function<std::vector<int>(const Lattice&)>& key) {
  WindowEnumerator proto(R, w);
  const std::size_t n_tasks = proto.tuples().size();
  auto parts = parallel_map<Histogram>(n_tasks, [&](std::size_t t) {
    WindowEnumerator en(R, w);
    Histogram h;
    en.run(t, [&](const Lattice& L) {
      auto k = key(L);
      if (!k.empty()) ++h[k];
    });
    return h;
  });
  Histogram out;
  for (const auto& h : parts)
    for (const auto& [k, v] : h) out[k] += v;
  return out;
}

void enumerate_lattices_leq(const CoefficientRing& R, const Coweight& mu, const std::function<void(const Lattice&)>& f) {
  const Lattice L0 = Lattice::standard(R, unsigned(mu.size()));
  for_each_window_lattice(R, window_for(mu), [&](const Lattice& L) {
    if (dominance_leq(relative_position(L, L0), mu)) f(L);
  });
}

MVTable compute_mv_table(const Coweight& mu, std::uint64_t q, RingKind kind) {
  const Window w = window_for(mu);
  auto R = ring_for_q(kind, q, w.required_precision());
  const Lattice L0 = Lattice::standard(R, w.n);
  const unsigned n = w.n;
  // key: inv followed by iwasawa type
  auto hist = window_histogram(R, w, [&](const Lattice& L) {
    Coweight k = relative_position(L, L0);
    if (!dominance_leq(k, mu)) return std::vector<int>{};
    Coweight lam = iwasawa_type(L);
    k.insert(k.end(), lam.begin(), lam.end());
    return k;
  });
  MVTable t;
  for (const auto& [k, v] : hist) {
    Coweight inv(k.begin(), k.begin() + n), lam(k.begin() + n, k.end());
    t.cells[inv] += v;
    t.mv_leq[lam] += v;
    if (inv == mu) t.mv[lam] += v;
  }
  return t;
}

MVTable mv_table(const Coweight& mu, std::uint64_t q, RingKind kind) {
  return CountCache::global().mv_table(mu, q, kind);
}

std::int64_t count_cell(const Coweight& mu, std::uint64_t q, RingKind kind) {
  auto t = mv_table(mu, q, kind);
  auto it = t.cells.find(mu);
  return it == t.cells.end() ? 0 : it->second;
}

std::int64_t count_leq(const Coweight& mu, std::uint64_t q, RingKind kind) {
  auto t = mv_table(mu, q, kind);
  std::int64_t s = 0;
  for (const auto& [k, v] : t.cells) s += v;
  return s;
}

std::int64_t count_mv(const Coweight& lambda, const Coweight& mu, std::uint64_t q, RingKind kind) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("count_mv: rank mismatch");
  if (total(lambda) != total(mu)) return 0;
  auto t = mv_table(mu, q, kind);
  auto it = t.mv.find(lambda);
  return it == t.mv.end() ? 0 : it->second;
}

std::int64_t count_mv_leq(const Coweight& lambda, const Coweight& mu, std::uint64_t q, RingKind kind) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("count_mv_leq: rank mismatch");
  if (total(lambda) != total(mu)) return 0;
  auto t = mv_table(mu, q, kind);
  auto it = t.mv_leq.find(lambda);
  return it == t.mv_leq.end() ? 0 : it->second;
}

// ---- chains ----------------------------------------------------------------

unsigned chain_precision(const std::vector<Coweight>& mu_seq) {
  unsigned h = 2;
  unsigned total_pivots = 0;
  for (const auto& mu : mu_seq) {
    const Window w = window_for(mu);
    h = std::max(h, w.required_precision());
    total_pivots += unsigned(w.index - int(w.n) * w.lo);
  }
  return std::max(h, total_pivots + 1);
}

std::int64_t enumerate_chains(const CoefficientRing& R, const std::vector<Coweight>& mu_seq,
                              const std::function<bool(const std::vector<Lattice>&)>& f) {
  if (mu_seq.empty()) {
    // a chain with no steps: just Λ0; rank is irrelevant for the count
    f({});
    return 1;
  }
  const unsigned n = unsigned(mu_seq[0].size());
  // Each step L' = g_L M with M running over Gr_{μ_i}, stored as (B_M, lo).
  std::vector<std::vector<RingMatrix>> cells(mu_seq.size());
  std::vector<int> los(mu_seq.size());
  const Lattice L0 = Lattice::standard(R, n);
  for (std::size_t s = 0; s < mu_seq.size(); ++s) {
    if (mu_seq[s].size() != n) throw std::invalid_argument("enumerate_chains: rank mismatch");
    const Window w = window_for(mu_seq[s]);
    los[s] = w.lo;
    for_each_window_lattice(R, w, [&](const Lattice& M) {
      if (relative_position(M, L0) == mu_seq[s]) cells[s].push_back(M.basis());
    });
  }
  std::vector<Lattice> chain{L0};
  std::int64_t visited = 0;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t s) {
    if (stop) return;
    if (s == mu_seq.size()) {
      ++visited;
      if (!f(chain)) stop = true;
      return;
    }
    const Lattice& L = chain.back();
    for (const auto& BM : cells[s]) {
      RingMatrix B = mat_mul(R, L.basis(), BM);
      unsigned piv = 0;
      for (unsigned i = 0; i < n; ++i) piv += R.valuation(B(i, i));
      if (piv >= R.h()) throw PrecisionError("enumerate_chains: ring precision exhausted");
      reduce_above_pivots(R, B);
      chain.push_back(Lattice::from_generators(R, L.scale() - los[s], B));
      rec(s + 1);
      chain.pop_back();
      if (stop) return;
    }
  };
  rec(0);
  return visited;
}

std::int64_t count_chains(const std::vector<Coweight>& mu_seq, unsigned n, std::uint64_t q, RingKind kind) {
  if (mu_seq.empty()) return 1;
  (void)n;
  auto R = ring_for_q(kind, q, chain_precision(mu_seq));
  return enumerate_chains(R, mu_seq, [](const std::vector<Lattice>&) { return true; });
}

std::map<Coweight, std::int64_t> convolution_fiber_counts(const std::vector<Coweight>& mu_seq, unsigned n,
                                                          std::uint64_t q, RingKind kind) {
  std::map<Coweight, std::int64_t> out;
  if (mu_seq.empty()) {
    out[Coweight(n, 0)] = 1;
    return out;
  }
  auto R = ring_for_q(kind, q, chain_precision(mu_seq));
  enumerate_chains(R, mu_seq, [&](const std::vector<Lattice>& chain) {
    const Lattice& L = chain.back();
    const RingMatrix& B = L.basis();
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j)
        if (!R.is_zero(B(i, j))) return true;
    ++out[iwasawa_type(L)];
    return true;
  });
  return out;
}

std::int64_t convolution_fiber_count(const std::vector<Coweight>& mu_seq, const Coweight& lambda, std::uint64_t q,
                                     RingKind kind) {
  if (mu_seq.empty()) return std::all_of(lambda.begin(), lambda.end(), [](int x) { return x == 0; }) ? 1 : 0;
  Coweight sum(lambda.size(), 0);
  for (const auto& mu : mu_seq) sum = add(sum, mu);
  if (total(sum) != total(lambda)) return 0;
  if ((pairing_2rho(sum) - pairing_2rho(lambda)) % 2) return 0;
  auto counts = convolution_fiber_counts(mu_seq, unsigned(lambda.size()), q, kind);
  auto it = counts.find(lambda);
  return it == counts.end() ? 0 : it->second;
}

}  // namespace agr
