#include "agr/adlv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "agr/parallel.hpp"

namespace agr {

namespace {

int p_valuation(BigInt x, std::uint32_t p) {
  if (x == 0) throw std::invalid_argument("p_valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

BigInt integer_det(const SigmaClass& b) {
  std::vector<unsigned> perm(b.n);
  std::iota(perm.begin(), perm.end(), 0u);
  BigInt det = 0;
  do {
    int sign = 1;
    for (unsigned i = 0; i < b.n; ++i)
      for (unsigned j = i + 1; j < b.n; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    BigInt term = sign;
    for (unsigned i = 0; i < b.n && term != 0; ++i) term *= b.at(i, perm[i]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

Rational rho_pairing(const std::vector<Rational>& x) {
  const int n = int(x.size());
  Rational s = 0;
  for (int i = 0; i < n; ++i) s += Rational(n - 1 - 2 * i, 2) * x[std::size_t(i)];
  return s;
}

// Slopes of the lower convex hull of (i, v_i), where v_i < 0 marks a missing point.
std::vector<Rational> hull_slopes(const std::vector<int>& v) {
  std::vector<Rational> out;
  std::size_t i = 0;
  while (v[i] < 0) ++i;
  while (i + 1 < v.size()) {
    std::size_t best = 0;
    Rational best_slope;
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[j] < 0) continue;
      Rational s(v[j] - v[i], int(j - i));
      if (best == 0 || s <= best_slope) {
        best = j;
        best_slope = s;
      }
    }
    for (std::size_t k = i; k < best; ++k) out.push_back(-best_slope);
    i = best;
  }
  return out;
}

// Principal-minor sums e_k, k = 0..n.
std::vector<RingElem> principal_minor_sums(const CoefficientRing& R, const RingMatrix& A) {
  const unsigned n = A.rows;
  std::vector<RingElem> e(n + 1, R.zero());
  e[0] = R.one();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<unsigned> idx;
    for (unsigned i = 0; i < n; ++i)
      if (mask >> i & 1) idx.push_back(i);
    RingMatrix M(unsigned(idx.size()), unsigned(idx.size()));
    for (unsigned a = 0; a < idx.size(); ++a)
      for (unsigned c = 0; c < idx.size(); ++c) M(a, c) = A(idx[a], idx[c]);
    e[idx.size()] = R.add(e[idx.size()], mat_det(R, M));
  }
  return e;
}

// v(det B) for the integral part B; bounds every pivot of B·L above those of L.
int max_entry_valuation_bound(const SigmaClass& b) { return std::max(0, b.kottwitz_index() + int(b.n) * b.scale); }

// p^{-scale} colspan(G), with common powers of π stripped so pivot sums stay small.
Lattice make_lattice(const CoefficientRing& R, int scale, RingMatrix G) {
  unsigned k = R.h();
  for (const auto& x : G.a) k = std::min(k, R.valuation(x));
  if (k == R.h()) throw PrecisionError("lattice basis vanishes at ring precision");
  if (k > 0)
    for (auto& x : G.a) x = R.shift_down(x, k);
  Lattice L = Lattice::from_generators(R, scale - int(k), G);
  unsigned piv = 0;
  for (unsigned a : L.pivots()) piv += a;
  // G/π^k is only known modulo π^{h-k}
  if (piv + k >= R.h()) throw PrecisionError("lattice exceeds ring precision after normalization");
  return L;
}

// g_L · M for a step lattice M given by its basis at scale -lo.
Lattice step(const CoefficientRing& R, const Lattice& L, const RingMatrix& BM, int lo) {
  return make_lattice(R, L.scale() - lo, mat_mul(R, L.basis(), BM));
}

Lattice normalized(const CoefficientRing& R, const Lattice& L) { return make_lattice(R, L.scale(), L.basis()); }

// p^{-scale} B σ^e(L).
Lattice twisted(const CoefficientRing& R, const Lattice& L, const RingMatrix& B, int scale, unsigned e) {
  Lattice F = L;
  for (unsigned i = 0; i < e; ++i) F = F.frobenius();
  return make_lattice(R, F.scale() + scale, mat_mul(R, B, F.basis()));
}

struct StepCells {
  std::vector<std::vector<RingMatrix>> bases;
  std::vector<int> los;
};

// Lattices M with inv(M, Λ0) ≼ μ_i, as bases at scale -lo_i.
StepCells step_cells(const CoefficientRing& R, const std::vector<Coweight>& mu_seq) {
  StepCells c;
  for (const auto& mu : mu_seq) {
    const Window w = window_for(mu);
    const Lattice L0 = Lattice::standard(R, w.n);
    std::vector<RingMatrix> cell;
    for_each_window_lattice(R, w, [&](const Lattice& M) {
      if (dominance_leq(relative_position(M, L0), mu)) cell.push_back(M.basis());
    });
    c.bases.push_back(std::move(cell));
    c.los.push_back(w.lo);
  }
  return c;
}

int spread(const Coweight& mu) { return mu.empty() ? 0 : mu.front() - mu.back(); }

unsigned adlv_precision(unsigned n, const AdlvWindow& w, int extra) {
  const Window win{n, -w.radius, w.radius, w.index};
  const unsigned h = win.required_precision() + unsigned(std::max(0, extra)) + 2;
  if (h > kMaxDigits) throw PrecisionError("ADLV enumeration needs " + std::to_string(h) + " digits, more than " +
                                           std::to_string(kMaxDigits));
  return h;
}

Window lattice_window(unsigned n, const AdlvWindow& w) {
  if (w.radius < 0) throw std::invalid_argument("window radius must be nonnegative");
  return {n, -w.radius, w.radius, w.index};
}

CoefficientRing adlv_ring(RingKind kind, std::uint32_t p, unsigned r, unsigned h) {
  if (r == 0) throw std::invalid_argument("field degree r must be positive");
  return CoefficientRing::make(kind, p, r, h);
}

// Counts chains start = M_0, ..., M_m with inv(M_i, M_{i-1}) ≼ μ_i and M_m = target;
// the last step is tested directly.
std::int64_t chains_to(const CoefficientRing& R, const StepCells& cells, const std::vector<Coweight>& mu_seq,
                       const Lattice& start, const Lattice& target) {
  const std::size_t m = mu_seq.size();
  if (m == 0) return start == target ? 1 : 0;
  std::int64_t count = 0;
  std::function<void(std::size_t, const Lattice&)> rec = [&](std::size_t s, const Lattice& L) {
    if (s + 1 == m) {
      if (dominance_leq(relative_position(target, L), mu_seq[s])) ++count;
      return;
    }
    for (const auto& BM : cells.bases[s]) rec(s + 1, step(R, L, BM, cells.los[s]));
  };
  rec(0, start);
  return count;
}

std::int64_t weighted_total(const Histogram& h) {
  std::int64_t s = 0;
  for (const auto& [k, v] : h) s += std::int64_t(k[0]) * v;
  return s;
}

}  // namespace

// ---- σ-classes ----------------------------------------------------------------

SigmaClass SigmaClass::identity(unsigned n, std::uint32_t p) { return diagonal(p, std::vector<int>(n, 0)); }

SigmaClass SigmaClass::diagonal(std::uint32_t p, const std::vector<int>& exponents) {
  SigmaClass b;
  b.n = unsigned(exponents.size());
  b.p = p;
  b.entries.assign(std::size_t(b.n) * b.n, 0);
  const int m = exponents.empty() ? 0 : *std::min_element(exponents.begin(), exponents.end());
  for (unsigned i = 0; i < b.n; ++i) {
    std::int64_t x = 1;
    for (int k = m; k < exponents[i]; ++k) x *= p;
    b.entries[std::size_t(i) * b.n + i] = x;
  }
  b.scale = -m;
  return b;
}

SigmaClass SigmaClass::superbasic(unsigned n, std::uint32_t p, int m) {
  if (n == 0 || std::gcd(unsigned(std::abs(m)), n) != 1)
    throw std::invalid_argument("superbasic: slope m/n must be in lowest terms");
  SigmaClass b;
  b.n = n;
  b.p = p;
  b.entries.assign(std::size_t(n) * n, 0);
  const int lo = std::min(m, 0);
  std::int64_t top = 1, unit = 1;
  for (int k = lo; k < m; ++k) top *= p;
  for (int k = lo; k < 0; ++k) unit *= p;
  for (unsigned i = 0; i + 1 < n; ++i) b.entries[std::size_t(i + 1) * n + i] = unit;
  b.entries[n - 1] = top;
  b.scale = -lo;
  return b;
}

SigmaClass SigmaClass::parse(const std::string& spec, unsigned n, std::uint32_t p) {
  if (spec == "id" || spec == "identity") return identity(n, p);
  if (spec == "superbasic") return superbasic(n, p, 1);
  if (spec.rfind("diag:", 0) == 0) {
    auto e = parse_coweight(spec.substr(5));
    if (e.size() != n) throw std::invalid_argument("diag: expected " + std::to_string(n) + " exponents");
    return diagonal(p, e);
  }
  throw std::invalid_argument("unknown b specification '" + spec + "' (id, superbasic, diag:a1,...,an)");
}

SigmaClass SigmaClass::central_twist(int c) const {
  SigmaClass b = *this;
  b.scale -= c;
  return b;
}

std::optional<SigmaClass> SigmaClass::with_index(int index) const {
  const int d = index - kottwitz_index();
  if (d % int(n) != 0) return std::nullopt;
  return central_twist(d / int(n));
}

RingMatrix SigmaClass::matrix(const CoefficientRing& R) const {
  if (R.p() != p) throw std::invalid_argument("SigmaClass::matrix: residue characteristic mismatch");
  RingMatrix B(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      const std::int64_t x = at(i, j);
      if (x % std::int64_t(p) == 0 && x != 0) {
        int v = 0;
        for (std::int64_t y = x; y % std::int64_t(p) == 0; y /= std::int64_t(p)) ++v;
        if (unsigned(v) >= R.h()) throw PrecisionError("entry of b vanishes at ring precision");
      }
      if (R.kind() == RingKind::mixed) {
        B(i, j) = R.from_int(x);
        continue;
      }
      // base-p digits of |x| become t-adic digits
      RingElem e = R.zero();
      std::int64_t y = x < 0 ? -x : x;
      for (unsigned k = 0; y != 0; ++k, y /= std::int64_t(p))
        e = R.add(e, R.mul(R.uniformizer_power(k), R.from_int(y % std::int64_t(p))));
      B(i, j) = x < 0 ? R.neg(e) : e;
    }
  return B;
}

int SigmaClass::kottwitz_index() const {
  const BigInt d = integer_det(*this);
  if (d == 0) throw std::invalid_argument("b is singular");
  return p_valuation(d, p) - int(n) * scale;
}

std::string SigmaClass::to_string() const {
  std::ostringstream os;
  if (scale != 0) os << "p^" << -scale << " * ";
  os << "[";
  for (unsigned i = 0; i < n; ++i) {
    os << (i ? "; " : "");
    for (unsigned j = 0; j < n; ++j) os << (j ? " " : "") << at(i, j);
  }
  os << "]";
  return os.str();
}

// ---- Newton point ---------------------------------------------------------------

NewtonPoint newton_point(const CoefficientRing& R, const RingMatrix& B, int scale, unsigned r) {
  if (r == 0 || r % R.r() != 0) throw std::invalid_argument("newton_point: r must be a positive multiple of the field degree");
  const unsigned n = B.rows;
  RingMatrix N = B, F = B;
  for (unsigned i = 1; i < r; ++i) {
    F = mat_frobenius(R, F);
    N = mat_mul(R, N, F);
  }
  const auto e = principal_minor_sums(R, N);
  // coefficient of x^i is ±e_{n-i}
  std::vector<int> v(n + 1);
  bool unknown = false;
  for (unsigned i = 0; i <= n; ++i) {
    const unsigned val = R.valuation(e[n - i]);
    v[i] = val >= R.h() ? -1 : int(val);
    unknown = unknown || v[i] < 0;
  }
  if (v[0] < 0) throw PrecisionError("newton_point: determinant vanishes at ring precision");
  auto slopes = hull_slopes(v);
  if (unknown) {
    auto w = v;
    for (auto& x : w)
      if (x < 0) x = int(R.h());
    if (hull_slopes(w) != slopes) throw PrecisionError("newton_point: polygon not determined at ring precision");
  }
  for (auto& s : slopes) s = s / r - scale;
  std::sort(slopes.begin(), slopes.end(), std::greater<>());
  return slopes;
}

NewtonPoint newton_point(const SigmaClass& b, unsigned r) {
  const unsigned h = unsigned(max_entry_valuation_bound(b)) * r + 2;
  if (h > kMaxDigits) throw PrecisionError("newton_point: Nm_r(b) needs more than " + std::to_string(kMaxDigits) + " digits");
  const auto R = CoefficientRing::mixed(b.p, 1, h);
  return newton_point(R, b.matrix(R), b.scale, r);
}

int defect(const NewtonPoint& nu) {
  std::map<Rational, int> mult;
  for (const auto& s : nu) ++mult[s];
  int m = 0;
  for (const auto& [s, k] : mult) {
    const int d = int(denominator(s));
    if (k % d != 0) throw std::invalid_argument("defect: slope multiplicity not divisible by its denominator");
    m += k / d;
  }
  return int(nu.size()) - m;
}

bool mazur_admissible(const Coweight& mu, const SigmaClass& b) {
  if (mu.size() != b.n || !is_dominant(mu)) return false;
  if (total(mu) != b.kottwitz_index()) return false;
  const auto nu = newton_point(b);
  Rational a = 0, c = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    a += nu[i];
    c += mu[i];
    if (a > c) return false;
  }
  return true;
}

int rapoport_dimension(const Coweight& mu, const SigmaClass& b) {
  if (!mazur_admissible(mu, b)) throw std::invalid_argument("rapoport_dimension: (μ, b) not admissible");
  const auto nu = newton_point(b);
  std::vector<Rational> diff(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) diff[i] = Rational(mu[i]) - nu[i];
  const Rational d = rho_pairing(diff) - Rational(defect(nu), 2);
  if (denominator(d) != 1) throw std::logic_error("rapoport_dimension: non-integral value " + d.str());
  return int(numerator(d));
}

// ---- point counts ---------------------------------------------------------------

std::map<Coweight, std::int64_t> count_by_type(const SigmaClass& b, unsigned r, const AdlvWindow& window,
                                               RingKind kind) {
  const unsigned n = b.n;
  const Window win = lattice_window(n, window);
  // bσ(L) has pivots at most those of L plus v(det B) spread over the rows
  const auto R = adlv_ring(kind, b.p, r, adlv_precision(n, window, max_entry_valuation_bound(b) + 2 * window.radius));
  const RingMatrix B = b.matrix(R);
  auto hist = window_histogram(R, win, [&](const Lattice& L) {
    return relative_position(twisted(R, L, B, b.scale, 1), L);
  });
  return {hist.begin(), hist.end()};
}

std::int64_t count_points(const Coweight& mu, const SigmaClass& b, unsigned r, const AdlvWindow& window,
                          CountMode mode, RingKind kind) {
  if (mu.size() != b.n || !is_dominant(mu)) throw std::invalid_argument("count_points: μ must be dominant of rank n");
  std::int64_t c = 0;
  for (const auto& [lambda, k] : count_by_type(b, r, window, kind))
    if (mode == CountMode::equals ? lambda == mu : dominance_leq(lambda, mu)) c += k;
  return c;
}

DimensionEstimate estimate_dimension(const std::vector<std::pair<unsigned, std::int64_t>>& counts, std::uint32_t p,
                                     double threshold) {
  DimensionEstimate e;
  if (counts.size() < 2) return e;
  std::vector<double> x, y;
  for (const auto& [r, c] : counts) {
    if (c <= 0) return e;
    x.push_back(double(r));
    y.push_back(std::log(double(c)) / std::log(double(p)));
  }
  const double k = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k, my = std::accumulate(y.begin(), y.end(), 0.0) / k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) return e;
  e.slope = sxy / sxx;
  for (std::size_t i = 0; i < x.size(); ++i)
    e.residual = std::max(e.residual, std::abs(my + e.slope * (x[i] - mx) - y[i]));
  e.dimension = int(std::lround(e.slope));
  e.reliable = e.residual <= threshold;
  return e;
}

std::int64_t convolution_count(const std::vector<Coweight>& mu_seq, const SigmaClass& b, unsigned r,
                               const AdlvWindow& window, RingKind kind) {
  const unsigned n = b.n;
  int extra = max_entry_valuation_bound(b) + 2 * window.radius;
  for (const auto& mu : mu_seq) {
    if (mu.size() != n || !is_dominant(mu)) throw std::invalid_argument("convolution_count: μ_i must be dominant of rank n");
    extra += int(n) * spread(mu);
  }
  const auto R = adlv_ring(kind, b.p, r, adlv_precision(n, window, extra));
  const RingMatrix B = b.matrix(R);
  const StepCells cells = step_cells(R, mu_seq);
  const Window win = lattice_window(n, window);
  auto hist = window_histogram(R, win, [&](const Lattice& L) {
    const Lattice target = twisted(R, L, B, b.scale, 1);
    const auto c = chains_to(R, cells, mu_seq, normalized(R, L), target);
    return c ? std::vector<int>{int(c)} : std::vector<int>{};
  });
  return weighted_total(hist);
}

NormReduction norm_reduce(const std::vector<SigmaClass>& b, const std::vector<Coweight>& mu, unsigned r,
                          const AdlvWindow& window, RingKind kind) {
  const std::size_t d = b.size();
  if (d == 0 || mu.size() != d) throw std::invalid_argument("norm_reduce: need d components of b and of μ");
  const unsigned n = b[0].n;
  const std::uint32_t p = b[0].p;
  for (std::size_t i = 0; i < d; ++i) {
    if (b[i].n != n || b[i].p != p) throw std::invalid_argument("norm_reduce: components of b must share n and p");
    if (mu[i].size() != n || !is_dominant(mu[i])) throw std::invalid_argument("norm_reduce: μ_i must be dominant of rank n");
  }
  NormReduction out;
  // Nm b = b_{d-1} b_{d-2} ⋯ b_0 since every b_i is σ-fixed
  SigmaClass N = b[d - 1];
  for (std::size_t i = d - 1; i-- > 0;) {
    SigmaClass P = N;
    for (unsigned a = 0; a < n; ++a)
      for (unsigned c = 0; c < n; ++c) {
        std::int64_t s = 0;
        for (unsigned k = 0; k < n; ++k) s += N.at(a, k) * b[i].at(k, c);
        P.entries[std::size_t(a) * n + c] = s;
      }
    P.scale = N.scale + b[i].scale;
    N = P;
  }
  out.norm = N;
  for (std::size_t i = d; i-- > 0;) out.mu_seq.push_back(mu[i]);

  int extra = 2 * window.radius;
  for (std::size_t i = 0; i < d; ++i) extra += max_entry_valuation_bound(b[i]) + int(n) * spread(mu[i]);
  const auto R = adlv_ring(kind, p, r, adlv_precision(n, window, extra));
  const Window win = lattice_window(n, window);

  // right side: chains L → Nm b σ^d(L) of type μ_{d-1}, ..., μ_0
  const RingMatrix BN = N.matrix(R);
  const StepCells right_cells = step_cells(R, out.mu_seq);
  out.rhs = weighted_total(window_histogram(R, win, [&](const Lattice& L) {
    const Lattice target = twisted(R, L, BN, N.scale, unsigned(d));
    const auto c = chains_to(R, right_cells, out.mu_seq, normalized(R, L), target);
    return c ? std::vector<int>{int(c)} : std::vector<int>{};
  }));

  // left side: L_{d-1} in the window, then L_i with inv(b_i σ(L_{i-1}), L_i) ≼ μ_i
  std::vector<RingMatrix> Bs;
  for (const auto& bi : b) Bs.push_back(bi.matrix(R));
  std::vector<Coweight> duals;
  for (const auto& m : mu) duals.push_back(dual(m));
  const StepCells left_cells = step_cells(R, duals);
  out.lhs = weighted_total(window_histogram(R, win, [&](const Lattice& Llast) {
    std::int64_t c = 0;
    std::function<void(std::size_t, const Lattice&)> rec = [&](std::size_t i, const Lattice& prev) {
      const Lattice Y = twisted(R, prev, Bs[i], b[i].scale, 1);
      if (i + 1 == d) {
        if (dominance_leq(relative_position(Y, Llast), mu[i])) ++c;
        return;
      }
      for (const auto& BM : left_cells.bases[i]) rec(i + 1, step(R, Y, BM, left_cells.los[i]));
    };
    rec(0, normalized(R, Llast));
    return c ? std::vector<int>{int(c)} : std::vector<int>{};
  }));
  return out;
}

}  // namespace agr
