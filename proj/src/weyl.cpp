#include "agr/weyl.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/container_hash/hash.hpp>

#include "agr/parallel.hpp"
#include "json.hpp"

namespace agr {

std::size_t ElementHash::operator()(const Element& w) const noexcept {
  return boost::hash_range(w.begin(), w.end());
}

// ---------------------------------------------------------------------------
// CoxeterGroup

CoxeterGroup::CoxeterGroup(std::vector<std::vector<int>> m) : m_(std::move(m)) {
  for (std::size_t s = 0; s < m_.size(); ++s) {
    if (m_[s].size() != m_.size()) throw std::invalid_argument("Coxeter matrix must be square");
    if (m_[s][s] != 1) throw std::invalid_argument("Coxeter matrix needs m(s,s) = 1");
    for (std::size_t t = 0; t < m_.size(); ++t) {
      if (m_[s][t] != m_[t][s]) throw std::invalid_argument("Coxeter matrix must be symmetric");
      if (s != t && m_[s][t] != 0 && m_[s][t] < 2)
        throw std::invalid_argument("Coxeter matrix entries off the diagonal must be >= 2 or ∞");
    }
  }
}

std::string CoxeterGroup::to_string(const Element& w) const {
  return "(" + word_to_string(normal_form(w)) + ")";
}

Word CoxeterGroup::normal_form(const Element& w) const {
  Word out;
  Element cur = w;
  while (true) {
    unsigned s = 0;
    while (s < rank() && !is_left_descent(s, cur)) ++s;
    if (s == rank()) break;
    out.push_back(s);
    cur = left_mul(s, cur);
  }
  return out;
}

Element CoxeterGroup::from_word(const Word& word) const {
  Element w = identity();
  for (unsigned s : word) {
    if (s >= rank()) throw std::invalid_argument("generator index out of range");
    w = right_mul(w, s);
  }
  return w;
}

Element CoxeterGroup::multiply(const Element& a, const Element& b) const {
  Element w = a;
  for (unsigned s : normal_form(b)) w = right_mul(w, s);
  return w;
}

bool CoxeterGroup::bruhat_leq(const Element& y, const Element& w) const {
  Element a = y, b = w;
  while (true) {
    const unsigned la = length(a), lb = length(b);
    if (la > lb) return false;
    if (lb == 0) return true;
    if (la == lb) return a == b;
    unsigned s = 0;
    while (!is_left_descent(s, b)) ++s;
    if (is_left_descent(s, a)) a = left_mul(s, a);
    b = left_mul(s, b);
  }
}

bool CoxeterGroup::shortlex_less(const Element& a, const Element& b) const {
  const unsigned la = length(a), lb = length(b);
  if (la != lb) return la < lb;
  return normal_form(a) < normal_form(b);
}

Element CoxeterGroup::twist(const Element& w, const std::vector<unsigned>& perm) const {
  Word word = normal_form(w);
  for (auto& s : word) s = perm.at(s);
  return from_word(word);
}

bool CoxeterGroup::is_diagram_involution(const std::vector<unsigned>& perm) const {
  if (perm.size() != rank()) return false;
  for (unsigned s = 0; s < rank(); ++s) {
    if (perm[s] >= rank() || perm[perm[s]] != s) return false;
    for (unsigned t = 0; t < rank(); ++t)
      if (m_[perm[s]][perm[t]] != m_[s][t]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Affine permutations

namespace {

std::vector<std::vector<int>> affine_a_matrix(unsigned n) {
  if (n < 2) throw std::invalid_argument("affine permutations need n >= 2");
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (unsigned i = 0; i < n; ++i) m[i][i] = 1;
  if (n == 2) {
    m[0][1] = m[1][0] = 0;
    return m;
  }
  for (unsigned i = 0; i < n; ++i) {
    unsigned j = (i + 1) % n;
    m[i][j] = m[j][i] = 3;
  }
  return m;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

}  // namespace

AffinePermutationGroup::AffinePermutationGroup(unsigned n) : CoxeterGroup(affine_a_matrix(n)), n_(n) {}

std::string AffinePermutationGroup::type_name() const { return "affine-a" + std::to_string(n_ - 1); }

Element AffinePermutationGroup::identity() const {
  Element w(n_);
  for (unsigned i = 0; i < n_; ++i) w[i] = i + 1;
  return w;
}

std::int64_t AffinePermutationGroup::apply(const Element& f, std::int64_t x) {
  const std::int64_t n = std::int64_t(f.size());
  const std::int64_t r = mod_pos(x - 1, n) + 1;
  return f[std::size_t(r - 1)] + (x - r);
}

unsigned AffinePermutationGroup::ext_length(const Element& f) {
  const std::int64_t n = std::int64_t(f.size());
  std::int64_t len = 0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) len += std::llabs(floor_div(f[j] - f[i], n));
  return unsigned(len);
}

unsigned AffinePermutationGroup::length(const Element& w) const { return ext_length(w); }

Element AffinePermutationGroup::left_mul(unsigned s, const Element& w) const {
  Element out = w;
  for (auto& v : out) {
    const std::int64_t r = mod_pos(v - std::int64_t(s), n_);
    if (r == 0) ++v;
    else if (r == 1) --v;
  }
  return out;
}

Element AffinePermutationGroup::right_mul(const Element& w, unsigned s) const {
  Element out = w;
  if (s == 0) {
    out[0] = w[n_ - 1] - n_;
    out[n_ - 1] = w[0] + n_;
  } else {
    std::swap(out[s - 1], out[s]);
  }
  return out;
}

bool AffinePermutationGroup::is_right_descent(const Element& w, unsigned s) const {
  if (s == 0) return w[n_ - 1] - std::int64_t(n_) > w[0];
  return w[s - 1] > w[s];
}

bool AffinePermutationGroup::is_left_descent(unsigned s, const Element& w) const {
  return is_right_descent(inverse(w), s);
}

Element AffinePermutationGroup::ext_inverse(const Element& f) {
  const std::int64_t n = std::int64_t(f.size());
  Element g(f.size());
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t v = f[std::size_t(i - 1)];
    const std::int64_t r = mod_pos(v - 1, n) + 1;
    g[std::size_t(r - 1)] = i - (v - r);
  }
  return g;
}

Element AffinePermutationGroup::inverse(const Element& w) const { return ext_inverse(w); }

std::string AffinePermutationGroup::to_string(const Element& w) const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << "]";
  return os.str();
}

Element AffinePermutationGroup::compose(const Element& f, const Element& g) {
  if (f.size() != g.size()) throw std::invalid_argument("compose: rank mismatch");
  Element out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = apply(f, g[i]);
  return out;
}

Element AffinePermutationGroup::translation(const Coweight& lambda) {
  const std::int64_t n = std::int64_t(lambda.size());
  Element f(lambda.size());
  for (std::int64_t i = 0; i < n; ++i) f[std::size_t(i)] = i + 1 + n * lambda[std::size_t(i)];
  return f;
}

Element AffinePermutationGroup::tau(unsigned n, std::int64_t k) {
  Element f(n);
  for (unsigned i = 0; i < n; ++i) f[i] = std::int64_t(i) + 1 + k;
  return f;
}

Element AffinePermutationGroup::finite_permutation(const std::vector<unsigned>& perm) {
  Element f(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) f[i] = std::int64_t(perm[i]) + 1;
  return f;
}

std::int64_t AffinePermutationGroup::omega_component(const Element& f) {
  const std::int64_t n = std::int64_t(f.size());
  std::int64_t s = 0;
  for (std::int64_t i = 0; i < n; ++i) s += f[std::size_t(i)] - (i + 1);
  return s / n;
}

Element AffinePermutationGroup::star(const Element& f) {
  const std::int64_t n = std::int64_t(f.size());
  Element out(f.size());
  for (std::int64_t x = 1; x <= n; ++x) out[std::size_t(x - 1)] = n + 1 - apply(f, n + 1 - x);
  return out;
}

// ---------------------------------------------------------------------------
// Generic Coxeter groups

GenericCoxeterGroup::GenericCoxeterGroup(std::string name, std::vector<std::vector<int>> m,
                                         unsigned length_cap)
    : CoxeterGroup(std::move(m)), name_(std::move(name)), cap_(length_cap) {
  const unsigned r = rank();
  two_b_.assign(r, std::vector<double>(r, 0.0));
  for (unsigned s = 0; s < r; ++s)
    for (unsigned t = 0; t < r; ++t) {
      const int mst = coxeter_m(s, t);
      two_b_[s][t] = mst == 0 ? -2.0 : -2.0 * std::cos(std::numbers::pi / mst);
    }
}

std::vector<double> GenericCoxeterGroup::act(const Word& word) const {
  std::vector<double> x(rank(), 1.0);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const unsigned s = *it;
    const double xs = x[s];
    for (unsigned t = 0; t < rank(); ++t) x[t] -= two_b_[s][t] * xs;
  }
  return x;
}

Element GenericCoxeterGroup::from_vector(std::vector<double> x) const {
  constexpr double eps = 1e-9;
  Element out;
  while (true) {
    unsigned s = 0;
    while (s < rank() && x[s] > -eps) ++s;
    if (s == rank()) break;
    if (out.size() == cap_)
      throw LengthCapError(name_ + ": element longer than the length cap " + std::to_string(cap_));
    out.push_back(s);
    const double xs = x[s];
    for (unsigned t = 0; t < rank(); ++t) x[t] -= two_b_[s][t] * xs;
  }
  return out;
}

Element GenericCoxeterGroup::normalize(const Word& word) const {
  for (unsigned s : word)
    if (s >= rank()) throw std::invalid_argument("generator index out of range");
  return from_vector(act(word));
}

namespace {
Word as_word(const Element& w) { return Word(w.begin(), w.end()); }
}  // namespace

Element GenericCoxeterGroup::left_mul(unsigned s, const Element& w) const {
  Word word{s};
  word.insert(word.end(), w.begin(), w.end());
  return normalize(word);
}

Element GenericCoxeterGroup::right_mul(const Element& w, unsigned s) const {
  Word word = as_word(w);
  word.push_back(s);
  return normalize(word);
}

bool GenericCoxeterGroup::is_left_descent(unsigned s, const Element& w) const {
  return act(as_word(w))[s] < 0;
}

bool GenericCoxeterGroup::is_right_descent(const Element& w, unsigned s) const {
  Word rev(w.rbegin(), w.rend());
  return act(rev)[s] < 0;
}

Element GenericCoxeterGroup::inverse(const Element& w) const {
  return normalize(Word(w.rbegin(), w.rend()));
}

namespace {

std::vector<std::vector<int>> path_matrix(unsigned r) {
  std::vector<std::vector<int>> m(r, std::vector<int>(r, 2));
  for (unsigned i = 0; i < r; ++i) m[i][i] = 1;
  for (unsigned i = 0; i + 1 < r; ++i) m[i][i + 1] = m[i + 1][i] = 3;
  return m;
}

void set_m(std::vector<std::vector<int>>& m, unsigned i, unsigned j, int v) { m[i][j] = m[j][i] = v; }

}  // namespace

std::unique_ptr<CoxeterGroup> make_coxeter_group(const std::string& type, unsigned length_cap) {
  std::string t;
  for (char c : type) t += char(std::tolower(static_cast<unsigned char>(c)));
  auto rank_of = [&](std::size_t pos) -> unsigned {
    if (pos >= t.size()) throw std::invalid_argument("Coxeter type needs a rank: " + type);
    std::size_t used = 0;
    int r = std::stoi(t.substr(pos), &used);
    if (pos + used != t.size() || r < 1) throw std::invalid_argument("bad Coxeter type: " + type);
    return unsigned(r);
  };
  if (t.rfind("affine-a", 0) == 0) return std::make_unique<AffinePermutationGroup>(rank_of(8) + 1);
  if (t.rfind("i2-", 0) == 0) {
    unsigned m = rank_of(3);
    if (m < 2) throw std::invalid_argument("I2(m) needs m >= 2");
    return std::make_unique<GenericCoxeterGroup>(t, std::vector<std::vector<int>>{{1, int(m)}, {int(m), 1}},
                                                 length_cap);
  }
  if (t.empty()) throw std::invalid_argument("empty Coxeter type");
  const char family = t[0];
  const unsigned r = rank_of(1);
  auto m = path_matrix(r);
  switch (family) {
    case 'a':
      break;
    case 'b':
    case 'c':
      if (r < 2) throw std::invalid_argument("B_n needs n >= 2");
      set_m(m, r - 2, r - 1, 4);
      break;
    case 'd':
      if (r < 4) throw std::invalid_argument("D_n needs n >= 4");
      set_m(m, r - 2, r - 1, 2);
      set_m(m, r - 3, r - 1, 3);
      break;
    case 'e':
      if (r < 6 || r > 8) throw std::invalid_argument("E_n needs 6 <= n <= 8");
      // Bourbaki labels 1,3,4,...,n along the path and 2 attached to 4.
      for (unsigned i = 0; i < r; ++i)
        for (unsigned j = 0; j < r; ++j) m[i][j] = i == j ? 1 : 2;
      set_m(m, 0, 2, 3);
      set_m(m, 1, 3, 3);
      for (unsigned i = 2; i + 1 < r; ++i) set_m(m, i, i + 1, 3);
      break;
    case 'f':
      if (r != 4) throw std::invalid_argument("F_n needs n = 4");
      set_m(m, 1, 2, 4);
      break;
    case 'g':
      if (r != 2) throw std::invalid_argument("G_n needs n = 2");
      set_m(m, 0, 1, 6);
      break;
    case 'h':
      if (r < 3 || r > 4) throw std::invalid_argument("H_n needs n = 3 or 4");
      set_m(m, 0, 1, 5);
      break;
    default:
      throw std::invalid_argument("unknown Coxeter type: " + type);
  }
  return std::make_unique<GenericCoxeterGroup>(t, m, length_cap);
}

Element parse_word(const CoxeterGroup& G, const std::string& s) {
  std::string body = s;
  if (!body.empty() && body.front() == '[') {
    const auto* A = dynamic_cast<const AffinePermutationGroup*>(&G);
    if (!A || body.back() != ']') throw std::invalid_argument("window notation needs an affine type: " + s);
    Element w;
    std::stringstream ss(body.substr(1, body.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) w.push_back(std::stoll(item));
    if (w.size() != A->n() || AffinePermutationGroup::omega_component(w) != 0)
      throw std::invalid_argument("not an element of W_a: " + s);
    std::vector<std::int64_t> res;
    for (auto v : w) res.push_back(mod_pos(v, A->n()));
    std::sort(res.begin(), res.end());
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i] != std::int64_t(i)) throw std::invalid_argument("not an affine permutation: " + s);
    return w;
  }
  if (!body.empty() && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
  Word word;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int v = std::stoi(item);
    if (v < 0 || unsigned(v) >= G.rank()) throw std::invalid_argument("generator out of range: " + item);
    word.push_back(unsigned(v));
  }
  return G.from_word(word);
}

std::string word_to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Bruhat intervals

BruhatInterval::BruhatInterval(const CoxeterGroup& G, const Element& w) {
  // Subword property: [e, w s] = [e, w] ∪ [e, w] s for w s > w.
  std::unordered_map<Element, unsigned, ElementHash> seen{{G.identity(), 0u}};
  std::vector<Element> cur{G.identity()};
  for (unsigned s : G.normal_form(w)) {
    const std::size_t before = cur.size();
    for (std::size_t i = 0; i < before; ++i) {
      Element y = G.right_mul(cur[i], s);
      if (seen.emplace(y, 0u).second) cur.push_back(std::move(y));
    }
  }
  std::vector<std::pair<unsigned, Element>> keyed;
  keyed.reserve(cur.size());
  for (auto& y : cur) keyed.emplace_back(G.length(y), std::move(y));
  std::sort(keyed.begin(), keyed.end());
  for (auto& [l, y] : keyed) {
    index_.emplace(y, elems_.size());
    len_.push_back(l);
    elems_.push_back(std::move(y));
  }
  left_.assign(elems_.size(), std::vector<long>(G.rank(), -1));
  for (std::size_t i = 0; i < elems_.size(); ++i)
    for (unsigned s = 0; s < G.rank(); ++s) left_[i][s] = index_of(G.left_mul(s, elems_[i]));
}

long BruhatInterval::index_of(const Element& y) const {
  auto it = index_.find(y);
  return it == index_.end() ? -1 : long(it->second);
}

LaurentPoly schubert_poincare(const CoxeterGroup& G, const Element& w) {
  BruhatInterval iv(G, w);
  LaurentPoly p;
  for (std::size_t i = 0; i < iv.size(); ++i) p += LaurentPoly::monomial(int(iv.length(i)));
  return p;
}

// ---------------------------------------------------------------------------
// Canonical bases

namespace {

/// Given the bar involution bar(b_y) = Σ_x r(x, y) b_x (unitriangular, Laurent
/// coefficients in v) on a basis indexed by an order ideal sorted by length,
/// returns P_x = v^{ℓ(top) - ℓ(x)} π_x with C_top = Σ π_x b_x bar-invariant and
/// π_x ∈ v^{-1} Z[v^{-1}] for x ≠ top.  P_x must be even in v; it is returned as a
/// polynomial in v^2.
template <class R>
std::vector<LaurentPoly> solve_canonical(const std::vector<unsigned>& len, std::size_t top, R&& r) {
  const std::size_t N = len.size();
  std::vector<LaurentPoly> pi(N);
  std::vector<LaurentPoly> pibar(N);
  pi[top] = pibar[top] = LaurentPoly::constant(1);
  for (std::size_t x = top; x-- > 0;) {
    if (len[x] >= len[top]) continue;
    LaurentPoly rhs;
    for (std::size_t y = x + 1; y <= top; ++y) {
      if (len[y] <= len[x] || pibar[y].is_zero()) continue;
      const LaurentPoly& rxy = r(x, y);
      if (!rxy.is_zero()) rhs += pibar[y] * rxy;
    }
    // rhs = π - bar(π) with π strictly negative in v.
    if (rhs.coeff(0) != 0 || !(rhs + rhs.bar()).is_zero())
      throw std::logic_error("canonical basis: bar involution is not an involution on this interval");
    pi[x] = rhs.truncated(INT_MIN / 2, -1);
    pibar[x] = pi[x].bar();
  }
  std::vector<LaurentPoly> out(N);
  for (std::size_t x = 0; x < N; ++x) {
    if (pi[x].is_zero()) continue;
    LaurentPoly p = pi[x].shifted(int(len[top]) - int(len[x]));
    std::map<int, std::int64_t> halved;
    for (auto [e, c] : p.terms()) {
      if (e % 2 != 0 || e < 0) throw std::logic_error("canonical basis: polynomial is not even in v");
      halved[e / 2] = c;
    }
    LaurentPoly q;
    for (auto [e, c] : halved) q += LaurentPoly::monomial(e, c);
    out[x] = q;
  }
  return out;
}

const LaurentPoly kU = LaurentPoly::monomial(1);

}  // namespace

KLTable::KLTable(const CoxeterGroup& G, const Element& w) : iv_(G, w) {
  const std::size_t N = iv_.size();
  const unsigned rank = G.rank();
  auto is_desc = [&](unsigned s, std::size_t i) {
    long j = iv_.left(s, i);
    return j >= 0 && iv_.length(std::size_t(j)) < iv_.length(i);
  };
  // R[y][x] = R_{x,y}(q)
  std::vector<std::vector<LaurentPoly>> R(N, std::vector<LaurentPoly>(N));
  const LaurentPoly q = LaurentPoly::monomial(1);
  const LaurentPoly qm1 = q - LaurentPoly::constant(1);
  R[0][0] = LaurentPoly::constant(1);
  for (std::size_t y = 1; y < N; ++y) {
    unsigned s = 0;
    while (s < rank && !is_desc(s, y)) ++s;
    const std::size_t sy = std::size_t(iv_.left(s, y));
    for (std::size_t x = 0; x < N; ++x) {
      if (iv_.length(x) > iv_.length(y)) break;
      const long sx = iv_.left(s, x);
      if (is_desc(s, x)) {
        R[y][x] = R[sy][std::size_t(sx)];
      } else {
        LaurentPoly v = qm1 * R[sy][x];
        if (sx >= 0) v += q * R[sy][std::size_t(sx)];
        R[y][x] = v;
      }
    }
  }
  std::vector<unsigned> len(N);
  for (std::size_t i = 0; i < N; ++i) len[i] = iv_.length(i);
  // bar(T^_y) = Σ_x (-1)^{ℓ(x)+ℓ(y)} u^{ℓ(x)-ℓ(y)} R_{x,y}(u^2) T^_x
  std::vector<std::vector<LaurentPoly>> rcache(N);
  auto r = [&](std::size_t x, std::size_t y) -> const LaurentPoly& {
    auto& row = rcache[y];
    if (row.empty()) {
      row.resize(N);
      for (std::size_t i = 0; i < N; ++i) {
        if (R[y][i].is_zero()) continue;
        LaurentPoly v = R[y][i].substitute_power(2).shifted(int(len[i]) - int(len[y]));
        row[i] = ((len[i] + len[y]) % 2) ? -v : v;
      }
    }
    return row[x];
  };
  p_ = solve_canonical(len, iv_.top(), r);
}

const LaurentPoly& KLTable::at(const Element& y) const {
  long i = iv_.index_of(y);
  if (i < 0) throw std::invalid_argument("kl_polynomial: y is not below w in the Bruhat order");
  return p_[std::size_t(i)];
}

bool is_twisted_involution(const CoxeterGroup& G, const std::vector<unsigned>& diamond, const Element& w) {
  return G.twist(w, diamond) == G.inverse(w);
}

namespace {

struct TwistedMove {
  bool equal = false;    // s w = w s^⋄
  bool descent = false;  // s w < w
  long target = -1;      // s w if equal, else s w s^⋄
};

}  // namespace

LVTable::LVTable(const CoxeterGroup& G, const std::vector<unsigned>& diamond, const Element& w) {
  if (!G.is_diagram_involution(diamond)) throw std::invalid_argument("⋄ is not a diagram involution");
  if (!is_twisted_involution(G, diamond, w)) throw std::invalid_argument("lv_polynomial: w is not a twisted involution");
  BruhatInterval iv(G, w);
  std::vector<unsigned> len;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (!is_twisted_involution(G, diamond, iv.element(i))) continue;
    index_.emplace(iv.element(i), tw_.size());
    tw_.push_back(iv.element(i));
    len.push_back(iv.length(i));
  }
  const std::size_t N = tw_.size();
  const unsigned rank = G.rank();
  std::vector<std::vector<TwistedMove>> mv(N, std::vector<TwistedMove>(rank));
  for (std::size_t i = 0; i < N; ++i)
    for (unsigned s = 0; s < rank; ++s) {
      const Element sy = G.left_mul(s, tw_[i]);
      const Element ys = G.right_mul(tw_[i], diamond[s]);
      TwistedMove& m = mv[i][s];
      m.equal = sy == ys;
      m.descent = G.length(sy) < len[i];
      auto it = index_.find(m.equal ? sy : G.right_mul(sy, diamond[s]));
      m.target = it == index_.end() ? -1 : long(it->second);
    }

  using Vec = std::vector<LaurentPoly>;
  const LaurentPoly one = LaurentPoly::constant(1);
  const LaurentPoly u2 = LaurentPoly::monomial(2);
  auto target = [&](std::size_t z, unsigned s) {
    if (mv[z][s].target < 0) throw std::logic_error("twisted module: action leaves the interval");
    return std::size_t(mv[z][s].target);
  };
  // Action of T_s on the basis a_z of the twisted-involution module.
  auto apply_T = [&](unsigned s, const Vec& v) {
    Vec out(N);
    for (std::size_t z = 0; z < N; ++z) {
      if (v[z].is_zero()) continue;
      const auto& m = mv[z][s];
      const LaurentPoly& c = v[z];
      const std::size_t t = target(z, s);
      if (m.equal && !m.descent) {
        out[z] += kU * c;
        out[t] += (kU + one) * c;
      } else if (m.equal) {
        out[z] += (u2 - kU - one) * c;
        out[t] += (u2 - kU) * c;
      } else if (!m.descent) {
        out[t] += c;
      } else {
        out[z] += (u2 - one) * c;
        out[t] += u2 * c;
      }
    }
    return out;
  };
  // bar(T_s) = T_s^{-1} = u^{-2} T_s + (u^{-2} - 1)
  const LaurentPoly um2 = LaurentPoly::monomial(-2);
  auto apply_barT = [&](unsigned s, const Vec& v) {
    Vec t = apply_T(s, v);
    for (std::size_t z = 0; z < N; ++z) t[z] = um2 * t[z] + (um2 - one) * v[z];
    return t;
  };

  // abar[y][z]: coefficient of a_z in bar(a_y), over Z[u, u^{-1}].
  std::vector<Vec> abar(N);
  abar[0].assign(N, LaurentPoly());
  abar[0][0] = one;
  const LaurentPoly one_plus_u = one + kU;
  for (std::size_t y = 1; y < N; ++y) {
    unsigned s = 0;
    while (s < rank && !mv[y][s].descent) ++s;
    const std::size_t prev = target(y, s);
    if (mv[y][s].equal) {
      // T_s a_prev = u a_prev + (u + 1) a_y
      Vec t = apply_barT(s, abar[prev]);
      for (std::size_t z = 0; z < N; ++z) {
        LaurentPoly num = (t[z] - LaurentPoly::monomial(-1) * abar[prev][z]).shifted(1);
        t[z] = num.is_zero() ? num : num.divide_exact(one_plus_u);
      }
      abar[y] = std::move(t);
    } else {
      // T_s a_prev = a_y
      abar[y] = apply_barT(s, abar[prev]);
    }
  }

  // Normalized basis a^_y = v^{-ℓ(y)} a_y with u = v^2.
  std::vector<Vec> rcache(N);
  auto r = [&](std::size_t x, std::size_t y) -> const LaurentPoly& {
    auto& row = rcache[y];
    if (row.empty()) {
      row.resize(N);
      for (std::size_t i = 0; i < N; ++i)
        if (!abar[y][i].is_zero()) row[i] = abar[y][i].substitute_power(2).shifted(int(len[y] + len[i]));
    }
    return row[x];
  };
  p_ = solve_canonical(len, N - 1, r);
}

const LaurentPoly& LVTable::at(const Element& y) const {
  auto it = index_.find(y);
  if (it == index_.end())
    throw std::invalid_argument("lv_polynomial: y is not a twisted involution below w");
  return p_[it->second];
}

LaurentPoly kl_polynomial(const CoxeterGroup& G, const Element& y, const Element& w) {
  if (!G.bruhat_leq(y, w)) throw std::invalid_argument("kl_polynomial: y is not below w in the Bruhat order");
  return KLTable(G, w).at(y);
}

LaurentPoly lv_polynomial(const CoxeterGroup& G, const std::vector<unsigned>& diamond, const Element& y,
                          const Element& w) {
  if (!is_twisted_involution(G, diamond, y))
    throw std::invalid_argument("lv_polynomial: y is not a twisted involution");
  if (!G.bruhat_leq(y, w)) throw std::invalid_argument("lv_polynomial: y is not below w in the Bruhat order");
  return LVTable(G, diamond, w).at(y);
}

// ---------------------------------------------------------------------------
// Double cosets

bool is_double_coset_maximal(const CoxeterGroup& G, const std::vector<unsigned>& J1,
                             const std::vector<unsigned>& J2, const Element& x) {
  for (unsigned s : J1)
    if (!G.is_left_descent(s, x)) return false;
  for (unsigned t : J2)
    if (!G.is_right_descent(x, t)) return false;
  return true;
}

Element double_coset_longest(const CoxeterGroup& G, const std::vector<unsigned>& J1,
                             const std::vector<unsigned>& J2, const Element& x, unsigned max_steps) {
  Element cur = x;
  for (unsigned step = 0; step <= max_steps; ++step) {
    std::vector<Element> up;
    for (unsigned s : J1)
      if (!G.is_left_descent(s, cur)) up.push_back(G.left_mul(s, cur));
    for (unsigned t : J2)
      if (!G.is_right_descent(cur, t)) up.push_back(G.right_mul(cur, t));
    if (up.empty()) return cur;
    cur = *std::min_element(up.begin(), up.end(),
                            [&](const Element& a, const Element& b) { return G.shortlex_less(a, b); });
  }
  throw std::invalid_argument("double_coset_longest: coset is not finite within the step bound");
}

std::vector<unsigned> diamond_involution(unsigned n, std::int64_t k) {
  std::vector<unsigned> perm(n);
  for (unsigned i = 0; i < n; ++i) perm[i] = unsigned(mod_pos(k - std::int64_t(i), n));
  return perm;
}

std::vector<unsigned> finite_generators(unsigned n) {
  std::vector<unsigned> J;
  for (unsigned i = 1; i < n; ++i) J.push_back(i);
  return J;
}

DoubleCosetData d_of_coweight(const AffinePermutationGroup& G, const Coweight& mu) {
  const unsigned n = G.n();
  if (mu.size() != n) throw std::invalid_argument("d_of_coweight: rank mismatch");
  if (!is_dominant(mu)) throw std::invalid_argument("d_of_coweight: μ must be dominant");
  DoubleCosetData out;
  out.omega = total(mu);
  out.diamond = diamond_involution(n, out.omega);
  const Element x =
      AffinePermutationGroup::compose(AffinePermutationGroup::translation(mu), AffinePermutationGroup::tau(n, -out.omega));
  const auto J1 = finite_generators(n);
  std::vector<unsigned> J2;
  for (unsigned s : J1) J2.push_back(out.diamond[s]);
  out.d = double_coset_longest(G, J1, J2, x);
  return out;
}

std::vector<Coweight> coweights_within_length(unsigned n, unsigned length_cap) {
  AffinePermutationGroup G(n);
  std::vector<Coweight> out;
  Coweight cur(n, 0);
  // ℓ(d_μ) >= (2ρ, μ) >= μ_1, so μ_1 <= cap bounds the search.
  std::function<void(unsigned, int)> rec = [&](unsigned i, int upper) {
    if (i + 1 == n) {
      cur[i] = 0;
      if (unsigned(pairing_2rho(cur)) <= length_cap && G.length(d_of_coweight(G, cur).d) <= length_cap)
        out.push_back(cur);
      return;
    }
    for (int v = 0; v <= upper; ++v) {
      cur[i] = v;
      rec(i + 1, v);
    }
  };
  rec(0, int(length_cap));
  std::sort(out.begin(), out.end(), [](const Coweight& a, const Coweight& b) {
    int pa = pairing_2rho(a), pb = pairing_2rho(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

namespace {

bool congruent_mod2(const LaurentPoly& a, const LaurentPoly& b) {
  const LaurentPoly d = a - b;
  for (auto [e, c] : d.terms())
    if (c % 2 != 0) return false;
  return true;
}

bool within_degree_bound(const LaurentPoly& p, unsigned ly, unsigned lw) {
  if (ly == lw) return p == LaurentPoly::constant(1);
  if (p.is_zero()) return false;
  return p.min_degree() >= 0 && 2 * p.max_degree() <= int(lw) - int(ly) - 1;
}

}  // namespace

MinusQReport verify_minus_q(unsigned n, unsigned length_cap) {
  AffinePermutationGroup G(n);
  const auto mus = coweights_within_length(n, length_cap);
  const auto J1 = finite_generators(n);
  struct Part {
    std::vector<MinusQEntry> entries;
    std::size_t failures = 0, unmatched = 0;
  };
  auto parts = parallel_map<Part>(mus.size(), [&](std::size_t idx) {
    Part part;
    const Coweight& mu = mus[idx];
    const auto D = d_of_coweight(G, mu);
    KLTable kl(G, D.d);
    LVTable lv(G, D.diamond, D.d);
    const unsigned lmu = G.length(D.d);
    // Oracle-level gates on every twisted pair below d_μ.
    std::unordered_map<Element, bool, ElementHash> is_d_lambda;
    for (const auto& y : lv.twisted()) {
      const LaurentPoly& p = kl.at(y);
      const LaurentPoly& ps = lv.at(y);
      const unsigned ly = G.length(y);
      bool ok = congruent_mod2(p, ps) && within_degree_bound(p, ly, lmu) && within_degree_bound(ps, ly, lmu);
      for (auto [e, c] : p.terms()) ok = ok && c >= 0;
      if (!ok) ++part.failures;
    }
    std::vector<unsigned> J2;
    for (unsigned s : J1) J2.push_back(D.diamond[s]);
    for (const auto& lambda : dominant_below(mu)) {
      MinusQEntry e;
      e.lambda = lambda;
      e.mu = mu;
      const auto Dl = d_of_coweight(G, lambda);
      e.len_lambda = G.length(Dl.d);
      e.len_mu = lmu;
      e.kl = kl.at(Dl.d);
      e.lv = lv.at(Dl.d);
      e.pass = e.lv == e.kl.negate_variable();
      if (!e.pass) ++part.failures;
      is_d_lambda[Dl.d] = true;
      part.entries.push_back(std::move(e));
    }
    for (const auto& y : lv.twisted())
      if (is_double_coset_maximal(G, J1, J2, y) && !is_d_lambda.count(y)) ++part.unmatched;
    return part;
  });
  MinusQReport rep;
  for (auto& p : parts) {
    rep.failures += p.failures;
    rep.unmatched += p.unmatched;
    for (auto& e : p.entries) rep.entries.push_back(std::move(e));
  }
  rep.failures += rep.unmatched;
  return rep;
}

// ---------------------------------------------------------------------------
// Cache

std::string KLCache::key(const std::string& kind, const CoxeterGroup& G, const Element& y, const Element& w,
                         const std::vector<unsigned>& diamond) {
  std::string k = kind + "|" + G.type_name() + "|";
  for (std::size_t i = 0; i < diamond.size(); ++i) k += (i ? "," : "") + std::to_string(diamond[i]);
  return k + "|" + word_to_string(G.normal_form(y)) + "|" + word_to_string(G.normal_form(w));
}

void KLCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  try {
    auto j = nlohmann::json::parse(in);
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("fingerprint").get<std::string>() != fingerprint_) {
      std::cerr << "warning: ignoring " << path << " (schema or fingerprint mismatch)\n";
      return;
    }
    std::map<std::string, std::vector<std::int64_t>> t;
    for (auto& [k, v] : j.at("entries").items()) t[k] = v.get<std::vector<std::int64_t>>();
    std::lock_guard lock(mu_);
    table_ = std::move(t);
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring corrupt cache " << path << ": " << e.what() << "\n";
  }
}

void KLCache::save(const std::string& path) const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["fingerprint"] = fingerprint_;
  {
    std::lock_guard lock(mu_);
    j["entries"] = table_;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("cannot write cache " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace cache " + path);
}

bool KLCache::lookup(const std::string& key, LaurentPoly& out) const {
  std::lock_guard lock(mu_);
  auto it = table_.find(key);
  if (it == table_.end()) return false;
  out = LaurentPoly::from_coeffs(it->second);
  return true;
}

void KLCache::store(const std::string& key, const LaurentPoly& p) {
  std::vector<std::int64_t> c = p.is_zero() ? std::vector<std::int64_t>{} : p.coeffs_from(0, p.max_degree());
  std::lock_guard lock(mu_);
  table_[key] = std::move(c);
}

std::size_t KLCache::size() const {
  std::lock_guard lock(mu_);
  return table_.size();
}

}  // namespace agr
