#include "agr/satake.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "agr/lattice.hpp"
#include "agr/weyl.hpp"

namespace agr {

int parity(const Coweight& mu) { return pairing_2rho(mu) % 2 == 0 ? 1 : -1; }

namespace {

std::int64_t dot(const Coweight& a, const Coweight& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::int64_t(a[i]) * b[i];
  return s;
}

/// 2ρ = (n-1, n-3, ..., 1-n).
Coweight two_rho(std::size_t n) {
  Coweight r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = int(n) - 1 - 2 * int(i);
  return r;
}

/// Dominant multiplicities of V_μ, keyed by dominant λ ≼ μ.
std::map<Coweight, std::int64_t> dominant_multiplicities(const Coweight& mu) {
  if (!is_dominant(mu)) throw std::invalid_argument("weight_multiplicity: μ must be dominant");
  const std::size_t n = mu.size();
  const Coweight r2 = two_rho(n);
  std::map<Coweight, std::int64_t> m;
  auto mult = [&](const Coweight& x) -> std::int64_t {
    const Coweight d = dominant_rep(x);
    auto it = m.find(d);
    return it == m.end() ? 0 : it->second;
  };
  // dominant_below is sorted decreasingly, a linear extension of dominance.
  for (const auto& lambda : dominant_below(mu)) {
    if (lambda == mu) {
      m[lambda] = 1;
      continue;
    }
    // Freudenthal: ((μ+ρ,μ+ρ) - (λ+ρ,λ+ρ)) m(λ) = 2 Σ_{α>0} Σ_{k>=1} (λ+kα, α) m(λ+kα)
    std::int64_t num = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (int k = 1;; ++k) {
          Coweight x = lambda;
          x[i] += k;
          x[j] -= k;
          if (!dominance_leq(dominant_rep(x), mu)) break;
          num += 2 * (x[i] - x[j]) * mult(x);
        }
    const std::int64_t den = dot(mu, mu) - dot(lambda, lambda) + dot(sub(mu, lambda), r2);
    if (den <= 0 || num % den != 0) throw std::logic_error("Freudenthal recursion: non-integral multiplicity");
    m[lambda] = num / den;
  }
  return m;
}

}  // namespace

std::int64_t weight_multiplicity(const Coweight& mu, const Coweight& lambda) {
  if (!is_dominant(mu)) throw std::invalid_argument("weight_multiplicity: μ must be dominant");
  if (lambda.size() != mu.size()) throw std::invalid_argument("weight_multiplicity: rank mismatch");
  const Coweight d = dominant_rep(lambda);
  if (!dominance_leq(d, mu)) return 0;
  return dominant_multiplicities(mu).at(d);
}

std::map<Coweight, std::int64_t> character(const Coweight& mu) {
  std::map<Coweight, std::int64_t> out;
  for (const auto& [lambda, m] : dominant_multiplicities(mu))
    for (const auto& x : weyl_orbit(lambda)) out[x] = m;
  return out;
}

std::map<Coweight, std::int64_t> tensor_decomposition(const std::vector<Coweight>& mu_seq) {
  if (mu_seq.empty()) throw std::invalid_argument("tensor_decomposition: empty sequence");
  const std::size_t n = mu_seq[0].size();
  Coweight rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = int(n - 1 - i);
  std::map<Coweight, std::int64_t> cur{{mu_seq[0], 1}};
  if (!is_dominant(mu_seq[0])) throw std::invalid_argument("tensor_decomposition: factors must be dominant");
  for (std::size_t f = 1; f < mu_seq.size(); ++f) {
    if (mu_seq[f].size() != n) throw std::invalid_argument("tensor_decomposition: rank mismatch");
    const auto ch = character(mu_seq[f]);
    std::map<Coweight, std::int64_t> next;
    for (const auto& [kappa, c] : cur)
      for (const auto& [beta, m] : ch) {
        // Brauer-Klimyk: reflect κ + β + ρ into the dominant chamber.
        Coweight v = add(add(kappa, beta), rho);
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j + 1 < n - i; ++j)
            if (v[j] < v[j + 1]) {
              std::swap(v[j], v[j + 1]);
              sign = -sign;
            }
        bool wall = false;
        for (std::size_t i = 0; i + 1 < n; ++i) wall = wall || v[i] == v[i + 1];
        if (wall) continue;
        next[sub(v, rho)] += sign * c * m;
      }
    cur.clear();
    for (const auto& [k, v] : next)
      if (v != 0) cur.emplace(k, v);
  }
  for (const auto& [k, v] : cur)
    if (v < 0) throw std::logic_error("tensor_decomposition: negative multiplicity");
  return cur;
}

std::int64_t tensor_multiplicity(const std::vector<Coweight>& mu_seq, const Coweight& lambda) {
  const auto d = tensor_decomposition(mu_seq);
  auto it = d.find(lambda);
  return it == d.end() ? 0 : it->second;
}

CharacterExpansion satake_transform(const Coweight& mu, std::uint64_t q, RingKind kind) {
  if (!is_dominant(mu)) throw std::invalid_argument("satake_transform: μ must be dominant");
  CharacterExpansion out;
  for (const auto& [lambda, count] : mv_table(mu, q, kind).mv)
    if (count) out[lambda] = LaurentPoly::monomial(-pairing_2rho(lambda), count);
  return out;
}

const std::vector<std::uint64_t>& default_q_grid() {
  static const std::vector<std::uint64_t> grid{2, 3, 4, 5, 7, 8, 9};
  return grid;
}

std::map<Coweight, PolyFit> mv_count_polynomials(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                                 bool closure, RingKind kind) {
  const int max_degree = pairing_2rho(mu);
  if (q_grid.size() < std::size_t(max_degree) + 1)
    throw std::invalid_argument("q grid too small for degree " + std::to_string(max_degree));
  std::map<Coweight, std::vector<std::pair<std::int64_t, BigInt>>> pts;
  std::vector<MVTable> tables;
  for (auto q : q_grid) tables.push_back(mv_table(mu, q, kind));
  for (const auto& t : tables)
    for (const auto& [lambda, c] : closure ? t.mv_leq : t.mv) pts[lambda];
  for (std::size_t i = 0; i < q_grid.size(); ++i)
    for (auto& [lambda, v] : pts) {
      const auto& m = closure ? tables[i].mv_leq : tables[i].mv;
      auto it = m.find(lambda);
      v.emplace_back(std::int64_t(q_grid[i]), BigInt(it == m.end() ? 0 : it->second));
    }
  std::map<Coweight, PolyFit> out;
  for (const auto& [lambda, v] : pts) {
    PolyFit fit = fit_polynomial(v, max_degree);
    if (!fit.integral || !fit.verified)
      throw std::runtime_error("count of S_" + to_string(lambda) + " ∩ Gr_" + to_string(mu) +
                               " is not polynomial on the q grid");
    out.emplace(lambda, std::move(fit));
  }
  return out;
}

namespace {

LaurentPoly fit_to_poly(const PolyFit& f) {
  LaurentPoly p;
  for (int e = 0; e <= f.degree; ++e) {
    const Rational& c = f.coeffs[std::size_t(e)];
    if (c != 0) p += LaurentPoly::monomial(e, static_cast<std::int64_t>(numerator(c)));
  }
  return p;
}

/// Halves all exponents; they must be even.
LaurentPoly halve_exponents(const LaurentPoly& p) {
  LaurentPoly out;
  for (auto [e, c] : p.terms()) {
    if (e % 2 != 0) throw std::logic_error("expected an even Laurent polynomial in u");
    out += LaurentPoly::monomial(e / 2, c);
  }
  return out;
}

}  // namespace

CharacterExpansion satake_transform_poly(const Coweight& mu, const std::vector<std::uint64_t>& q_grid, RingKind kind) {
  if (!is_dominant(mu)) throw std::invalid_argument("satake_transform: μ must be dominant");
  CharacterExpansion out;
  for (const auto& [lambda, fit] : mv_count_polynomials(mu, q_grid, false, kind)) {
    LaurentPoly p = fit_to_poly(fit).substitute_power(2).shifted(-pairing_2rho(lambda));
    if (!p.is_zero()) out[lambda] = p;
  }
  return out;
}

bool is_weyl_invariant(const CharacterExpansion& e) {
  for (const auto& [lambda, v] : e)
    for (const auto& x : weyl_orbit(lambda)) {
      auto it = e.find(x);
      if (it == e.end() || !(it->second == v)) return false;
    }
  return true;
}

std::map<Coweight, LaurentPoly> lusztig_kato_expand(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                                    RingKind kind) {
  const auto sat = satake_transform_poly(mu, q_grid, kind);
  const auto below = dominant_below(mu);
  std::map<Coweight, std::map<Coweight, std::int64_t>> mult;
  for (const auto& nu : below) mult[nu] = dominant_multiplicities(nu);
  // Coefficients c_ν(q) with q^{-(ρ,μ)} Sat = Σ_ν c_ν ch V_ν, solved from the top.
  std::map<Coweight, LaurentPoly> c;
  for (const auto& lambda : below) {
    auto it = sat.find(lambda);
    LaurentPoly val = it == sat.end() ? LaurentPoly() : halve_exponents(it->second.shifted(-pairing_2rho(mu)));
    for (const auto& [nu, cn] : c) {
      auto m = mult[nu].find(lambda);
      if (m != mult[nu].end()) val -= cn.scaled(m->second);
    }
    c[lambda] = val;
  }
  std::map<Coweight, LaurentPoly> out;
  for (const auto& [nu, cn] : c) out[nu] = cn.bar();  // q^{-1} -> v
  return out;
}

LaurentPoly kostka_foulkes(const Coweight& mu, const Coweight& lambda, const std::vector<std::uint64_t>& q_grid,
                           RingKind kind) {
  if (!is_dominant(mu) || !is_dominant(lambda)) throw std::invalid_argument("kostka_foulkes: dominant inputs required");
  if (total(mu) != total(lambda) || !dominance_leq(lambda, mu)) return {};
  // K = C^{-1} with C the Lusztig-Kato matrix on {ν : λ ≼ ν ≼ μ}.
  std::vector<Coweight> block;
  for (const auto& nu : dominant_below(mu))
    if (dominance_leq(lambda, nu)) block.push_back(nu);
  std::map<Coweight, std::map<Coweight, LaurentPoly>> C;
  for (const auto& nu : block) C[nu] = lusztig_kato_expand(nu, q_grid, kind);
  std::map<Coweight, LaurentPoly> K;  // K_{μν}
  for (const auto& nu : block) {
    if (nu == mu) {
      K[nu] = LaurentPoly::constant(1);
      continue;
    }
    LaurentPoly s;
    for (const auto& [kappa, k] : K) {
      auto it = C[kappa].find(nu);
      if (it != C[kappa].end()) s -= k * it->second;
    }
    K[nu] = s;
  }
  const LaurentPoly& out = K.at(lambda);
  for (auto [e, coef] : out.terms())
    if (coef < 0 || e < 0) throw std::logic_error("kostka_foulkes: negative coefficient");
  return out;
}

int charge(const std::vector<int>& word) {
  std::vector<bool> used(word.size(), false);
  std::size_t remaining = word.size();
  int total_charge = 0;
  while (remaining > 0) {
    int top = 0;
    for (std::size_t i = 0; i < word.size(); ++i)
      if (!used[i]) top = std::max(top, word[i]);
    // Standard subword: 1, 2, ... read leftwards cyclically from the right end;
    // the index goes up each time the search wraps around.
    std::size_t pos = word.size();
    int index = 0;
    for (int letter = 1; letter <= top; ++letter) {
      bool wrapped = false;
      std::size_t found = word.size();
      for (std::size_t step = 0; step < word.size(); ++step) {
        if (pos == 0) {
          pos = word.size();
          wrapped = true;
        }
        --pos;
        if (!used[pos] && word[pos] == letter) {
          found = pos;
          break;
        }
      }
      if (found == word.size()) throw std::invalid_argument("charge: content is not a partition");
      if (letter > 1 && wrapped) ++index;
      total_charge += index;
      used[found] = true;
      --remaining;
    }
  }
  return total_charge;
}

LaurentPoly kostka_foulkes_charge(const Coweight& mu, const Coweight& lambda) {
  if (!is_dominant(mu) || !is_dominant(lambda)) throw std::invalid_argument("kostka_foulkes: dominant inputs required");
  if (total(mu) != total(lambda) || !dominance_leq(lambda, mu)) return {};
  const std::size_t n = mu.size();
  const int c = std::min(mu.back(), lambda.back());
  Coweight shape = mu, content = lambda;
  for (auto& x : shape) x -= c;
  for (auto& x : content) x -= c;
  LaurentPoly out;
  std::vector<std::vector<int>> rows(n);
  // Letter ℓ+1 fills a horizontal strip: row r grows to at most the length row
  // r-1 had before this letter.
  std::function<void(std::size_t)> place;
  std::function<void(std::size_t, std::size_t, int, const std::vector<int>&)> strip =
      [&](std::size_t letter, std::size_t r, int left, const std::vector<int>& old) {
        if (r == n) {
          if (left == 0) place(letter + 1);
          return;
        }
        const int limit = std::min(shape[r], r == 0 ? shape[0] : old[r - 1]);
        const int len = int(rows[r].size());
        for (int k = 0; k <= left && len + k <= limit; ++k) {
          rows[r].insert(rows[r].end(), std::size_t(k), int(letter) + 1);
          strip(letter, r + 1, left - k, old);
          rows[r].resize(std::size_t(len));
        }
      };
  place = [&](std::size_t letter) {
    if (letter == n) {
      std::vector<int> word;
      for (std::size_t r = n; r-- > 0;) word.insert(word.end(), rows[r].begin(), rows[r].end());
      out += LaurentPoly::monomial(charge(word));
      return;
    }
    std::vector<int> old(n);
    for (std::size_t r = 0; r < n; ++r) old[r] = int(rows[r].size());
    strip(letter, 0, content[letter], old);
  };
  place(0);
  return out;
}

std::vector<MVLeadingEntry> mv_leading_check(const Coweight& mu, const std::vector<std::uint64_t>& q_grid,
                                             RingKind kind) {
  const auto fits = mv_count_polynomials(mu, q_grid, true, kind);
  std::vector<MVLeadingEntry> out;
  for (const auto& [lambda, m] : character(mu)) {
    MVLeadingEntry e;
    e.lambda = lambda;
    e.mu = mu;
    auto it = fits.find(lambda);
    if (it != fits.end()) e.fit = it->second;
    e.expected_degree = pairing_2rho(add(lambda, mu)) / 2;
    e.expected_leading = m;
    e.pass = e.fit.integral && e.fit.verified && e.fit.degree == e.expected_degree &&
             e.fit.leading() == Rational(e.expected_leading);
    out.push_back(std::move(e));
  }
  return out;
}

int commutativity_sign(const Coweight& mu, const Coweight& nu, const Coweight& lambda) {
  if (mu.size() != nu.size() || mu.size() != lambda.size())
    throw std::invalid_argument("commutativity_sign: rank mismatch");
  const Coweight diff = sub(add(mu, nu), lambda);
  const int e = pairing_2rho(diff);
  if (total(diff) != 0 || e % 2 != 0)
    throw std::invalid_argument("commutativity_sign: λ is not in the component of μ + ν");
  const long exponent = long(e / 2) + long(pairing_2rho(mu)) * long(pairing_2rho(nu));
  return exponent % 2 == 0 ? 1 : -1;
}

std::vector<SemismallEntry> semismall_report(const std::vector<Coweight>& mu_seq,
                                             const std::vector<std::uint64_t>& q_grid, RingKind kind) {
  if (mu_seq.empty()) throw std::invalid_argument("semismall_report: empty sequence");
  const std::size_t n = mu_seq[0].size();
  Coweight sum(n, 0);
  for (const auto& m : mu_seq) sum = add(sum, m);
  std::vector<std::map<Coweight, std::int64_t>> per_q;
  for (auto q : q_grid) per_q.push_back(convolution_fiber_counts(mu_seq, unsigned(n), q, kind));
  const auto decomposition = tensor_decomposition(mu_seq);
  std::vector<SemismallEntry> out;
  for (const auto& lambda : dominant_below(dominant_rep(sum))) {
    SemismallEntry e;
    e.lambda = lambda;
    e.bound = pairing_2rho(sub(sum, lambda)) / 2;
    if (q_grid.size() < std::size_t(e.bound) + 2)
      throw std::invalid_argument("semismall_report: q grid too small for the degree bound");
    std::vector<std::pair<std::int64_t, BigInt>> pts;
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
      auto it = per_q[i].find(lambda);
      pts.emplace_back(std::int64_t(q_grid[i]), BigInt(it == per_q[i].end() ? 0 : it->second));
    }
    e.fit = fit_polynomial(pts, int(q_grid.size()) - 2);
    e.coeff_at_bound = e.fit.degree >= e.bound ? e.fit.coeffs[std::size_t(e.bound)] : Rational(0);
    auto d = decomposition.find(lambda);
    e.multiplicity = d == decomposition.end() ? 0 : d->second;
    e.pass = e.fit.integral && e.fit.verified && e.fit.degree <= e.bound &&
             e.coeff_at_bound == Rational(e.multiplicity);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<KFvsKLEntry> kf_vs_kl_report(const Coweight& mu) {
  AffinePermutationGroup G(unsigned(mu.size()));
  const auto D = d_of_coweight(G, mu);
  KLTable kl(G, D.d);
  std::vector<KFvsKLEntry> out;
  for (const auto& lambda : dominant_below(mu)) {
    KFvsKLEntry e;
    e.lambda = lambda;
    e.mu = mu;
    e.kf = kostka_foulkes_charge(mu, lambda);
    const Element dl = d_of_coweight(G, lambda).d;
    e.kl_shifted = kl.at(dl).bar().shifted(pairing_2rho(sub(mu, lambda)) / 2);
    e.equal = e.kf == e.kl_shifted;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace agr
