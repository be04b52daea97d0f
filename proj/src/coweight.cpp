#include "agr/coweight.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace agr {

bool is_dominant(const Coweight& mu) { return std::is_sorted(mu.rbegin(), mu.rend()); }

Coweight dominant_rep(Coweight mu) {
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

bool dominance_leq(const Coweight& lambda, const Coweight& mu) {
  if (lambda.size() != mu.size()) throw std::invalid_argument("dominance_leq: rank mismatch");
  long partial = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    partial += mu[i] - lambda[i];
    if (partial < 0) return false;
  }
  return partial == 0;
}

int pairing_2rho(const Coweight& mu) {
  const int n = int(mu.size());
  int s = 0;
  for (int i = 0; i < n; ++i) s += (n - 1 - 2 * i) * mu[i];
  return s;
}

Coweight dual(const Coweight& mu) {
  Coweight d(mu.rbegin(), mu.rend());
  for (auto& x : d) x = -x;
  return d;
}

int total(const Coweight& mu) { return std::accumulate(mu.begin(), mu.end(), 0); }

Coweight add(const Coweight& a, const Coweight& b) {
  if (a.size() != b.size()) throw std::invalid_argument("coweight add: rank mismatch");
  Coweight c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Coweight sub(const Coweight& a, const Coweight& b) {
  if (a.size() != b.size()) throw std::invalid_argument("coweight sub: rank mismatch");
  Coweight c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Coweight central(unsigned n, int c) { return Coweight(n, c); }

Coweight fundamental(unsigned n, unsigned i) {
  Coweight w(n, 0);
  for (unsigned k = 0; k < i && k < n; ++k) w[k] = 1;
  return w;
}

std::vector<Coweight> dominant_below(const Coweight& mu) {
  if (!is_dominant(mu)) throw std::invalid_argument("dominant_below: μ not dominant");
  const std::size_t n = mu.size();
  std::vector<Coweight> out;
  if (n == 0) return {Coweight{}};
  Coweight cur(n);
  const int sum = total(mu);
  // Dominant λ ≼ μ have entries in [μ_n, μ_1].
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int upper, int remaining) {
    if (i + 1 == n) {
      if (remaining <= upper && remaining >= mu.back()) {
        cur[i] = remaining;
        if (dominance_leq(cur, mu)) out.push_back(cur);
      }
      return;
    }
    for (int v = upper; v >= mu.back(); --v) {
      cur[i] = v;
      rec(i + 1, v, remaining - v);
    }
  };
  rec(0, mu.front(), sum);
  return out;
}

std::vector<Coweight> weyl_orbit(const Coweight& lambda) {
  Coweight c = lambda;
  std::sort(c.begin(), c.end());
  std::vector<Coweight> out;
  do out.push_back(c);
  while (std::next_permutation(c.begin(), c.end()));
  return out;
}

std::string to_string(const Coweight& mu) {
  std::string s;
  for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
  return s;
}

Coweight parse_coweight(const std::string& s) {
  Coweight mu;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad coweight '" + s + "'");
    mu.push_back(v);
  }
  if (mu.empty()) throw std::invalid_argument("empty coweight");
  return mu;
}

}  // namespace agr
