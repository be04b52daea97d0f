#pragma once

#include <string>
#include <vector>

namespace agr {

/// Coweight (m_1, ..., m_n) of GL_n.
using Coweight = std::vector<int>;

bool is_dominant(const Coweight& mu);
/// The dominant element of the W-orbit.
Coweight dominant_rep(Coweight mu);
/// μ - λ is a nonnegative sum of positive coroots e_i - e_{i+1}.
bool dominance_leq(const Coweight& lambda, const Coweight& mu);
/// (2ρ, μ) = sum_{i<j} (μ_i - μ_j).
int pairing_2rho(const Coweight& mu);
/// -w_0 μ.
Coweight dual(const Coweight& mu);
int total(const Coweight& mu);
Coweight add(const Coweight& a, const Coweight& b);
Coweight sub(const Coweight& a, const Coweight& b);
Coweight central(unsigned n, int c);
/// ω_i = (1^i, 0^{n-i}).
Coweight fundamental(unsigned n, unsigned i);

/// All dominant λ ≼ μ (μ dominant); sorted decreasing lexicographically.
std::vector<Coweight> dominant_below(const Coweight& mu);
/// The W-orbit of λ, sorted.
std::vector<Coweight> weyl_orbit(const Coweight& lambda);

std::string to_string(const Coweight& mu);
/// Parses "1,0,-1".
Coweight parse_coweight(const std::string& s);

}  // namespace agr
