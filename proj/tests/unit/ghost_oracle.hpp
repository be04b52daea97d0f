#pragma once

// Witt-vector sums and products from the ghost-component recursion, computed with
// arbitrary (non-Teichmüller) lifts.  Independent of the Galois-ring realization
// used by the library, apart from plain ring arithmetic modulo p^{n+1}.

#include <vector>

#include "agr/coefficient_ring.hpp"

namespace oracle {

inline agr::RingElem pow_ring(const agr::CoefficientRing& R, agr::RingElem a, std::uint64_t e) {
  agr::RingElem acc = R.one();
  for (; e; e >>= 1) {
    if (e & 1) acc = R.mul(acc, a);
    a = R.mul(a, a);
  }
  return acc;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Ghost component w_n of x, evaluated on lifts in W_{n+1}.
inline agr::RingElem ghost(const agr::CoefficientRing& R, const std::vector<agr::FqElem>& x, unsigned n) {
  const auto p = R.p();
  agr::RingElem acc = R.zero();
  for (unsigned i = 0; i <= n; ++i) {
    auto lift = R.representative(1, x[i].v);
    acc = R.add(acc, R.mul(R.from_int(std::int64_t(ipow(p, i))), pow_ring(R, lift, ipow(p, n - i))));
  }
  return acc;
}

enum class Op { add, mul };

inline std::vector<agr::FqElem> combine(const std::vector<agr::FqElem>& x, const std::vector<agr::FqElem>& y, Op op) {
  const agr::Fq& F = *x[0].field;
  const unsigned h = unsigned(x.size());
  std::vector<agr::FqElem> z;
  for (unsigned n = 0; n < h; ++n) {
    auto R = agr::CoefficientRing::mixed(F.p(), F.r(), n + 1);
    agr::RingElem target = op == Op::add ? R.add(ghost(R, x, n), ghost(R, y, n)) : R.mul(ghost(R, x, n), ghost(R, y, n));
    for (unsigned i = 0; i < n; ++i) {
      auto lift = R.representative(1, z[i].v);
      target = R.sub(target, R.mul(R.from_int(std::int64_t(ipow(F.p(), i))), pow_ring(R, lift, ipow(F.p(), n - i))));
    }
    z.push_back(R.residue(R.shift_down(target, n)));
  }
  return z;
}

}  // namespace oracle
