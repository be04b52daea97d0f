#include "agr/coefficient_ring.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace agr {

struct CoefficientRing::Tables {
  std::uint64_t modulus = 1;               // p^h (mixed)
  std::vector<std::uint64_t> p_pow;        // p^0..p^h (mixed)
  std::vector<std::uint32_t> f;            // lifted modulus coefficients, monic degree r
  std::vector<RingElem> sigma_x_pow;       // σ(X)^j, j < r (mixed)
};

namespace {

using u128 = unsigned __int128;

unsigned vp(std::uint64_t x, std::uint32_t p, unsigned cap) {
  if (x == 0) return cap;
  unsigned v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

CoefficientRing::CoefficientRing(RingKind kind, const Fq& field, unsigned h)
    : kind_(kind), field_(&field), h_(h) {}

CoefficientRing CoefficientRing::make(RingKind kind, std::uint32_t p, unsigned r, unsigned h) {
  return kind == RingKind::mixed ? mixed(p, r, h) : equal(p, r, h);
}

CoefficientRing CoefficientRing::equal(std::uint32_t p, unsigned r, unsigned h) {
  if (h == 0 || h > kMaxDigits) throw std::invalid_argument("equal ring: h out of range");
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, unsigned, unsigned>, std::shared_ptr<const Tables>> cache;
  CoefficientRing R(RingKind::equal, Fq::get(p, r), h);
  std::lock_guard lock(mu);
  auto& t = cache[{p, r, h}];
  if (!t) t = std::make_shared<Tables>();
  R.tables_ = t;
  return R;
}

CoefficientRing CoefficientRing::mixed(std::uint32_t p, unsigned r, unsigned h) {
  if (h == 0) throw std::invalid_argument("mixed ring: h must be positive");
  const Fq& F = Fq::get(p, r);
  if (r > kMaxDigits) throw std::invalid_argument("mixed ring: r too large");
  std::uint64_t m = 1;
  for (unsigned i = 0; i < h; ++i) {
    m *= p;
    if (m >= (std::uint64_t(1) << 32)) throw std::invalid_argument("mixed ring: p^h must fit in 32 bits");
  }
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, unsigned, unsigned>, std::shared_ptr<const Tables>> cache;
  CoefficientRing R(RingKind::mixed, F, h);
  {
    std::lock_guard lock(mu);
    auto it = cache.find({p, r, h});
    if (it != cache.end()) {
      R.tables_ = it->second;
      return R;
    }
  }
  auto t = std::make_shared<Tables>();
  t->modulus = m;
  t->p_pow.resize(h + 1);
  t->p_pow[0] = 1;
  for (unsigned i = 1; i <= h; ++i) t->p_pow[i] = t->p_pow[i - 1] * p;
  t->f = F.modulus();
  R.tables_ = t;

  // σ(X): the root of f congruent to X^p mod p, by Newton iteration.
  if (r > 1) {
    RingElem zeta = R.lift_residue(F.frob(F.generator().v));
    auto eval = [&](const RingElem& z, bool derivative) {
      // f(z) = z^r + sum f_i z^i ; f'(z) = r z^{r-1} + sum i f_i z^{i-1}
      RingElem acc{};
      RingElem zp = R.one();
      for (unsigned i = 0; i <= r; ++i) {
        std::uint64_t c = (i == r) ? 1 : t->f[i];
        if (derivative) {
          if (i + 1 <= r) {
            std::uint64_t c1 = (i + 1 == r) ? 1 : t->f[i + 1];
            acc = R.add(acc, R.mul(zp, R.from_int(std::int64_t(c1 * (i + 1)))));
          }
        } else {
          acc = R.add(acc, R.mul(zp, R.from_int(std::int64_t(c))));
        }
        zp = R.mul(zp, z);
      }
      return acc;
    };
    for (unsigned it = 0; it < h + 1; ++it) {
      RingElem fz = eval(zeta, false);
      if (R.is_zero(fz)) break;
      zeta = R.sub(zeta, R.mul(fz, R.unit_inverse(eval(zeta, true))));
    }
    t->sigma_x_pow.resize(r);
    t->sigma_x_pow[0] = R.one();
    for (unsigned j = 1; j < r; ++j) t->sigma_x_pow[j] = R.mul(t->sigma_x_pow[j - 1], zeta);
  }
  std::lock_guard lock(mu);
  auto& slot = cache[{p, r, h}];
  if (!slot) slot = t;
  R.tables_ = slot;
  return R;
}

std::string CoefficientRing::describe() const {
  std::ostringstream os;
  if (kind_ == RingKind::mixed)
    os << "W_" << h_ << "(F_" << q() << ")";
  else
    os << "F_" << q() << "[t]/t^" << h_;
  return os.str();
}

RingElem CoefficientRing::one() const {
  RingElem e{};
  e.d[0] = 1;
  return e;
}

RingElem CoefficientRing::from_int(std::int64_t a) const {
  RingElem e{};
  if (kind_ == RingKind::mixed) {
    std::int64_t m = std::int64_t(tables_->modulus);
    std::int64_t v = a % m;
    if (v < 0) v += m;
    e.d[0] = std::uint32_t(v);
  } else {
    e.d[0] = field_->from_int(a).v;
  }
  return e;
}

RingElem CoefficientRing::uniformizer_power(unsigned k) const {
  RingElem e{};
  if (k >= h_) return e;
  if (kind_ == RingKind::mixed)
    e.d[0] = std::uint32_t(tables_->p_pow[k]);
  else
    e.d[k] = 1;
  return e;
}

RingElem CoefficientRing::add(const RingElem& a, const RingElem& b) const {
  RingElem c;
  if (kind_ == RingKind::mixed) {
    const std::uint64_t m = tables_->modulus;
    for (unsigned j = 0; j < r(); ++j) {
      std::uint64_t s = std::uint64_t(a.d[j]) + b.d[j];
      c.d[j] = std::uint32_t(s >= m ? s - m : s);
    }
  } else {
    for (unsigned i = 0; i < h_; ++i) c.d[i] = field_->add(a.d[i], b.d[i]);
  }
  return c;
}

RingElem CoefficientRing::neg(const RingElem& a) const {
  RingElem c;
  if (kind_ == RingKind::mixed) {
    const std::uint64_t m = tables_->modulus;
    for (unsigned j = 0; j < r(); ++j) c.d[j] = a.d[j] ? std::uint32_t(m - a.d[j]) : 0;
  } else {
    for (unsigned i = 0; i < h_; ++i) c.d[i] = field_->neg(a.d[i]);
  }
  return c;
}

RingElem CoefficientRing::sub(const RingElem& a, const RingElem& b) const {
  RingElem c;
  if (kind_ == RingKind::mixed) {
    const std::uint64_t m = tables_->modulus;
    for (unsigned j = 0; j < r(); ++j)
      c.d[j] = std::uint32_t(a.d[j] >= b.d[j] ? a.d[j] - b.d[j] : a.d[j] + m - b.d[j]);
  } else {
    for (unsigned i = 0; i < h_; ++i) c.d[i] = field_->sub(a.d[i], b.d[i]);
  }
  return c;
}

RingElem CoefficientRing::mul(const RingElem& a, const RingElem& b) const {
  RingElem c;
  if (kind_ == RingKind::mixed) {
    const unsigned rr = r();
    const std::uint64_t m = tables_->modulus;
    if (rr == 1) {
      c.d[0] = std::uint32_t((std::uint64_t(a.d[0]) * b.d[0]) % m);
      return c;
    }
    std::array<std::uint64_t, 2 * kMaxDigits> prod{};
    for (unsigned i = 0; i < rr; ++i) {
      if (!a.d[i]) continue;
      for (unsigned j = 0; j < rr; ++j)
        prod[i + j] = (prod[i + j] + std::uint64_t(a.d[i]) * b.d[j]) % m;
    }
    const auto& f = tables_->f;
    for (unsigned k = 2 * rr - 2; k >= rr; --k) {
      std::uint64_t top = prod[k];
      if (!top) continue;
      prod[k] = 0;
      for (unsigned i = 0; i < rr; ++i) {
        if (!f[i]) continue;
        std::uint64_t s = (top * f[i]) % m;
        prod[k - rr + i] = (prod[k - rr + i] + m - s) % m;
      }
    }
    for (unsigned j = 0; j < rr; ++j) c.d[j] = std::uint32_t(prod[j]);
  } else {
    for (unsigned i = 0; i < h_; ++i) {
      if (!a.d[i]) continue;
      for (unsigned j = 0; i + j < h_; ++j)
        if (b.d[j]) c.d[i + j] = field_->add(c.d[i + j], field_->mul(a.d[i], b.d[j]));
    }
  }
  return c;
}

unsigned CoefficientRing::valuation(const RingElem& a) const {
  if (kind_ == RingKind::mixed) {
    unsigned v = h_;
    for (unsigned j = 0; j < r(); ++j) v = std::min(v, vp(a.d[j], p(), h_));
    return v;
  }
  for (unsigned i = 0; i < h_; ++i)
    if (a.d[i]) return i;
  return h_;
}

RingElem CoefficientRing::lift_residue(std::uint32_t raw) const {
  RingElem e{};
  if (kind_ == RingKind::mixed) {
    for (unsigned j = 0; j < r(); ++j) e.d[j] = field_->digit(raw, j);
  } else {
    e.d[0] = raw;
  }
  return e;
}

RingElem CoefficientRing::unit_inverse(const RingElem& a) const {
  if (valuation(a) != 0) throw std::domain_error("unit_inverse: not a unit");
  RingElem b = lift_residue(field_->inv(residue(a).v));
  if (kind_ == RingKind::mixed) {
    // Newton: b <- b (2 - a b); precision doubles each round.
    RingElem two = from_int(2);
    for (unsigned prec = 1; prec < h_; prec *= 2) b = mul(b, sub(two, mul(a, b)));
    return b;
  }
  // Power series inverse, term by term.
  RingElem c{};
  c.d[0] = b.d[0];
  for (unsigned n = 1; n < h_; ++n) {
    std::uint32_t s = 0;
    for (unsigned k = 1; k <= n; ++k) s = field_->add(s, field_->mul(a.d[k], c.d[n - k]));
    c.d[n] = field_->neg(field_->mul(s, c.d[0]));
  }
  return c;
}

RingElem CoefficientRing::shift_down(const RingElem& a, unsigned k) const {
  if (k == 0) return a;
  if (valuation(a) < k) throw std::domain_error("shift_down: valuation too small");
  RingElem c{};
  if (kind_ == RingKind::mixed) {
    for (unsigned j = 0; j < r(); ++j) c.d[j] = std::uint32_t(a.d[j] / tables_->p_pow[std::min(k, h_)]);
  } else {
    for (unsigned i = k; i < h_; ++i) c.d[i - k] = a.d[i];
  }
  return c;
}

RingElem CoefficientRing::shift_up(const RingElem& a, unsigned k) const {
  if (k >= h_) return {};
  RingElem c{};
  if (kind_ == RingKind::mixed) {
    const std::uint64_t m = tables_->modulus;
    for (unsigned j = 0; j < r(); ++j) c.d[j] = std::uint32_t((std::uint64_t(a.d[j]) * tables_->p_pow[k]) % m);
  } else {
    for (unsigned i = 0; i + k < h_; ++i) c.d[i + k] = a.d[i];
  }
  return c;
}

std::pair<RingElem, RingElem> CoefficientRing::reduce(const RingElem& a, unsigned k) const {
  if (k >= h_) return {a, RingElem{}};
  RingElem rep{}, quot{};
  if (kind_ == RingKind::mixed) {
    const std::uint64_t pk = tables_->p_pow[k];
    for (unsigned j = 0; j < r(); ++j) {
      rep.d[j] = std::uint32_t(a.d[j] % pk);
      quot.d[j] = std::uint32_t(a.d[j] / pk);
    }
  } else {
    for (unsigned i = 0; i < h_; ++i) {
      if (i < k)
        rep.d[i] = a.d[i];
      else
        quot.d[i - k] = a.d[i];
    }
  }
  return {rep, quot};
}

std::uint64_t CoefficientRing::residue_count(unsigned k) const {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (n > (std::uint64_t(1) << 62) / q()) throw std::overflow_error("residue_count overflow");
    n *= q();
  }
  return n;
}

RingElem CoefficientRing::representative(unsigned k, std::uint64_t idx) const {
  if (k > h_) throw PrecisionError("representative: k exceeds ring precision");
  RingElem e{};
  if (kind_ == RingKind::mixed) {
    const std::uint64_t pk = tables_->p_pow[k];
    for (unsigned j = 0; j < r(); ++j) {
      e.d[j] = std::uint32_t(idx % pk);
      idx /= pk;
    }
  } else {
    for (unsigned i = 0; i < k; ++i) {
      e.d[i] = std::uint32_t(idx % q());
      idx /= q();
    }
  }
  return e;
}

RingElem CoefficientRing::frobenius(const RingElem& a) const {
  if (kind_ == RingKind::equal) {
    RingElem c{};
    for (unsigned i = 0; i < h_; ++i) c.d[i] = field_->frob(a.d[i]);
    return c;
  }
  if (r() == 1) return a;
  RingElem acc{};
  const std::uint64_t m = tables_->modulus;
  for (unsigned j = 0; j < r(); ++j) {
    if (!a.d[j]) continue;
    const RingElem& z = tables_->sigma_x_pow[j];
    for (unsigned i = 0; i < r(); ++i)
      acc.d[i] = std::uint32_t((acc.d[i] + std::uint64_t(a.d[j]) * z.d[i]) % m);
  }
  return acc;
}

RingElem CoefficientRing::frobenius_pow(const RingElem& a, unsigned e) const {
  RingElem x = a;
  for (unsigned i = 0; i < e % r(); ++i) x = frobenius(x);
  return x;
}

RingElem CoefficientRing::teichmuller(const FqElem& x) const {
  if (x.field != field_) throw std::invalid_argument("teichmuller: wrong residue field");
  RingElem y = lift_residue(x.v);
  if (kind_ == RingKind::equal || x.v == 0) return y;
  // [x] = lim lift(x)^{q^n}; q^{h-1} suffices modulo p^h.
  for (unsigned n = 0; n + 1 < h_; ++n) {
    RingElem base = y, acc = one();
    for (std::uint64_t e = q(); e; e >>= 1) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
    }
    y = acc;
  }
  return y;
}

FqElem CoefficientRing::residue(const RingElem& a) const {
  if (kind_ == RingKind::equal) return {field_, a.d[0]};
  std::uint32_t raw = 0, pw = 1;
  for (unsigned j = 0; j < r(); ++j) {
    raw += (a.d[j] % p()) * pw;
    pw *= p();
  }
  return {field_, raw};
}

std::vector<FqElem> CoefficientRing::witt_coordinates(const RingElem& a) const {
  std::vector<FqElem> x;
  x.reserve(h_);
  if (kind_ == RingKind::equal) {
    for (unsigned i = 0; i < h_; ++i) x.push_back({field_, a.d[i]});
    return x;
  }
  // a = sum p^i [d_i] and the Witt coordinates are x_i = d_i^{p^i}.
  RingElem cur = a;
  for (unsigned i = 0; i < h_; ++i) {
    FqElem di = residue(cur);
    FqElem xi = di;
    for (unsigned k = 0; k < i % r(); ++k) xi = xi.frobenius();
    x.push_back(xi);
    if (i + 1 < h_) cur = shift_down(sub(cur, teichmuller(di)), 1);
  }
  return x;
}

RingElem CoefficientRing::from_witt_coordinates(std::span<const FqElem> x) const {
  if (x.size() > h_) throw std::invalid_argument("from_witt_coordinates: too many coordinates");
  RingElem acc{};
  for (unsigned i = 0; i < x.size(); ++i) {
    FqElem di = x[i];
    if (kind_ == RingKind::mixed)
      for (unsigned k = 0; k < (r() - i % r()) % r(); ++k) di = di.frobenius();
    acc = add(acc, shift_up(teichmuller(di), i));
  }
  return acc;
}

RingElem CoefficientRing::random(std::mt19937_64& rng) const {
  std::vector<FqElem> x;
  for (unsigned i = 0; i < h_; ++i) x.push_back(field_->random(rng));
  return from_witt_coordinates(x);
}

std::string CoefficientRing::to_string(const RingElem& a) const {
  std::ostringstream os;
  auto x = witt_coordinates(a);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace agr
