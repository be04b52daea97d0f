#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace agr {

class Fq;

/// Element of a finite field F_{p^r}.  The raw value is the base-p encoding of
/// the coordinate vector with respect to the power basis 1, X, ..., X^{r-1}.
struct FqElem {
  const Fq* field = nullptr;
  std::uint32_t v = 0;

  FqElem& operator+=(const FqElem& o);
  FqElem& operator-=(const FqElem& o);
  FqElem& operator*=(const FqElem& o);
  friend FqElem operator+(FqElem a, const FqElem& b) { return a += b; }
  friend FqElem operator-(FqElem a, const FqElem& b) { return a -= b; }
  friend FqElem operator*(FqElem a, const FqElem& b) { return a *= b; }
  FqElem operator-() const;
  friend bool operator==(const FqElem& a, const FqElem& b) {
    return a.field == b.field && a.v == b.v;
  }

  bool is_zero() const { return v == 0; }
  FqElem inverse() const;
  FqElem pow(std::uint64_t e) const;
  /// x -> x^p
  FqElem frobenius() const;
  std::vector<std::uint32_t> coords() const;
};

std::ostream& operator<<(std::ostream& os, const FqElem& x);

/// The field F_{p^r}, realized as F_p[X]/(f) for the lexicographically first
/// primitive monic polynomial f of degree r (modulus table version 1).  Instances are
/// interned: `Fq::get` always returns the same object for the same (p, r).
class Fq {
 public:
  static constexpr int kModulusTableVersion = 1;
  static constexpr std::uint32_t kMaxOrder = 1u << 22;

  static const Fq& get(std::uint32_t p, unsigned r);

  std::uint32_t p() const { return p_; }
  unsigned r() const { return r_; }
  std::uint32_t q() const { return q_; }
  /// Coefficients c_0..c_{r-1} of f = X^r + sum c_i X^i.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FqElem zero() const { return {this, 0}; }
  FqElem one() const { return {this, 1}; }
  FqElem from_int(std::int64_t a) const;
  FqElem from_raw(std::uint32_t v) const;
  FqElem from_coords(std::span<const std::uint32_t> c) const;
  /// X itself, a generator of the multiplicative group.
  FqElem generator() const { return {this, exp_[1 % (q_ - 1)]}; }
  FqElem random(std::mt19937_64& rng) const;

  // Raw kernels on encoded values.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[std::size_t(a) * q_ + b];
    return add_slow(a, b);
  }
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t frob(std::uint32_t a) const { return frob_[a]; }
  /// Digit i of the encoding, i.e. coefficient of X^i.
  std::uint32_t digit(std::uint32_t a, unsigned i) const;

  std::string describe() const;

 private:
  Fq(std::uint32_t p, unsigned r);
  std::uint32_t add_slow(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_;
  unsigned r_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> frob_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> add_table_;
  std::vector<std::uint32_t> pow_p_;  // p^i
};

bool is_prime(std::uint64_t n);

}  // namespace agr
