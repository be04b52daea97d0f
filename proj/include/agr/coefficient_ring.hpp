#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agr/fq.hpp"

namespace agr {

/// Raised whenever a computation would need p-adic (or t-adic) digits beyond the
/// precision carried by its operands.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RingKind { mixed, equal };

inline constexpr unsigned kMaxDigits = 16;

/// Packed element of a coefficient ring.  For the mixed ring, d[j] is the
/// coefficient of X^j in (Z/p^h)[X]/(f); for the equal ring, d[i] is the raw F_q
/// value of the coefficient of t^i.
struct RingElem {
  std::array<std::uint32_t, kMaxDigits> d{};
  friend bool operator==(const RingElem&, const RingElem&) = default;
};

/// O/π^h for O = W(F_q) (mixed, π = p) or O = F_q[[t]] (equal, π = t).
///
/// The mixed ring is realized as the Galois ring (Z/p^h)[X]/(f) where f lifts the
/// modulus of `Fq::get(p, r)` with digits in [0, p); Witt coordinates are read off
/// through Teichmüller digit expansion, twisted by Frobenius.  Both kinds expose the same interface so
/// lattice code is agnostic of the characteristic.
class CoefficientRing {
 public:
  static CoefficientRing mixed(std::uint32_t p, unsigned r, unsigned h);
  static CoefficientRing equal(std::uint32_t p, unsigned r, unsigned h);
  static CoefficientRing make(RingKind kind, std::uint32_t p, unsigned r, unsigned h);

  RingKind kind() const { return kind_; }
  std::uint32_t p() const { return field_->p(); }
  unsigned r() const { return field_->r(); }
  unsigned h() const { return h_; }
  std::uint32_t q() const { return field_->q(); }
  const Fq& field() const { return *field_; }
  std::string describe() const;
  friend bool operator==(const CoefficientRing& a, const CoefficientRing& b) {
    return a.kind_ == b.kind_ && a.field_ == b.field_ && a.h_ == b.h_;
  }

  RingElem zero() const { return {}; }
  RingElem one() const;
  RingElem from_int(std::int64_t a) const;
  /// π^k, zero when k >= h.
  RingElem uniformizer_power(unsigned k) const;

  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem sub(const RingElem& a, const RingElem& b) const;
  RingElem neg(const RingElem& a) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;

  bool is_zero(const RingElem& a) const { return a == RingElem{}; }
  /// π-adic valuation; h for zero.
  unsigned valuation(const RingElem& a) const;
  bool is_unit(const RingElem& a) const { return valuation(a) == 0; }
  RingElem unit_inverse(const RingElem& a) const;
  /// a / π^k for valuation(a) >= k; the top k digits of the result are zero.
  RingElem shift_down(const RingElem& a, unsigned k) const;
  RingElem shift_up(const RingElem& a, unsigned k) const;
  /// a = rep + π^k * quot with rep the canonical representative of a mod π^k.
  std::pair<RingElem, RingElem> reduce(const RingElem& a, unsigned k) const;
  /// Number of classes mod π^k, i.e. q^k.
  std::uint64_t residue_count(unsigned k) const;
  /// The idx-th canonical representative of O/π^k, idx < residue_count(k).
  RingElem representative(unsigned k, std::uint64_t idx) const;

  /// Arithmetic Frobenius σ (the Witt vector Frobenius, resp. coefficientwise).
  RingElem frobenius(const RingElem& a) const;
  RingElem frobenius_pow(const RingElem& a, unsigned e) const;

  RingElem teichmuller(const FqElem& x) const;
  FqElem residue(const RingElem& a) const;
  /// Witt coordinates (x_0..x_{h-1}), a = sum p^i [x_i^{1/p^i}]; for the equal
  /// ring, the t-adic coefficients.
  std::vector<FqElem> witt_coordinates(const RingElem& a) const;
  RingElem from_witt_coordinates(std::span<const FqElem> x) const;

  RingElem random(std::mt19937_64& rng) const;
  std::string to_string(const RingElem& a) const;

 private:
  struct Tables;
  CoefficientRing(RingKind kind, const Fq& field, unsigned h);

  RingElem lift_residue(std::uint32_t raw) const;

  RingKind kind_;
  const Fq* field_;
  unsigned h_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace agr
