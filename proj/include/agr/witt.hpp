#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agr/coefficient_ring.hpp"
#include "agr/fq.hpp"
#include "agr/ring_matrix.hpp"

namespace agr {

/// Truncated Witt vector (x_0, ..., x_{h-1}) over F_{p^r}.
///
/// Coordinates are the stored data; arithmetic goes through the Galois ring
/// W_h(F_q) = (Z/p^h)[X]/(f), which is canonically isomorphic and lets us avoid
/// the Witt addition polynomials, whose degree grows like p^{h-1}.
class WittVector {
 public:
  WittVector(const Fq& field, std::vector<FqElem> coords);
  static WittVector zero(const Fq& field, unsigned h);
  static WittVector one(const Fq& field, unsigned h);
  static WittVector from_int(const Fq& field, unsigned h, std::int64_t n);
  static WittVector from_ring(const CoefficientRing& R, const RingElem& a);

  const Fq& field() const { return *field_; }
  unsigned h() const { return unsigned(x_.size()); }
  const std::vector<FqElem>& coords() const { return x_; }
  const FqElem& operator[](unsigned i) const { return x_[i]; }

  CoefficientRing ring() const { return CoefficientRing::mixed(field_->p(), field_->r(), h()); }
  RingElem to_ring() const { return ring().from_witt_coordinates(x_); }
  /// Image under W_h -> W_m.
  WittVector truncate(unsigned m) const;
  bool is_zero() const;

  friend bool operator==(const WittVector& a, const WittVector& b) {
    return a.field_ == b.field_ && a.x_ == b.x_;
  }

 private:
  const Fq* field_;
  std::vector<FqElem> x_;
};

WittVector witt_add(const WittVector& a, const WittVector& b);
WittVector witt_sub(const WittVector& a, const WittVector& b);
WittVector witt_neg(const WittVector& a);
WittVector witt_mul(const WittVector& a, const WittVector& b);
WittVector teichmuller(const FqElem& x, unsigned h);
WittVector frobenius_sigma(const WittVector& a);
/// Multiplication by p, i.e. V∘F: (0, x_0^p, x_1^p, ...) truncated.
WittVector times_p(const WittVector& a);

using WittMatrix = std::vector<std::vector<WittVector>>;

/// Witt coordinates (det_0 A, ..., det_{h-1} A) of det(A).
std::vector<FqElem> det_components(const WittMatrix& A);

RingMatrix to_ring_matrix(const CoefficientRing& R, const WittMatrix& A);
WittMatrix from_ring_matrix(const CoefficientRing& R, const RingMatrix& A);

/// p^v · body, known modulo p^{v + body.h()}.
///
/// Results carry the precision the operands justify and no more; an operation
/// whose result would have no known digits throws PrecisionError.
class PadicWindow {
 public:
  PadicWindow(int v, WittVector body);
  static PadicWindow from_int(const Fq& field, unsigned h, std::int64_t n);
  /// p^k as an exact-to-h-digits window.
  static PadicWindow uniformizer_power(const Fq& field, unsigned h, int k);

  int offset() const { return v_; }
  const WittVector& body() const { return body_; }
  /// Absolute precision: the value is known modulo p^{precision()}.
  int precision() const { return v_ + int(body_.h()); }
  /// Valuation if the known digits are not all zero.
  bool known_nonzero() const { return !body_.is_zero(); }
  int valuation() const;
  /// Moves powers of p out of the body; precision() is unchanged.
  PadicWindow normalized() const;

  PadicWindow operator+(const PadicWindow& o) const;
  PadicWindow operator-(const PadicWindow& o) const;
  PadicWindow operator-() const;
  PadicWindow operator*(const PadicWindow& o) const;
  PadicWindow inverse() const;

  /// Equal modulo p^{min precision}.
  bool equals(const PadicWindow& o) const;
  /// Coefficient of p^i in the Teichmüller expansion; throws beyond precision.
  FqElem digit(int i) const;
  std::string to_string() const;

 private:
  int v_;
  WittVector body_;
};

using WindowMatrix = std::vector<std::vector<PadicWindow>>;
WindowMatrix window_mul(const WindowMatrix& A, const WindowMatrix& B);

/// Evaluates both sides of the factorization of the Weyl element
///   [[0,-1],[1,0]] = [[1,-p^-1],[0,1]] [[1,0],[p,1]] [[1,-p^-1],[0,1]] diag(p^-1, p)
/// over windows of body length h and compares entrywise.
bool verify_famous_identity(std::uint32_t p, unsigned h);

/// JSON-friendly coordinate strings: an integer for r = 1, "c0:c1:...:c_{r-1}" otherwise.
std::vector<std::string> witt_to_strings(const WittVector& a);
WittVector witt_from_strings(const Fq& field, const std::vector<std::string>& s);

}  // namespace agr
