#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace agr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Laurent polynomial with integer coefficients in one variable.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly constant(std::int64_t c) { return monomial(0, c); }
  static LaurentPoly monomial(int e, std::int64_t c = 1);
  /// c_0 + c_1 x + ... from a coefficient list.
  static LaurentPoly from_coeffs(const std::vector<std::int64_t>& c, int low = 0);

  bool is_zero() const { return c_.empty(); }
  int min_degree() const;
  int max_degree() const;
  std::int64_t coeff(int e) const;
  const std::map<int, std::int64_t>& terms() const { return c_; }

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator-() const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly scaled(std::int64_t k) const;
  LaurentPoly shifted(int k) const;
  /// x -> x^{-1}
  LaurentPoly bar() const;
  /// x -> -x
  LaurentPoly negate_variable() const;
  /// x -> x^k, k != 0
  LaurentPoly substitute_power(int k) const;
  /// Terms with exponent in [lo, hi].
  LaurentPoly truncated(int lo, int hi) const;
  /// Exact division by a divisor with unit leading coefficient; throws if inexact.
  LaurentPoly divide_exact(const LaurentPoly& d) const;
  Rational evaluate(const Rational& x) const;
  std::vector<std::int64_t> coeffs_from(int low, int high) const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;
  std::string to_string(const std::string& var = "q") const;

 private:
  void normalize();
  std::map<int, std::int64_t> c_;
};

/// Polynomial through (x_i, y_i), by Newton divided differences over Q.
std::vector<Rational> interpolate(const std::vector<std::pair<std::int64_t, BigInt>>& points);

struct PolyFit {
  bool integral = false;            // all coefficients are integers
  int degree = -1;                  // -1 for the zero polynomial
  std::vector<Rational> coeffs;     // ascending
  bool verified = true;             // reproduces the held-out points
  Rational leading() const { return degree < 0 ? Rational(0) : coeffs[std::size_t(degree)]; }
  std::string to_string(const std::string& var = "q") const;
};

/// Fits a polynomial of degree <= max_degree to the first max_degree + 1 points
/// and checks the rest.
PolyFit fit_polynomial(const std::vector<std::pair<std::int64_t, BigInt>>& points, int max_degree);

}  // namespace agr
