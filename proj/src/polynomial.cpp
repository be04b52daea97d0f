#include "agr/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace agr {

LaurentPoly LaurentPoly::monomial(int e, std::int64_t c) {
  LaurentPoly p;
  if (c) p.c_[e] = c;
  return p;
}

LaurentPoly LaurentPoly::from_coeffs(const std::vector<std::int64_t>& c, int low) {
  LaurentPoly p;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) p.c_[low + int(i)] = c[i];
  return p;
}

void LaurentPoly::normalize() {
  for (auto it = c_.begin(); it != c_.end();) it = it->second ? std::next(it) : c_.erase(it);
}

int LaurentPoly::min_degree() const {
  if (c_.empty()) throw std::domain_error("LaurentPoly: degree of zero");
  return c_.begin()->first;
}

int LaurentPoly::max_degree() const {
  if (c_.empty()) throw std::domain_error("LaurentPoly: degree of zero");
  return c_.rbegin()->first;
}

std::int64_t LaurentPoly::coeff(int e) const {
  auto it = c_.find(e);
  return it == c_.end() ? 0 : it->second;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto [e, c] : o.c_) r.c_[e] += c;
  r.normalize();
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [e, c] : r.c_) c = -c;
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto [e1, c1] : c_)
    for (auto [e2, c2] : o.c_) r.c_[e1 + e2] += c1 * c2;
  r.normalize();
  return r;
}

LaurentPoly LaurentPoly::scaled(std::int64_t k) const {
  LaurentPoly r;
  if (!k) return r;
  for (auto [e, c] : c_) r.c_[e] = c * k;
  return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r;
  for (auto [e, c] : c_) r.c_[e + k] = c;
  return r;
}

LaurentPoly LaurentPoly::bar() const { return substitute_power(-1); }

LaurentPoly LaurentPoly::negate_variable() const {
  LaurentPoly r;
  for (auto [e, c] : c_) r.c_[e] = (e % 2) ? -c : c;
  return r;
}

LaurentPoly LaurentPoly::substitute_power(int k) const {
  if (!k) throw std::invalid_argument("substitute_power: k = 0");
  LaurentPoly r;
  for (auto [e, c] : c_) r.c_[e * k] = c;
  return r;
}

LaurentPoly LaurentPoly::truncated(int lo, int hi) const {
  LaurentPoly r;
  for (auto [e, c] : c_)
    if (e >= lo && e <= hi) r.c_[e] = c;
  return r;
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& d) const {
  if (d.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
  const int dtop = d.max_degree();
  const std::int64_t lead = d.coeff(dtop);
  if (lead != 1 && lead != -1) throw std::domain_error("LaurentPoly: divisor leading coefficient not a unit");
  LaurentPoly rem = *this, quot;
  const int dlow = d.min_degree();
  while (!rem.is_zero()) {
    int top = rem.max_degree();
    if (top - dtop < min_degree() - dlow) throw std::domain_error("LaurentPoly: inexact division");
    LaurentPoly t = monomial(top - dtop, rem.coeff(top) * lead);
    quot += t;
    rem -= t * d;
  }
  return quot;
}

Rational LaurentPoly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto [e, c] : c_) {
    Rational t = c;
    Rational base = e >= 0 ? x : Rational(1) / x;
    for (int i = 0; i < (e >= 0 ? e : -e); ++i) t *= base;
    acc += t;
  }
  return acc;
}

std::vector<std::int64_t> LaurentPoly::coeffs_from(int low, int high) const {
  std::vector<std::int64_t> v;
  for (int e = low; e <= high; ++e) v.push_back(coeff(e));
  return v;
}

std::string LaurentPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    auto [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    std::int64_t a = c < 0 ? -c : c;
    if (e == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

std::vector<Rational> interpolate(const std::vector<std::pair<std::int64_t, BigInt>>& points) {
  const std::size_t m = points.size();
  std::vector<Rational> dd(m);
  for (std::size_t i = 0; i < m; ++i) dd[i] = Rational(points[i].second);
  for (std::size_t k = 1; k < m; ++k)
    for (std::size_t i = m - 1; i >= k; --i) {
      Rational den = points[i].first - points[i - k].first;
      if (den == 0) throw std::invalid_argument("interpolate: repeated abscissa");
      dd[i] = (dd[i] - dd[i - 1]) / den;
    }
  // Expand the Newton form into the monomial basis.
  std::vector<Rational> poly{dd[m - 1]};
  for (std::size_t k = m - 1; k-- > 0;) {
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= poly[j] * points[k].first;
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  return poly;
}

PolyFit fit_polynomial(const std::vector<std::pair<std::int64_t, BigInt>>& points, int max_degree) {
  if (max_degree < 0 || points.size() < std::size_t(max_degree + 1))
    throw std::invalid_argument("fit_polynomial: not enough points");
  std::vector<std::pair<std::int64_t, BigInt>> head(points.begin(), points.begin() + max_degree + 1);
  PolyFit fit;
  fit.coeffs = interpolate(head);
  fit.degree = int(fit.coeffs.size()) - 1;
  fit.integral = true;
  for (const auto& c : fit.coeffs)
    if (denominator(c) != 1) fit.integral = false;
  for (std::size_t i = std::size_t(max_degree) + 1; i < points.size(); ++i) {
    Rational v = 0, x = points[i].first, xp = 1;
    for (const auto& c : fit.coeffs) {
      v += c * xp;
      xp *= x;
    }
    if (v != Rational(points[i].second)) fit.verified = false;
  }
  return fit;
}

std::string PolyFit::to_string(const std::string& var) const {
  if (degree < 0) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = degree; e >= 0; --e) {
    const Rational& c = coeffs[std::size_t(e)];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational a = c < 0 ? Rational(-c) : c;
    if (e == 0 || a != 1) os << a << (e ? "*" : "");
    if (e) os << var << (e > 1 ? "^" + std::to_string(e) : "");
  }
  return os.str();
}

}  // namespace agr
