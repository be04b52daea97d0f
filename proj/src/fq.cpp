#include "agr/fq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

namespace agr {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

// Multiply the encoded polynomial a by X modulo the monic modulus.
std::uint32_t times_x(std::uint32_t a, std::uint32_t p, unsigned r,
                      const std::vector<std::uint32_t>& f,
                      const std::vector<std::uint32_t>& pw) {
  std::uint32_t top = a / pw[r - 1];
  std::uint32_t shifted = (a % pw[r - 1]) * p;
  if (top == 0) return shifted;
  // X^r = -sum f_i X^i
  std::uint32_t out = 0;
  for (unsigned i = 0; i < r; ++i) {
    std::uint32_t d = (shifted / pw[i]) % p;
    std::uint32_t sub = (top * f[i]) % p;
    out += ((d + p - sub) % p) * pw[i];
  }
  return out;
}

}  // namespace

Fq::Fq(std::uint32_t p, unsigned r) : p_(p), r_(r) {
  if (!is_prime(p)) throw std::invalid_argument("Fq: characteristic must be prime");
  if (r == 0) throw std::invalid_argument("Fq: extension degree must be positive");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < r; ++i) {
    pow_p_.push_back(std::uint32_t(q));
    q *= p;
    if (q > kMaxOrder) throw std::invalid_argument("Fq: field too large");
  }
  q_ = std::uint32_t(q);

  // Lexicographically first f (reading c_0 + c_1 p + ... as an integer) for which
  // X has multiplicative order q-1.
  std::vector<std::uint32_t> f(r);
  exp_.assign(q_ - 1 == 0 ? 1 : q_ - 1, 0);
  bool found = false;
  for (std::uint32_t code = 0; code < q_ && !found; ++code) {
    for (unsigned i = 0; i < r; ++i) f[i] = (code / pow_p_[i]) % p;
    if (f[0] == 0) continue;
    std::uint32_t x = (r == 1) ? (p - f[0]) % p : p;
    if (q_ == 2) {
      if (x != 1) continue;
      exp_[0] = 1;
      found = true;
      break;
    }
    std::uint32_t cur = 1;
    std::uint32_t order = 0;
    bool ok = true;
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      exp_[k] = cur;
      cur = (r == 1) ? std::uint32_t((std::uint64_t(cur) * x) % p)
                     : times_x(cur, p, r, f, pow_p_);
      order = k + 1;
      if (cur == 1) break;
      if (cur == 0) { ok = false; break; }
    }
    if (ok && cur == 1 && order == q_ - 1) found = true;
  }
  if (!found) throw std::logic_error("Fq: no primitive polynomial found");
  modulus_ = f;

  log_.assign(q_, 0);
  for (std::uint32_t k = 0; k < exp_.size(); ++k) log_[exp_[k]] = k;
  neg_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    std::uint32_t out = 0;
    for (unsigned i = 0; i < r_; ++i) out += ((p_ - digit(a, i)) % p_) * pow_p_[i];
    neg_[a] = out;
  }
  if (p_ != 2 && q_ <= 1024) {
    add_table_.resize(std::size_t(q_) * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) add_table_[std::size_t(a) * q_ + b] = add_slow(a, b);
  }
  frob_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) frob_[a] = pow(a, p_);
}

const Fq& Fq::get(std::uint32_t p, unsigned r) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::unique_ptr<Fq>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[{p, r}];
  if (!slot) slot.reset(new Fq(p, r));
  return *slot;
}

std::uint32_t Fq::digit(std::uint32_t a, unsigned i) const { return (a / pow_p_[i]) % p_; }

std::uint32_t Fq::add_slow(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = 0;
  for (unsigned i = 0; i < r_; ++i) out += ((digit(a, i) + digit(b, i)) % p_) * pow_p_[i];
  return out;
}

std::uint32_t Fq::neg(std::uint32_t a) const { return neg_[a]; }

std::uint32_t Fq::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("Fq: inverse of zero");
  if (q_ == 2) return 1;
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

std::uint32_t Fq::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (q_ == 2) return 1;
  std::uint64_t l = (std::uint64_t(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

FqElem Fq::from_int(std::int64_t a) const {
  std::int64_t m = a % std::int64_t(p_);
  if (m < 0) m += p_;
  return {this, std::uint32_t(m)};
}

FqElem Fq::from_raw(std::uint32_t v) const {
  if (v >= q_) throw std::out_of_range("Fq: raw value out of range");
  return {this, v};
}

FqElem Fq::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() != r_) throw std::invalid_argument("Fq: wrong number of coordinates");
  std::uint32_t v = 0;
  for (unsigned i = 0; i < r_; ++i) v += (c[i] % p_) * pow_p_[i];
  return {this, v};
}

FqElem Fq::random(std::mt19937_64& rng) const {
  return {this, std::uint32_t(std::uniform_int_distribution<std::uint32_t>(0, q_ - 1)(rng))};
}

std::string Fq::describe() const {
  std::ostringstream os;
  os << "F_" << q_ << " = F_" << p_ << "[X]/(X^" << r_;
  for (unsigned i = r_; i-- > 0;)
    if (modulus_[i]) os << " + " << modulus_[i] << (i ? "X^" + std::to_string(i) : "");
  os << ")";
  return os.str();
}

namespace {
void same_field(const FqElem& a, const FqElem& b) {
  if (a.field != b.field) throw std::invalid_argument("FqElem: mixed fields");
}
}  // namespace

FqElem& FqElem::operator+=(const FqElem& o) {
  same_field(*this, o);
  v = field->add(v, o.v);
  return *this;
}
FqElem& FqElem::operator-=(const FqElem& o) {
  same_field(*this, o);
  v = field->sub(v, o.v);
  return *this;
}
FqElem& FqElem::operator*=(const FqElem& o) {
  same_field(*this, o);
  v = field->mul(v, o.v);
  return *this;
}
FqElem FqElem::operator-() const { return {field, field->neg(v)}; }
FqElem FqElem::inverse() const { return {field, field->inv(v)}; }
FqElem FqElem::pow(std::uint64_t e) const { return {field, field->pow(v, e)}; }
FqElem FqElem::frobenius() const { return {field, field->frob(v)}; }

std::vector<std::uint32_t> FqElem::coords() const {
  std::vector<std::uint32_t> c(field->r());
  for (unsigned i = 0; i < field->r(); ++i) c[i] = field->digit(v, i);
  return c;
}

std::ostream& operator<<(std::ostream& os, const FqElem& x) {
  if (x.field->r() == 1) return os << x.v;
  os << "(";
  auto c = x.coords();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  return os << ")";
}

}  // namespace agr
