#include "agr/witt.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace agr {

WittVector::WittVector(const Fq& field, std::vector<FqElem> coords) : field_(&field), x_(std::move(coords)) {
  if (x_.empty()) throw std::invalid_argument("WittVector: length must be positive");
  for (const auto& c : x_)
    if (c.field != field_) throw std::invalid_argument("WittVector: coordinate from a different field");
}

WittVector WittVector::zero(const Fq& field, unsigned h) { return {field, std::vector<FqElem>(h, field.zero())}; }

WittVector WittVector::one(const Fq& field, unsigned h) {
  auto w = zero(field, h);
  w.x_[0] = field.one();
  return w;
}

WittVector WittVector::from_int(const Fq& field, unsigned h, std::int64_t n) {
  auto R = CoefficientRing::mixed(field.p(), field.r(), h);
  return from_ring(R, R.from_int(n));
}

WittVector WittVector::from_ring(const CoefficientRing& R, const RingElem& a) {
  if (R.kind() != RingKind::mixed) throw std::invalid_argument("WittVector::from_ring: equal-characteristic ring");
  return {R.field(), R.witt_coordinates(a)};
}

WittVector WittVector::truncate(unsigned m) const {
  if (m == 0 || m > h()) throw std::invalid_argument("WittVector::truncate: bad length");
  return {*field_, std::vector<FqElem>(x_.begin(), x_.begin() + m)};
}

bool WittVector::is_zero() const {
  return std::all_of(x_.begin(), x_.end(), [](const FqElem& c) { return c.is_zero(); });
}

namespace {

CoefficientRing common_ring(const WittVector& a, const WittVector& b) {
  if (&a.field() != &b.field()) throw std::invalid_argument("Witt arithmetic: different base fields");
  if (a.h() != b.h()) throw std::invalid_argument("Witt arithmetic: different lengths");
  return a.ring();
}

}  // namespace

WittVector witt_add(const WittVector& a, const WittVector& b) {
  auto R = common_ring(a, b);
  return WittVector::from_ring(R, R.add(a.to_ring(), b.to_ring()));
}

WittVector witt_sub(const WittVector& a, const WittVector& b) {
  auto R = common_ring(a, b);
  return WittVector::from_ring(R, R.sub(a.to_ring(), b.to_ring()));
}

WittVector witt_neg(const WittVector& a) {
  auto R = a.ring();
  return WittVector::from_ring(R, R.neg(a.to_ring()));
}

WittVector witt_mul(const WittVector& a, const WittVector& b) {
  auto R = common_ring(a, b);
  return WittVector::from_ring(R, R.mul(a.to_ring(), b.to_ring()));
}

WittVector teichmuller(const FqElem& x, unsigned h) {
  std::vector<FqElem> c(h, x.field->zero());
  c.at(0) = x;
  return {*x.field, std::move(c)};
}

WittVector frobenius_sigma(const WittVector& a) {
  std::vector<FqElem> c = a.coords();
  for (auto& x : c) x = x.frobenius();
  return {a.field(), std::move(c)};
}

WittVector times_p(const WittVector& a) {
  std::vector<FqElem> c(a.h(), a.field().zero());
  for (unsigned i = 1; i < a.h(); ++i) c[i] = a[i - 1].frobenius();
  return {a.field(), std::move(c)};
}

RingMatrix to_ring_matrix(const CoefficientRing& R, const WittMatrix& A) {
  const unsigned n = unsigned(A.size());
  const unsigned m = n ? unsigned(A[0].size()) : 0;
  RingMatrix M(n, m);
  for (unsigned i = 0; i < n; ++i) {
    if (A[i].size() != m) throw std::invalid_argument("matrix rows of unequal length");
    for (unsigned j = 0; j < m; ++j) {
      if (A[i][j].h() != R.h() || &A[i][j].field() != &R.field())
        throw std::invalid_argument("matrix entry does not match the ring");
      M(i, j) = A[i][j].to_ring();
    }
  }
  return M;
}

WittMatrix from_ring_matrix(const CoefficientRing& R, const RingMatrix& A) {
  WittMatrix M(A.rows);
  for (unsigned i = 0; i < A.rows; ++i)
    for (unsigned j = 0; j < A.cols; ++j) M[i].push_back(WittVector::from_ring(R, A(i, j)));
  return M;
}

std::vector<FqElem> det_components(const WittMatrix& A) {
  if (A.empty()) throw std::invalid_argument("det_components: empty matrix");
  for (const auto& row : A)
    if (row.size() != A.size()) throw std::invalid_argument("det_components: matrix not square");
  auto R = A[0][0].ring();
  return R.witt_coordinates(mat_det(R, to_ring_matrix(R, A)));
}

// ---- PadicWindow ----------------------------------------------------------

namespace {

// p^k · body re-expressed with `len` digits; digits past the known range are
// padded with zeros and must be irrelevant at the caller's precision.
WittVector shifted(const WittVector& body, unsigned k, unsigned len) {
  std::vector<FqElem> c(len, body.field().zero());
  for (unsigned i = 0; i < body.h() && i + k < len; ++i) c[i + k] = body[i];
  return {body.field(), std::move(c)};
}

unsigned body_valuation(const WittVector& b) {
  unsigned i = 0;
  while (i < b.h() && b[i].is_zero()) ++i;
  return i;
}

}  // namespace

PadicWindow::PadicWindow(int v, WittVector body) : v_(v), body_(std::move(body)) {}

PadicWindow PadicWindow::from_int(const Fq& field, unsigned h, std::int64_t n) {
  return {0, WittVector::from_int(field, h, n)};
}

PadicWindow PadicWindow::uniformizer_power(const Fq& field, unsigned h, int k) {
  return {k, WittVector::one(field, h)};
}

int PadicWindow::valuation() const {
  if (!known_nonzero()) throw PrecisionError("valuation: no nonzero digit within precision");
  return v_ + int(body_valuation(body_));
}

PadicWindow PadicWindow::normalized() const {
  unsigned k = body_valuation(body_);
  if (k == 0 || k == body_.h()) return *this;
  std::vector<FqElem> c(body_.coords().begin() + k, body_.coords().end());
  return {v_ + int(k), WittVector(body_.field(), std::move(c))};
}

PadicWindow PadicWindow::operator+(const PadicWindow& o) const {
  if (&body_.field() != &o.body_.field()) throw std::invalid_argument("PadicWindow: different base fields");
  const int v = std::min(v_, o.v_);
  const int prec = std::min(precision(), o.precision());
  if (prec - v < 1) throw PrecisionError("PadicWindow: sum has no known digits");
  const unsigned len = unsigned(prec - v);
  auto a = shifted(body_, unsigned(v_ - v), len);
  auto b = shifted(o.body_, unsigned(o.v_ - v), len);
  return PadicWindow(v, witt_add(a, b)).normalized();
}

PadicWindow PadicWindow::operator-() const { return {v_, witt_neg(body_)}; }

PadicWindow PadicWindow::operator-(const PadicWindow& o) const { return *this + (-o); }

PadicWindow PadicWindow::operator*(const PadicWindow& o) const {
  if (&body_.field() != &o.body_.field()) throw std::invalid_argument("PadicWindow: different base fields");
  const PadicWindow a = normalized(), b = o.normalized();
  const unsigned alpha = body_valuation(a.body_), beta = body_valuation(b.body_);
  // (A + O(p^ha))(B + O(p^hb)) = AB + O(p^{min(ha + v(B), hb + v(A))})
  const unsigned len = std::min(a.body_.h() + beta, b.body_.h() + alpha);
  auto prod = witt_mul(shifted(a.body_, 0, len), shifted(b.body_, 0, len));
  return PadicWindow(a.v_ + b.v_, prod).normalized();
}

PadicWindow PadicWindow::inverse() const {
  const PadicWindow a = normalized();
  if (a.body_[0].is_zero())
    throw PrecisionError("PadicWindow: inverse of a value with no known unit part");
  auto R = a.body_.ring();
  return {-a.v_, WittVector::from_ring(R, R.unit_inverse(a.body_.to_ring()))};
}

bool PadicWindow::equals(const PadicWindow& o) const { return !(*this - o).known_nonzero(); }

FqElem PadicWindow::digit(int i) const {
  if (i >= precision()) throw PrecisionError("PadicWindow: digit beyond known precision");
  if (i < v_) return body_.field().zero();
  return body_[unsigned(i - v_)];
}

std::string PadicWindow::to_string() const {
  std::ostringstream os;
  os << "p^" << v_ << "*(";
  for (unsigned i = 0; i < body_.h(); ++i) os << (i ? "," : "") << body_[i];
  os << ") mod p^" << precision();
  return os.str();
}

WindowMatrix window_mul(const WindowMatrix& A, const WindowMatrix& B) {
  if (A.empty() || B.empty() || A[0].size() != B.size()) throw std::invalid_argument("window_mul: shape mismatch");
  WindowMatrix C;
  for (std::size_t i = 0; i < A.size(); ++i) {
    C.emplace_back();
    for (std::size_t j = 0; j < B[0].size(); ++j) {
      PadicWindow acc = A[i][0] * B[0][j];
      for (std::size_t k = 1; k < B.size(); ++k) acc = acc + A[i][k] * B[k][j];
      C[i].push_back(acc);
    }
  }
  return C;
}

bool verify_famous_identity(std::uint32_t p, unsigned h) {
  if (h < 2) throw std::invalid_argument("verify_famous_identity: need h >= 2");
  const Fq& F = Fq::get(p, 1);
  auto I = [&](std::int64_t n) { return PadicWindow::from_int(F, h, n); };
  auto P = [&](int k) { return PadicWindow::uniformizer_power(F, h, k); };
  const PadicWindow minus_pinv = -P(-1);
  WindowMatrix U = {{I(1), minus_pinv}, {I(0), I(1)}};
  WindowMatrix L = {{I(1), I(0)}, {P(1), I(1)}};
  WindowMatrix T = {{P(-1), I(0)}, {I(0), P(1)}};
  WindowMatrix rhs = window_mul(window_mul(window_mul(U, L), U), T);
  WindowMatrix lhs = {{I(0), I(-1)}, {I(1), I(0)}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (rhs[i][j].precision() < 1) return false;
      if (!rhs[i][j].equals(lhs[i][j])) return false;
    }
  return true;
}

std::vector<std::string> witt_to_strings(const WittVector& a) {
  std::vector<std::string> out;
  for (const auto& x : a.coords()) {
    if (a.field().r() == 1) {
      out.push_back(std::to_string(x.v));
      continue;
    }
    std::string s;
    auto c = x.coords();
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ":" : "") + std::to_string(c[i]);
    out.push_back(s);
  }
  return out;
}

WittVector witt_from_strings(const Fq& field, const std::vector<std::string>& s) {
  std::vector<FqElem> x;
  for (const auto& str : s) {
    std::vector<std::uint32_t> c;
    std::stringstream ss(str);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
      std::size_t pos = 0;
      long long val = std::stoll(tok, &pos);
      if (pos != tok.size() || val < 0 || val >= (long long)field.p())
        throw std::invalid_argument("witt_from_strings: bad coordinate '" + str + "'");
      c.push_back(std::uint32_t(val));
    }
    if (field.r() == 1 && c.size() == 1)
      x.push_back(field.from_raw(c[0]));
    else
      x.push_back(field.from_coords(c));
  }
  return {field, std::move(x)};
}

}  // namespace agr
