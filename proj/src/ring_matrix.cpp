#include "agr/ring_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace agr {

RingMatrix identity_matrix(const CoefficientRing& R, unsigned n) {
  RingMatrix I(n, n);
  for (unsigned i = 0; i < n; ++i) I(i, i) = R.one();
  return I;
}

RingMatrix mat_mul(const CoefficientRing& R, const RingMatrix& A, const RingMatrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  RingMatrix C(A.rows, B.cols);
  for (unsigned i = 0; i < A.rows; ++i)
    for (unsigned k = 0; k < A.cols; ++k) {
      const RingElem& aik = A(i, k);
      if (R.is_zero(aik)) continue;
      for (unsigned j = 0; j < B.cols; ++j) C(i, j) = R.add(C(i, j), R.mul(aik, B(k, j)));
    }
  return C;
}

RingMatrix mat_sub(const CoefficientRing& R, const RingMatrix& A, const RingMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mat_sub: shape mismatch");
  RingMatrix C(A.rows, A.cols);
  for (std::size_t k = 0; k < A.a.size(); ++k) C.a[k] = R.sub(A.a[k], B.a[k]);
  return C;
}

RingMatrix mat_scale(const CoefficientRing& R, const RingElem& c, const RingMatrix& A) {
  RingMatrix C = A;
  for (auto& x : C.a) x = R.mul(c, x);
  return C;
}

RingMatrix mat_frobenius(const CoefficientRing& R, const RingMatrix& A) {
  RingMatrix C = A;
  for (auto& x : C.a) x = R.frobenius(x);
  return C;
}

namespace {

// Eliminates with a pivot of minimal valuation in the whole remaining block.
// Every other entry then has valuation >= v, so the quotient a/pivot is exact
// modulo π^{h-v} and its error is killed by the row factor.
template <class OnPivot>
bool full_pivot_eliminate(const CoefficientRing& R, RingMatrix& A, OnPivot on_pivot) {
  const unsigned n = std::min(A.rows, A.cols);
  for (unsigned k = 0; k < n; ++k) {
    unsigned best = R.h(), bi = k, bj = k;
    for (unsigned i = k; i < A.rows && best; ++i)
      for (unsigned j = k; j < A.cols; ++j) {
        unsigned v = R.valuation(A(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (!v) break;
        }
      }
    if (best == R.h()) {
      for (unsigned t = k; t < n; ++t) on_pivot(R.h(), RingElem{}, false);
      return false;
    }
    bool swapped = false;
    if (bi != k) {
      for (unsigned j = 0; j < A.cols; ++j) std::swap(A(bi, j), A(k, j));
      swapped = !swapped;
    }
    if (bj != k) {
      for (unsigned i = 0; i < A.rows; ++i) std::swap(A(i, bj), A(i, k));
      swapped = !swapped;
    }
    const RingElem piv = A(k, k);
    on_pivot(best, piv, swapped);
    RingElem uinv = R.unit_inverse(R.shift_down(piv, best));
    for (unsigned i = k + 1; i < A.rows; ++i) {
      if (R.is_zero(A(i, k))) continue;
      RingElem f = R.mul(R.shift_down(A(i, k), best), uinv);
      for (unsigned j = k; j < A.cols; ++j) A(i, j) = R.sub(A(i, j), R.mul(f, A(k, j)));
    }
    for (unsigned j = k + 1; j < A.cols; ++j) {
      if (R.is_zero(A(k, j))) continue;
      RingElem f = R.mul(R.shift_down(A(k, j), best), uinv);
      for (unsigned i = k; i < A.rows; ++i) A(i, j) = R.sub(A(i, j), R.mul(f, A(i, k)));
    }
  }
  return true;
}

}  // namespace

RingElem mat_det(const CoefficientRing& R, const RingMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("mat_det: matrix not square");
  if (A.rows == 0) return R.one();
  if (A.rows == 1) return A(0, 0);
  if (A.rows == 2) return R.sub(R.mul(A(0, 0), A(1, 1)), R.mul(A(0, 1), A(1, 0)));
  RingMatrix M = A;
  RingElem det = R.one();
  bool neg = false;
  bool full = full_pivot_eliminate(R, M, [&](unsigned, const RingElem& piv, bool swapped) {
    det = R.mul(det, piv);
    neg ^= swapped;
  });
  if (!full) return R.zero();
  return neg ? R.neg(det) : det;
}

RingMatrix mat_adj(const CoefficientRing& R, const RingMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("mat_adj: matrix not square");
  const unsigned n = A.rows;
  RingMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = R.one();
    return adj;
  }
  RingMatrix minor(n - 1, n - 1);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      for (unsigned r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (unsigned c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = A(r, c);
        }
        ++mr;
      }
      RingElem d = mat_det(R, minor);
      adj(j, i) = ((i + j) % 2) ? R.neg(d) : d;
    }
  return adj;
}

std::vector<unsigned> smith_valuations(const CoefficientRing& R, RingMatrix A) {
  std::vector<unsigned> v;
  full_pivot_eliminate(R, A, [&](unsigned val, const RingElem&, bool) { v.push_back(val); });
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace agr
