#pragma once

#include <vector>

#include "agr/coefficient_ring.hpp"

namespace agr {

/// Dense matrix over a CoefficientRing, row-major.
struct RingMatrix {
  unsigned rows = 0, cols = 0;
  std::vector<RingElem> a;

  RingMatrix() = default;
  RingMatrix(unsigned r, unsigned c) : rows(r), cols(c), a(std::size_t(r) * c) {}
  RingElem& operator()(unsigned i, unsigned j) { return a[std::size_t(i) * cols + j]; }
  const RingElem& operator()(unsigned i, unsigned j) const { return a[std::size_t(i) * cols + j]; }
  friend bool operator==(const RingMatrix&, const RingMatrix&) = default;
};

RingMatrix identity_matrix(const CoefficientRing& R, unsigned n);
RingMatrix mat_mul(const CoefficientRing& R, const RingMatrix& A, const RingMatrix& B);
RingMatrix mat_sub(const CoefficientRing& R, const RingMatrix& A, const RingMatrix& B);
RingMatrix mat_scale(const CoefficientRing& R, const RingElem& c, const RingMatrix& A);
RingMatrix mat_frobenius(const CoefficientRing& R, const RingMatrix& A);

/// Determinant by fully pivoted elimination; exact in O/π^h.
RingElem mat_det(const CoefficientRing& R, const RingMatrix& A);

/// Adjugate by cofactors, so adj(A)·A = det(A)·Id holds exactly.
RingMatrix mat_adj(const CoefficientRing& R, const RingMatrix& A);

/// Valuations of the elementary divisors, increasing.  Divisors that vanish in
/// O/π^h are reported as h; callers must treat h as "unknown, at least h".
std::vector<unsigned> smith_valuations(const CoefficientRing& R, RingMatrix A);

}  // namespace agr
