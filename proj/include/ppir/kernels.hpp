#pragma once

#include "ppir/matrix.hpp"

namespace ppir::kernels {

// out(r, l) = sum_i data(i, l) * coeffs(i, r) over GF(q), i.e. coeffs^T * data.
//
// Columns of `data` are independent symbol positions; this is the inner loop of
// both parity generation (coeffs = parity columns of a generator) and erasure
// decoding (coeffs = inverse of the known-column submatrix).
Matrix combine_serial(const Matrix& coeffs, const Matrix& data, const PrimeField& field);

// Same contract, symbol positions split across OpenMP threads. Falls back to
// the serial loop for narrow inputs.
Matrix combine_parallel(const Matrix& coeffs, const Matrix& data, const PrimeField& field);

inline Matrix combine(const Matrix& coeffs, const Matrix& data, const PrimeField& field) {
  return combine_parallel(coeffs, data, field);
}

int max_threads() noexcept;

}  // namespace ppir::kernels
