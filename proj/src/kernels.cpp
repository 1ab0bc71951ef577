#include "ppir/kernels.hpp"

#include "ppir/error.hpp"

#include <omp.h>

#include <cstdint>

namespace ppir::kernels {

namespace {

constexpr std::size_t kParallelMinColumns = 256;

void check_shapes(const Matrix& coeffs, const Matrix& data) {
  if (coeffs.rows() != data.rows())
    throw Error(Errc::DimensionMismatch, "coefficient rows " + std::to_string(coeffs.rows()) +
                                             " vs data rows " + std::to_string(data.rows()));
}

inline void combine_column(const Matrix& coeffs, const Matrix& data, std::uint64_t q, std::size_t l,
                           Matrix& out) {
  const std::size_t k = data.rows();
  for (std::size_t r = 0; r < coeffs.cols(); ++r) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < k; ++i) acc = (acc + std::uint64_t{data(i, l)} * coeffs(i, r)) % q;
    out(r, l) = static_cast<Symbol>(acc);
  }
}

}  // namespace

Matrix combine_serial(const Matrix& coeffs, const Matrix& data, const PrimeField& field) {
  check_shapes(coeffs, data);
  Matrix out(coeffs.cols(), data.cols());
  const std::uint64_t q = field.order();
  for (std::size_t l = 0; l < data.cols(); ++l) combine_column(coeffs, data, q, l, out);
  return out;
}

Matrix combine_parallel(const Matrix& coeffs, const Matrix& data, const PrimeField& field) {
  check_shapes(coeffs, data);
  Matrix out(coeffs.cols(), data.cols());
  const std::uint64_t q = field.order();
  const auto width = static_cast<std::int64_t>(data.cols());
#pragma omp parallel for schedule(static) if (data.cols() >= kParallelMinColumns)
  for (std::int64_t l = 0; l < width; ++l)
    combine_column(coeffs, data, q, static_cast<std::size_t>(l), out);
  return out;
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace ppir::kernels
