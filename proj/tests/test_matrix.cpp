#include "ppir/error.hpp"
#include "ppir/kernels.hpp"
#include "ppir/matrix.hpp"

#include <doctest.h>

#include <random>

using namespace ppir;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint32_t q, std::mt19937_64& rng) {
  Matrix m(r, c);
  std::uniform_int_distribution<Symbol> pick(0, q - 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = pick(rng);
  return m;
}

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

// out(r, l) = sum_i data(i, l) coeffs(i, r), written out directly
Matrix naive_combine(const Matrix& coeffs, const Matrix& data, std::uint32_t q) {
  Matrix out(coeffs.cols(), data.cols());
  for (std::size_t r = 0; r < coeffs.cols(); ++r)
    for (std::size_t l = 0; l < data.cols(); ++l) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < data.rows(); ++i) s = (s + std::uint64_t{data(i, l)} * coeffs(i, r)) % q;
      out(r, l) = static_cast<Symbol>(s);
    }
  return out;
}

}  // namespace

TEST_CASE("inverse times matrix is the identity") {
  std::mt19937_64 rng(7);
  for (std::uint32_t q : {5u, 11u, 13u, 2147483647u}) {
    const PrimeField f(q);
    for (std::size_t n = 1; n <= 6; ++n) {
      for (int t = 0; t < 20; ++t) {
        const Matrix m = random_matrix(n, n, q, rng);
        if (rank(m, f) < n) {
          bool threw = false;
          try {
            invert(m, f);
          } catch (const Error& e) {
            threw = e.code() == Errc::SingularSubmatrix;
          }
          CHECK(threw);
          continue;
        }
        CHECK(multiply(m, invert(m, f), f) == identity(n));
        CHECK(multiply(invert(m, f), m, f) == identity(n));
      }
    }
  }
}

TEST_CASE("rank of structured matrices") {
  const PrimeField f(11);
  CHECK(rank(Matrix{{1, 2}, {2, 4}}, f) == 1);
  CHECK(rank(Matrix{{1, 2}, {2, 5}}, f) == 2);
  CHECK(rank(Matrix{{0, 0}, {0, 0}}, f) == 0);
  CHECK(rank(identity(5), f) == 5);
}

TEST_CASE("column selection and row export") {
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  const std::vector<std::size_t> cols{2, 0};
  CHECK(m.select_columns(cols) == Matrix{{3, 1}, {6, 4}});
  CHECK(m.to_rows() == std::vector<std::vector<Symbol>>{{1, 2, 3}, {4, 5, 6}});
  CHECK(Matrix::from_rows({{1, 2}, {3, 4}}) == Matrix{{1, 2}, {3, 4}});
}

TEST_CASE("serial and parallel combine agree with the direct sum") {
  std::mt19937_64 rng(99);
  for (std::uint32_t q : {11u, 65521u, 2147483647u}) {
    const PrimeField f(q);
    for (std::size_t cols : {1u, 7u, 255u, 256u, 1000u, 4097u}) {
      const Matrix coeffs = random_matrix(6, 4, q, rng);
      const Matrix data = random_matrix(6, cols, q, rng);
      const Matrix expected = naive_combine(coeffs, data, q);
      CHECK(kernels::combine_serial(coeffs, data, f) == expected);
      CHECK(kernels::combine_parallel(coeffs, data, f) == expected);
      CHECK(kernels::combine(coeffs, data, f) == expected);
    }
  }
  CHECK(kernels::max_threads() >= 1);
}
