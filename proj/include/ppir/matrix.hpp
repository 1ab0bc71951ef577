#pragma once

#include "ppir/field.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ppir {

// Dense row-major matrix of canonical symbols. The field lives with whoever
// interprets the entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::initializer_list<std::initializer_list<Symbol>> rows);
  static Matrix from_rows(const std::vector<std::vector<Symbol>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Symbol& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  Symbol operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<Symbol> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Symbol> data() const noexcept { return data_; }

  Matrix select_columns(std::span<const std::size_t> columns) const;
  std::vector<std::vector<Symbol>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> data_;
};

// Gauss-Jordan over GF(q). Throws Errc::SingularSubmatrix when not invertible.
Matrix invert(const Matrix& m, const PrimeField& field);

std::size_t rank(Matrix m, const PrimeField& field);

Matrix multiply(const Matrix& a, const Matrix& b, const PrimeField& field);

}  // namespace ppir
