#include "ppir/matrix.hpp"

#include "ppir/error.hpp"

#include <string>
#include <utility>

namespace ppir {

Matrix::Matrix(std::initializer_list<std::initializer_list<Symbol>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(Errc::BadDimensions, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<Symbol>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_)
      throw Error(Errc::BadDimensions, "row " + std::to_string(r) + " has " +
                                           std::to_string(rows[r].size()) + " entries, expected " +
                                           std::to_string(m.cols_));
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] >= cols_) throw Error(Errc::OutOfRange, "column " + std::to_string(columns[c]));
      out(r, c) = (*this)(r, columns[c]);
    }
  return out;
}

std::vector<std::vector<Symbol>> Matrix::to_rows() const {
  std::vector<std::vector<Symbol>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

namespace {

// Reduces m in place to reduced row echelon form, applying the same row
// operations to `aug` when given. Returns the rank.
std::size_t eliminate(Matrix& m, Matrix* aug, const PrimeField& f) {
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != pivot_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(pivot_row, c));
      if (aug)
        for (std::size_t c = 0; c < aug->cols(); ++c) std::swap((*aug)(sel, c), (*aug)(pivot_row, c));
    }
    const Symbol inv = f.inverse(m(pivot_row, col));
    for (std::size_t c = 0; c < m.cols(); ++c) m(pivot_row, c) = f.mul(m(pivot_row, c), inv);
    if (aug)
      for (std::size_t c = 0; c < aug->cols(); ++c) (*aug)(pivot_row, c) = f.mul((*aug)(pivot_row, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == pivot_row || m(r, col) == 0) continue;
      const Symbol factor = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c)
        m(r, c) = f.sub(m(r, c), f.mul(factor, m(pivot_row, c)));
      if (aug)
        for (std::size_t c = 0; c < aug->cols(); ++c)
          (*aug)(r, c) = f.sub((*aug)(r, c), f.mul(factor, (*aug)(pivot_row, c)));
    }
    ++pivot_row;
  }
  return pivot_row;
}

}  // namespace

Matrix invert(const Matrix& m, const PrimeField& field) {
  if (m.rows() != m.cols())
    throw Error(Errc::BadDimensions, "cannot invert a " + std::to_string(m.rows()) + "x" +
                                         std::to_string(m.cols()) + " matrix");
  Matrix work = m;
  Matrix inv(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) inv(i, i) = 1;
  if (eliminate(work, &inv, field) != m.rows())
    throw Error(Errc::SingularSubmatrix, "matrix is singular over GF(" + std::to_string(field.order()) + ")");
  return inv;
}

std::size_t rank(Matrix m, const PrimeField& field) { return eliminate(m, nullptr, field); }

Matrix multiply(const Matrix& a, const Matrix& b, const PrimeField& field) {
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < a.cols(); ++i) acc = (acc + std::uint64_t{a(r, i)} * b(i, c)) % field.order();
      out(r, c) = static_cast<Symbol>(acc);
    }
  return out;
}

}  // namespace ppir
