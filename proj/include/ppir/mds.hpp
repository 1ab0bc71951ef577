#pragma once

#include "ppir/field.hpp"
#include "ppir/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ppir {

struct MdsCheck {
  bool mds = true;
  bool exhaustive = true;
  std::size_t minors_checked = 0;
  std::vector<std::size_t> singular_columns;  // first singular column set found (0-based)
};

// Above this many maximal minors, MDS verification samples instead.
inline constexpr std::size_t kExhaustiveMinorLimit = 100'000;
inline constexpr std::size_t kSampledMinors = 20'000;

MdsCheck check_mds(const Matrix& rows, const PrimeField& field);

// Systematic [n, k] generator over a prime field. Construction always
// validates: columns 0..k-1 form the identity and every k x k column
// submatrix is invertible.
class Generator {
 public:
  std::size_t n() const noexcept { return rows_.cols(); }
  std::size_t k() const noexcept { return rows_.rows(); }
  std::size_t parity_count() const noexcept { return n() - k(); }
  const PrimeField& field() const noexcept { return field_; }
  const Matrix& rows() const noexcept { return rows_; }
  // k x (n - k) block of parity columns.
  const Matrix& parity_columns() const noexcept { return parity_; }

  friend Generator build_systematic_generator(std::size_t n, std::size_t k, const PrimeField& field);
  friend Generator generator_from_explicit(const Matrix& rows, const PrimeField& field);

 private:
  Generator(Matrix rows, const PrimeField& field);

  Matrix rows_;
  Matrix parity_;
  PrimeField field_;
};

// Systematic Reed-Solomon code with evaluation points 0, 1, ..., n-1: row i is
// the Lagrange basis polynomial of point i (among the first k points),
// evaluated at all n points.
Generator build_systematic_generator(std::size_t n, std::size_t k, const PrimeField& field);

// Validates a caller-supplied k x n matrix. Throws NotSystematic or NotMDS
// (naming the first singular column set, 1-based).
Generator generator_from_explicit(const Matrix& rows, const PrimeField& field);

bool verify_mds(const Generator& g);

std::vector<Symbol> encode(const Generator& g, std::span<const Symbol> message);

// Encodes every column of `messages` (k x L) and returns only the parity
// rows, (n - k) x L.
Matrix encode_parities(const Generator& g, const Matrix& messages);

// Erasure decoding from k known codeword coordinates. Positions are 0-based
// codeword indices.
std::vector<Symbol> decode_from_positions(const Generator& g, std::span<const std::size_t> positions,
                                          std::span<const Symbol> values);

// Precomputes the inverse of the known-column submatrix once so that many
// symbol positions can be decoded against the same erasure pattern.
class ErasureDecoder {
 public:
  ErasureDecoder(const Generator& g, std::vector<std::size_t> positions);

  const std::vector<std::size_t>& positions() const noexcept { return positions_; }

  std::vector<Symbol> decode(std::span<const Symbol> values) const;
  // `known` is k x L with row r holding codeword position positions()[r].
  Matrix decode_block(const Matrix& known) const;

 private:
  PrimeField field_;
  std::vector<std::size_t> positions_;
  Matrix inverse_;
};

}  // namespace ppir
