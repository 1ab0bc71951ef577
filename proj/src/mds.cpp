#include "ppir/mds.hpp"

#include "ppir/error.hpp"
#include "ppir/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace ppir {

namespace {

// C(n, k), saturating at limit + 1.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t limit) {
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > limit) return limit + 1;
  }
  return static_cast<std::size_t>(acc);
}

// Advances `idx` to the next k-combination of [0, n); false after the last.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::string one_based(const std::vector<std::size_t>& cols) {
  std::string s = "{";
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + std::to_string(cols[i] + 1);
  return s + "}";
}

void check_dimensions(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n)
    throw Error(Errc::BadDimensions, "need 1 <= k < n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

}  // namespace

MdsCheck check_mds(const Matrix& rows, const PrimeField& field) {
  const std::size_t k = rows.rows();
  const std::size_t n = rows.cols();
  check_dimensions(n, k);
  MdsCheck result;
  std::vector<std::size_t> cols(k);
  auto singular = [&](const std::vector<std::size_t>& c) {
    ++result.minors_checked;
    return rank(rows.select_columns(c), field) < k;
  };

  if (binomial_capped(n, k, kExhaustiveMinorLimit) <= kExhaustiveMinorLimit) {
    std::iota(cols.begin(), cols.end(), 0);
    do {
      if (singular(cols)) {
        result.mds = false;
        result.singular_columns = cols;
        return result;
      }
    } while (next_combination(cols, n));
    return result;
  }

  result.exhaustive = false;
  std::mt19937_64 rng(0x6d647321);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t s = 0; s < kSampledMinors; ++s) {
    cols.clear();
    std::sample(all.begin(), all.end(), std::back_inserter(cols), k, rng);
    if (singular(cols)) {
      result.mds = false;
      result.singular_columns = cols;
      return result;
    }
  }
  return result;
}

Generator::Generator(Matrix rows, const PrimeField& field)
    : rows_(std::move(rows)), parity_(rows_.rows(), rows_.cols() - rows_.rows()), field_(field) {
  for (std::size_t r = 0; r < k(); ++r)
    for (std::size_t c = 0; c < parity_count(); ++c) parity_(r, c) = rows_(r, k() + c);
}

Generator build_systematic_generator(std::size_t n, std::size_t k, const PrimeField& field) {
  check_dimensions(n, k);
  if (n > field.order())
    throw Error(Errc::FieldTooSmall, "length " + std::to_string(n) + " code needs q >= n, q=" +
                                         std::to_string(field.order()));
  Matrix g(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    Symbol denom = 1;
    for (std::size_t m = 0; m < k; ++m)
      if (m != i) denom = field.mul(denom, field.reduce(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(m)));
    const Symbol denom_inv = field.inverse(denom);
    for (std::size_t x = 0; x < n; ++x) {
      Symbol num = 1;
      for (std::size_t m = 0; m < k; ++m)
        if (m != i) num = field.mul(num, field.reduce(static_cast<std::int64_t>(x) - static_cast<std::int64_t>(m)));
      g(i, x) = field.mul(num, denom_inv);
    }
  }
  return Generator(std::move(g), field);
}

Generator generator_from_explicit(const Matrix& rows, const PrimeField& field) {
  const std::size_t k = rows.rows();
  const std::size_t n = rows.cols();
  check_dimensions(n, k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!field.contains(rows(r, c)))
        throw Error(Errc::OutOfRange, "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                                          ")=" + std::to_string(rows(r, c)) + " not in GF(" +
                                          std::to_string(field.order()) + ")");
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c)
      if (rows(r, c) != (r == c ? 1u : 0u))
        throw Error(Errc::NotSystematic, "first " + std::to_string(k) + " columns are not the identity (row " +
                                             std::to_string(r + 1) + ", column " + std::to_string(c + 1) + ")");
  const MdsCheck check = check_mds(rows, field);
  if (!check.mds)
    throw Error(Errc::NotMDS, "columns " + one_based(check.singular_columns) + " form a singular submatrix");
  return Generator(rows, field);
}

bool verify_mds(const Generator& g) { return check_mds(g.rows(), g.field()).mds; }

std::vector<Symbol> encode(const Generator& g, std::span<const Symbol> message) {
  if (message.size() != g.k())
    throw Error(Errc::LengthMismatch, "message length " + std::to_string(message.size()) + ", code dimension " +
                                          std::to_string(g.k()));
  const PrimeField& f = g.field();
  std::vector<Symbol> codeword(g.n(), 0);
  for (std::size_t c = 0; c < g.n(); ++c) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < g.k(); ++i) acc = (acc + std::uint64_t{f.reduce(message[i])} * g.rows()(i, c)) % f.order();
    codeword[c] = static_cast<Symbol>(acc);
  }
  return codeword;
}

Matrix encode_parities(const Generator& g, const Matrix& messages) {
  if (messages.rows() != g.k())
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(g.k()) + " message rows, got " +
                                             std::to_string(messages.rows()));
  return kernels::combine(g.parity_columns(), messages, g.field());
}

ErasureDecoder::ErasureDecoder(const Generator& g, std::vector<std::size_t> positions)
    : field_(g.field()), positions_(std::move(positions)) {
  if (positions_.size() != g.k())
    throw Error(Errc::LengthMismatch, "need exactly " + std::to_string(g.k()) + " positions, got " +
                                          std::to_string(positions_.size()));
  std::vector<std::size_t> sorted = positions_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Errc::LengthMismatch, "positions must be distinct");
  if (sorted.back() >= g.n())
    throw Error(Errc::OutOfRange, "position " + std::to_string(sorted.back()) + " beyond code length");
  // m * G_P = y  =>  m = y * G_P^{-1}
  inverse_ = invert(g.rows().select_columns(positions_), field_);
}

std::vector<Symbol> ErasureDecoder::decode(std::span<const Symbol> values) const {
  if (values.size() != positions_.size())
    throw Error(Errc::LengthMismatch, "expected " + std::to_string(positions_.size()) + " values");
  Matrix known(values.size(), 1);
  for (std::size_t r = 0; r < values.size(); ++r) known(r, 0) = field_.reduce(values[r]);
  const Matrix m = kernels::combine_serial(inverse_, known, field_);
  std::vector<Symbol> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, 0);
  return out;
}

Matrix ErasureDecoder::decode_block(const Matrix& known) const {
  return kernels::combine(inverse_, known, field_);
}

std::vector<Symbol> decode_from_positions(const Generator& g, std::span<const std::size_t> positions,
                                          std::span<const Symbol> values) {
  return ErasureDecoder(g, {positions.begin(), positions.end()}).decode(values);
}

}  // namespace ppir
