#pragma once

#include <cstdint>

namespace ppir {

// Canonical representative of a GF(q) element, always in [0, q).
using Symbol = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = (std::uint64_t{1} << 31) - 1;

bool is_prime(std::uint64_t n) noexcept;

// Arithmetic context for GF(q), q prime and at most 2^31 - 1 so every product
// of two canonical symbols fits in 64 bits.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t order);

  std::uint32_t order() const noexcept { return q_; }
  bool contains(std::uint64_t v) const noexcept { return v < q_; }

  Symbol reduce(std::int64_t v) const noexcept {
    auto r = v % static_cast<std::int64_t>(q_);
    return static_cast<Symbol>(r < 0 ? r + q_ : r);
  }
  Symbol add(Symbol a, Symbol b) const noexcept {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Symbol>(s >= q_ ? s - q_ : s);
  }
  Symbol sub(Symbol a, Symbol b) const noexcept {
    return a >= b ? a - b : static_cast<Symbol>(std::uint64_t{a} + q_ - b);
  }
  Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Symbol mul(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>((std::uint64_t{a} * b) % q_);
  }
  // Throws Errc::ZeroInverse for a == 0.
  Symbol inverse(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inverse(b)); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t q_;
};

// A symbol bound to its field. Mixing elements of different fields throws
// Errc::FieldMismatch.
class FieldElement {
 public:
  FieldElement(const PrimeField& field, std::uint64_t value);

  Symbol value() const noexcept { return value_; }
  const PrimeField& field() const noexcept { return field_; }

  FieldElement inverse() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  PrimeField field_;
  Symbol value_;
};

}  // namespace ppir
