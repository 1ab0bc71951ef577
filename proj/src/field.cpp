#include "ppir/field.hpp"

#include "ppir/error.hpp"

#include <string>

namespace ppir {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPrimeOrder: return "NonPrimeOrder";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::FieldTooSmall: return "FieldTooSmall";
    case Errc::BadDimensions: return "BadDimensions";
    case Errc::NotSystematic: return "NotSystematic";
    case Errc::NotMDS: return "NotMDS";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SingularSubmatrix: return "SingularSubmatrix";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::HiddenIndices: return "HiddenIndices";
    case Errc::AssumptionViolated: return "AssumptionViolated";
    case Errc::ExhaustedIndices: return "ExhaustedIndices";
    case Errc::PartitionInfeasible: return "PartitionInfeasible";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InsufficientKnowns: return "InsufficientKnowns";
    case Errc::RecoveryFailed: return "RecoveryFailed";
    case Errc::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint64_t order) : q_(0) {
  if (order > kMaxFieldOrder)
    throw Error(Errc::UnsupportedOrder, "field order " + std::to_string(order) + " exceeds 2^31-1");
  if (!is_prime(order))
    throw Error(Errc::NonPrimeOrder, std::to_string(order) + " is not prime");
  q_ = static_cast<std::uint32_t>(order);
}

Symbol PrimeField::inverse(Symbol a) const {
  if (a % q_ == 0) throw Error(Errc::ZeroInverse, "0 has no inverse in GF(" + std::to_string(q_) + ")");
  // extended Euclid on (a, q)
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a % q_;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  return reduce(t);
}

FieldElement::FieldElement(const PrimeField& field, std::uint64_t value)
    : field_(field), value_(static_cast<Symbol>(value % field.order())) {}

FieldElement FieldElement::inverse() const { return {field_, field_.inverse(value_)}; }

namespace {
void require_same(const FieldElement& a, const FieldElement& b) {
  if (!(a.field() == b.field()))
    throw Error(Errc::FieldMismatch, "GF(" + std::to_string(a.field().order()) + ") vs GF(" +
                                         std::to_string(b.field().order()) + ")");
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.field_, a.field_.add(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.field_, a.field_.sub(a.value_, b.value_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return {a.field_, a.field_.mul(a.value_, b.value_)};
}

}  // namespace ppir
