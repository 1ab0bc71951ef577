#include "ppir/rational.hpp"

#include "ppir/error.hpp"

#include <cctype>

namespace ppir {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  std::size_t start = (!digits.empty() && digits[0] == '-') ? 1 : 0;
  if (digits.size() == start) throw Error(Errc::ParseError, "bad fraction \"" + std::string(whole) + "\"");
  for (std::size_t i = start; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i])))
      throw Error(Errc::ParseError, "bad fraction \"" + std::string(whole) + "\"");
  return BigInt(std::string(digits));
}

}  // namespace

std::string to_fraction(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational parse_fraction(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt num = parse_integer(text.substr(0, slash), text);
  const BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw Error(Errc::ParseError, "zero denominator in \"" + std::string(text) + "\"");
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace ppir
