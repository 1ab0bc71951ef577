#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace ppir {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Always "num/den" in lowest terms, including integers ("1/1").
std::string to_fraction(const Rational& r);
Rational parse_fraction(std::string_view text);
double to_double(const Rational& r);

}  // namespace ppir
