#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hybrid {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Accepts `p`, `p/q` and plain decimals such as `-0.25`. Throws ArithmeticError
/// on a zero denominator and ParseError on malformed text.
Rational parse_rational(std::string_view text);

/// Lowest-terms `p/q`, or `p` for integers.
std::string to_string(const Rational& r);

bool is_integer(const Rational& r);

} // namespace hybrid
