#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lolab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

// Parses "p/q", an integer, or a decimal literal such as "-1.25" or "3e-2".
// Decimal literals are converted exactly (no binary rounding).
Rational parse_rational(std::string_view text);

// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);
double to_double(const BigInt& value);

// Ratio num / 2^shift as a double, stable for numerators with ~10^5 bits.
double ldexp_ratio(const BigInt& num, std::int64_t shift);

BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

BigInt lcm(const BigInt& a, const BigInt& b);

// Squared Euclidean norm, exact.
Rational squared_norm(const RationalVector& v);

std::vector<double> to_double(const RationalVector& v);

}  // namespace lolab
