#include "lolab/rational.hpp"

#include "lolab/errors.hpp"

#include <cctype>
#include <cmath>

namespace lolab {

namespace {

std::int64_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return static_cast<std::int64_t>(boost::multiprecision::msb(v)) + 1;
}

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw InvalidInput("malformed number: '" + std::string(whole) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InvalidInput("malformed number: '" + std::string(whole) + "'");
    }
  }
  // A leading zero would make the BigInt constructor read the digits as octal.
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

BigInt pow10(std::int64_t e) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InvalidInput("empty number");

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt p = parse_integer(text.substr(0, slash), whole);
    BigInt q = parse_integer(text.substr(slash + 1), whole);
    if (q == 0) throw InvalidInput("zero denominator in '" + std::string(whole) + "'");
    value = Rational(p, q);
  } else {
    std::int64_t exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      BigInt magnitude = parse_integer(exp_text, whole);
      if (magnitude > 4096) throw InvalidInput("exponent out of range in '" + std::string(whole) + "'");
      exponent = magnitude.convert_to<std::int64_t>();
      if (exp_negative) exponent = -exponent;
      text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view int_part = text.substr(0, dot);
      std::string_view frac_part = text.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) throw InvalidInput("malformed number: '" + std::string(whole) + "'");
      digits = std::string(int_part) + std::string(frac_part);
      exponent -= static_cast<std::int64_t>(frac_part.size());
    } else {
      digits = std::string(text);
    }
    BigInt mantissa = parse_integer(digits, whole);
    value = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite number");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(value, &exp);
  // mant * 2^53 is an exact integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigInt num = scaled;
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, BigInt(1) << -exp);
}

std::string to_string(const Rational& value) {
  const BigInt& den = boost::multiprecision::denominator(value);
  if (den == 1) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" + den.str();
}

double ldexp_ratio(const BigInt& num, std::int64_t shift) {
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  BigInt mag = negative ? BigInt(-num) : num;
  const std::int64_t bits = bit_length(mag);
  std::int64_t drop = bits > 62 ? bits - 62 : 0;
  if (drop > 0) mag >>= drop;
  const double r = std::ldexp(static_cast<double>(mag.convert_to<std::uint64_t>()), static_cast<int>(drop - shift));
  return negative ? -r : r;
}

double to_double(const BigInt& value) { return ldexp_ratio(value, 0); }

double to_double(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  BigInt mag = negative ? BigInt(-num) : num;
  // Scale so that the integer quotient carries ~64 significant bits.
  const std::int64_t k = 64 - (bit_length(mag) - bit_length(den));
  BigInt q = k >= 0 ? BigInt((mag << k) / den) : BigInt(mag / (den << -k));
  const double r = ldexp_ratio(q, k);
  return negative ? -r : r;
}

BigInt floor(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& value) { return -floor(Rational(-value)); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

Rational squared_norm(const RationalVector& v) {
  Rational s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

std::vector<double> to_double(const RationalVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

}  // namespace lolab
