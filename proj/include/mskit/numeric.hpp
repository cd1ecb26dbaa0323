#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mskit {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Canonical rational num/den (den != 0).
Rational ratio(const BigInt& num, const BigInt& den);

BigInt pow(const BigInt& base, std::uint64_t exp);
Rational pow(const Rational& base, std::uint64_t exp);

/// 2^exp for any integer exponent.
Rational two_pow(std::int64_t exp);

BigInt floor(const Rational& q);
BigInt ceil(const Rational& q);
bool is_integer(const Rational& q);

/// Natural logarithm through libm; argument must be positive. Not certified.
double ln(const BigInt& z);
double ln(const Rational& q);

/// Round a nonnegative rational down/up to the dyadic grid 2^-bits.
Rational round_down(const Rational& q, std::uint64_t bits);
Rational round_up(const Rational& q, std::uint64_t bits);

/// Exact rational from a finite double.
Rational from_double(double d);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Parses "p", "p/q", "-p/q" (decimal digits only). Throws ParseError.
Rational parse_rational(std::string_view text);
/// Parses a nonnegative decimal integer string. Throws ParseError.
BigInt parse_count(std::string_view text);

/// Closed real interval of doubles. Used for logarithms of certified rational
/// enclosures; endpoints are widened outward by a few ulps beyond libm error.
struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Enclosure of [ln lo, ln hi] for positive rationals lo <= hi.
RealInterval log_enclosure(const Rational& lo, const Rational& hi);

/// Enclosure of [-ln hi, -ln lo].
RealInterval neg_log_enclosure(const Rational& lo, const Rational& hi);

}  // namespace mskit
