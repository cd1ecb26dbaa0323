#include "mskit/numeric.hpp"

#include <cmath>
#include <limits>

#include "mskit/error.hpp"

namespace mskit {

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("ratio: zero denominator");
  Rational q;
  mpz_set(q.get_num_mpz_t(), num.get_mpz_t());
  mpz_set(q.get_den_mpz_t(), den.get_mpz_t());
  q.canonicalize();
  return q;
}

BigInt pow(const BigInt& base, std::uint64_t exp) {
  BigInt out;
  if (exp > std::numeric_limits<unsigned long>::max()) throw Error("pow: exponent too large");
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return out;
}

Rational pow(const Rational& base, std::uint64_t exp) {
  return ratio(pow(BigInt(base.get_num()), exp), pow(BigInt(base.get_den()), exp));
}

Rational two_pow(std::int64_t exp) {
  BigInt one = 1;
  BigInt p;
  mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(exp < 0 ? -exp : exp));
  return exp >= 0 ? Rational(p) : ratio(BigInt(1), p);
}

BigInt floor(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

BigInt ceil(const Rational& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

double ln(const BigInt& z) {
  if (z <= 0) throw Error("ln: nonpositive argument");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double ln(const Rational& q) {
  if (q <= 0) throw Error("ln: nonpositive argument");
  // Scale into [1/2, 2] exactly so the mantissa log does not cancel.
  const long e = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  Rational m = q;
  if (e > 0)
    mpq_div_2exp(m.get_mpq_t(), m.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else if (e < 0)
    mpq_mul_2exp(m.get_mpq_t(), m.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return std::log(m.get_d()) + static_cast<double>(e) * std::log(2.0);
}

Rational round_down(const Rational& q, std::uint64_t bits) {
  BigInt scaled;
  BigInt num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  BigInt den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  return ratio(scaled, den);
}

Rational round_up(const Rational& q, std::uint64_t bits) {
  BigInt scaled;
  BigInt num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_cdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  BigInt den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  return ratio(scaled, den);
}

Rational from_double(double d) {
  if (!std::isfinite(d)) throw Error("from_double: non-finite value");
  Rational q;
  mpq_set_d(q.get_mpq_t(), d);
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  BigInt n(std::string(num), 10);
  BigInt d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q = ratio(n, d);
  return negative ? Rational(-q) : q;
}

BigInt parse_count(std::string_view text) {
  if (!all_digits(text)) throw ParseError("malformed count '" + std::string(text) + "'");
  return BigInt(std::string(text), 10);
}

namespace {

// libm log is within 1 ulp; mpz->double conversion loses at most 2^-53
// relative. Four ulps of slack on each side plus an absolute floor.
double widen_down(double v) {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (std::fabs(v) + 1.0);
  return v - slack;
}

double widen_up(double v) {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (std::fabs(v) + 1.0);
  return v + slack;
}

double exact_log_or_nan(const Rational& q) {
  if (q == 1) return 0.0;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

RealInterval log_enclosure(const Rational& lo, const Rational& hi) {
  if (lo <= 0 || hi < lo) throw Error("log_enclosure: need 0 < lo <= hi");
  RealInterval out;
  const double elo = exact_log_or_nan(lo);
  const double ehi = exact_log_or_nan(hi);
  out.lo = std::isnan(elo) ? widen_down(ln(lo)) : elo;
  out.hi = std::isnan(ehi) ? widen_up(ln(hi)) : ehi;
  return out;
}

RealInterval neg_log_enclosure(const Rational& lo, const Rational& hi) {
  const RealInterval l = log_enclosure(lo, hi);
  return RealInterval{-l.hi, -l.lo};
}

}  // namespace mskit
