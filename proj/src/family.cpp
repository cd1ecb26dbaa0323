#include "mskit/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mskit/error.hpp"

namespace mskit {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::optional<std::uint64_t> mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) return std::nullopt;
  return a * b;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

}  // namespace

Support Support::all(std::uint64_t k0) { return Support{SupportShape::All, k0, 2, 1, 0}; }
Support Support::squares(std::uint64_t k0) { return Support{SupportShape::Squares, k0, 2, 1, 0}; }
Support Support::powers(std::uint64_t base, std::uint64_t k0) { return Support{SupportShape::Powers, k0, base, 1, 0}; }
Support Support::arithmetic(std::uint64_t step, std::uint64_t offset, std::uint64_t k0) {
  return Support{SupportShape::Arithmetic, k0, 2, step, offset};
}

std::optional<std::uint64_t> Support::length(std::uint64_t k) const {
  switch (shape) {
    case SupportShape::All:
      return k;
    case SupportShape::Squares:
      return mul_checked(k, k);
    case SupportShape::Powers: {
      std::uint64_t n = 1;
      for (std::uint64_t i = 0; i < k; ++i) {
        auto next = mul_checked(n, base);
        if (!next) return std::nullopt;
        n = *next;
      }
      return n;
    }
    case SupportShape::Arithmetic: {
      auto m = mul_checked(step, k);
      if (!m || *m > kMax - offset) return std::nullopt;
      return *m + offset;
    }
  }
  return std::nullopt;
}

std::optional<std::uint64_t> Support::index_of(std::uint64_t n) const {
  std::optional<std::uint64_t> k;
  switch (shape) {
    case SupportShape::All:
      k = n;
      break;
    case SupportShape::Squares: {
      const std::uint64_t r = isqrt(n);
      if (r * r == n) k = r;
      break;
    }
    case SupportShape::Powers: {
      std::uint64_t m = n, e = 0;
      while (m > 1 && m % base == 0) {
        m /= base;
        ++e;
      }
      if (m == 1) k = e;
      break;
    }
    case SupportShape::Arithmetic:
      if (n >= offset && (n - offset) % step == 0) k = (n - offset) / step;
      break;
  }
  if (k && *k >= k0) return k;
  return std::nullopt;
}

std::optional<std::uint64_t> Support::first_index_at_least(std::uint64_t n) const {
  std::uint64_t k = k0;
  switch (shape) {
    case SupportShape::All:
      k = std::max(k0, n);
      break;
    case SupportShape::Squares: {
      std::uint64_t r = isqrt(n);
      if (r * r < n) ++r;
      k = std::max(k0, r);
      break;
    }
    case SupportShape::Powers:
      for (;; ++k) {
        auto len = length(k);
        if (!len) return std::nullopt;
        if (*len >= n) break;
      }
      break;
    case SupportShape::Arithmetic:
      if (n > offset) k = std::max(k0, (n - offset + step - 1) / step);
      break;
  }
  if (!length(k)) return std::nullopt;
  return k;
}

void Support::validate() const {
  switch (shape) {
    case SupportShape::All:
    case SupportShape::Squares:
      if (k0 < 1) throw ParseError("support: k0 must be >= 1");
      break;
    case SupportShape::Powers:
      if (base < 2) throw ParseError("support: powers base must be >= 2");
      break;
    case SupportShape::Arithmetic:
      if (step < 1) throw ParseError("support: arithmetic step must be >= 1");
      break;
  }
  auto first = length(k0);
  if (!first || *first < 1) throw ParseError("support: loop lengths must be >= 1");
}

namespace {

// Signed p-adic valuation of a positive rational.
long valuation(const Rational& q, unsigned long p) {
  long v = 0;
  BigInt num = q.get_num(), den = q.get_den();
  while (mpz_divisible_ui_p(num.get_mpz_t(), p)) {
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), p);
    ++v;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
    --v;
  }
  return v;
}

void collect_primes(BigInt n, std::set<unsigned long>& primes) {
  for (unsigned long p = 2; p <= 1000000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.insert(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    if (!n.fits_ulong_p()) throw ParseError("lacunary term: denominator too large to validate integrality");
    primes.insert(n.get_ui());
  }
}

}  // namespace

void LacunaryTerm::validate() const {
  support.validate();
  if (c <= 0) throw ParseError("lacunary term: c must be > 0");
  if (beta < 1) throw ParseError("lacunary term: beta must be >= 1");
  if (gamma <= 0) throw ParseError("lacunary term: gamma must be > 0");
  if (floor) return;

  std::set<unsigned long> primes;
  collect_primes(c.get_den(), primes);
  collect_primes(beta.get_den(), primes);
  collect_primes(gamma.get_den(), primes);

  for (unsigned long p : primes) {
    const long A = valuation(c, p), B = valuation(beta, p), C = valuation(gamma, p);
    if (support.superlinear() && B < 0)
      throw ParseError("lacunary term: counts are not integers (beta has a denominator)");
    for (std::uint64_t k = support.k0;; ++k) {
      auto s = support.length(k);
      auto s_next = support.length(k + 1);
      if (!s || !s_next) break;
      const long double v = A + static_cast<long double>(*s) * B + static_cast<long double>(k) * C;
      if (v < 0) throw ParseError("lacunary term: count at index " + std::to_string(k) + " is not an integer");
      const long double inc = static_cast<long double>(*s_next - *s) * B + C;
      if (inc >= 0 && (B >= 0 || !support.superlinear())) break;
      if (!support.superlinear() && inc < 0)
        throw ParseError("lacunary term: counts eventually fail to be integers");
      if (k - support.k0 > 1000000) throw ParseError("lacunary term: integrality check did not settle");
    }
  }
}

Rational LacunaryTerm::raw_at_index(std::uint64_t k) const {
  auto s = support.length(k);
  if (!s) throw Error("lacunary term: loop length overflows 64 bits");
  return c * pow(beta, *s) * pow(gamma, k);
}

BigInt LacunaryTerm::count_at_index(std::uint64_t k) const {
  const Rational raw = raw_at_index(k);
  if (floor) return mskit::floor(raw);
  if (!is_integer(raw)) throw Error("lacunary term: non-integer count");
  return raw.get_num();
}

BigInt LacunaryTerm::count_at(std::uint64_t n) const {
  auto k = support.index_of(n);
  if (!k) return 0;
  return count_at_index(*k);
}

SequenceFamily::SequenceFamily(std::map<std::uint64_t, BigInt> explicit_terms, std::vector<LacunaryTerm> tails)
    : explicit_(std::move(explicit_terms)), tails_(std::move(tails)) {
  for (const auto& [n, v] : explicit_) {
    if (n < 1) throw ParseError("explicit term: length must be >= 1");
    if (v < 0) throw ParseError("explicit term: count must be >= 0");
  }
  for (const auto& t : tails_) t.validate();
  normalize();
}

void SequenceFamily::normalize() {
  for (auto it = explicit_.begin(); it != explicit_.end();) {
    BigInt tail_sum = 0;
    for (const auto& t : tails_) tail_sum += t.count_at(it->first);
    if (tail_sum == it->second)
      it = explicit_.erase(it);
    else
      ++it;
  }
}

BigInt SequenceFamily::at(std::uint64_t n) const {
  if (auto it = explicit_.find(n); it != explicit_.end()) return it->second;
  BigInt sum = 0;
  for (const auto& t : tails_) sum += t.count_at(n);
  return sum;
}

std::vector<BigInt> SequenceFamily::prefix(std::uint64_t N) const {
  std::vector<BigInt> out(N + 1, BigInt(0));
  for (const auto& t : tails_) {
    for (std::uint64_t k = t.support.k0;; ++k) {
      auto s = t.support.length(k);
      if (!s || *s > N) break;
      out[*s] += t.count_at_index(k);
    }
  }
  for (const auto& [n, v] : explicit_)
    if (n <= N) out[n] = v;
  return out;
}

bool SequenceFamily::is_zero() const {
  if (!tails_.empty()) return false;
  return std::all_of(explicit_.begin(), explicit_.end(), [](const auto& kv) { return kv.second == 0; });
}

std::optional<std::uint64_t> SequenceFamily::max_length() const {
  if (!bounded()) return std::nullopt;
  std::optional<std::uint64_t> best;
  for (const auto& [n, v] : explicit_)
    if (v > 0) best = n;
  return best;
}

std::optional<std::uint64_t> SequenceFamily::next_length(std::uint64_t after) const {
  std::uint64_t from = after;
  for (;;) {
    std::optional<std::uint64_t> cand;
    auto consider = [&](std::uint64_t n) {
      if (n > from && (!cand || n < *cand)) cand = n;
    };
    for (const auto& [n, v] : explicit_)
      if (n > from) {
        consider(n);
        break;
      }
    for (const auto& t : tails_) {
      if (from == kMax) continue;
      auto k = t.support.first_index_at_least(from + 1);
      if (!k) continue;
      if (auto s = t.support.length(*k)) consider(*s);
    }
    if (!cand) return std::nullopt;
    if (at(*cand) > 0) return cand;
    from = *cand;
  }
}

std::vector<std::uint64_t> SequenceFamily::support_up_to(std::uint64_t horizon) const {
  std::vector<std::uint64_t> out;
  std::uint64_t cur = 0;
  while (auto n = next_length(cur)) {
    if (*n > horizon) break;
    out.push_back(*n);
    cur = *n;
  }
  return out;
}

SequenceFamily SequenceFamily::with_count(std::uint64_t n, const BigInt& count) const {
  auto terms = explicit_;
  terms[n] = count;
  return SequenceFamily(std::move(terms), tails_);
}

SequenceFamily SequenceFamily::without_lengths_below(std::uint64_t n_min) const {
  std::map<std::uint64_t, BigInt> terms;
  for (const auto& [n, v] : explicit_)
    if (n >= n_min) terms[n] = v;
  std::vector<LacunaryTerm> tails;
  for (auto t : tails_) {
    auto k = t.support.first_index_at_least(n_min);
    if (!k) continue;
    t.support.k0 = std::max(t.support.k0, *k);
    tails.push_back(t);
  }
  return SequenceFamily(std::move(terms), std::move(tails));
}

SequenceFamily SequenceFamily::restricted(std::uint64_t lo, std::uint64_t hi) const {
  std::map<std::uint64_t, BigInt> terms;
  for (std::uint64_t n : support_up_to(hi))
    if (n >= lo) terms[n] = at(n);
  return SequenceFamily(std::move(terms), {});
}

SequenceFamily SequenceFamily::with_tail(const LacunaryTerm& t) const {
  // Explicit overrides stay overrides: bump them by the new tail's count.
  auto terms = explicit_;
  for (auto& [n, v] : terms) v += t.count_at(n);
  auto tails = tails_;
  tails.push_back(t);
  return SequenceFamily(std::move(terms), std::move(tails));
}

}  // namespace mskit
