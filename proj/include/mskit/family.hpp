#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mskit/numeric.hpp"

namespace mskit {

enum class SupportShape { All, Squares, Powers, Arithmetic };

/// Index set k >= k0 mapped to loop lengths n = s(k).
struct Support {
  SupportShape shape = SupportShape::All;
  std::uint64_t k0 = 1;
  std::uint64_t base = 2;    // Powers: n = base^k
  std::uint64_t step = 1;    // Arithmetic: n = step*k + offset
  std::uint64_t offset = 0;

  static Support all(std::uint64_t k0 = 1);
  static Support squares(std::uint64_t k0 = 1);
  static Support powers(std::uint64_t base, std::uint64_t k0 = 1);
  static Support arithmetic(std::uint64_t step, std::uint64_t offset, std::uint64_t k0 = 1);

  /// s(k); nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> length(std::uint64_t k) const;
  /// k with s(k) = n and k >= k0.
  std::optional<std::uint64_t> index_of(std::uint64_t n) const;
  /// Smallest k >= k0 with s(k) >= n (nullopt if none fits in 64 bits).
  std::optional<std::uint64_t> first_index_at_least(std::uint64_t n) const;
  /// s(k)/k -> infinity (squares, powers).
  bool superlinear() const { return shape == SupportShape::Squares || shape == SupportShape::Powers; }

  void validate() const;
  bool operator==(const Support&) const = default;
};

/// count(k) = c * beta^s(k) * gamma^k at n = s(k), optionally floored.
struct LacunaryTerm {
  Support support;
  Rational c{1};
  Rational beta{1};
  Rational gamma{1};
  bool floor = false;

  /// Checks c > 0, beta >= 1, gamma > 0 and, without the floor flag, that
  /// every count is a nonnegative integer. Throws ParseError.
  void validate() const;

  Rational raw_at_index(std::uint64_t k) const;
  BigInt count_at_index(std::uint64_t k) const;
  /// 0 when n is outside the support.
  BigInt count_at(std::uint64_t n) const;

  bool operator==(const LacunaryTerm& o) const {
    return support == o.support && c == o.c && beta == o.beta && gamma == o.gamma && floor == o.floor;
  }
};

/// Nonnegative integer sequence a(n), n >= 1: a sum of lacunary tails with a
/// finite table of explicit values. An explicit entry at n overrides the sum
/// of the tails at n.
class SequenceFamily {
 public:
  SequenceFamily() = default;
  SequenceFamily(std::map<std::uint64_t, BigInt> explicit_terms, std::vector<LacunaryTerm> tails);

  static SequenceFamily from_explicit(std::map<std::uint64_t, BigInt> terms) { return {std::move(terms), {}}; }

  const std::map<std::uint64_t, BigInt>& explicit_terms() const { return explicit_; }
  const std::vector<LacunaryTerm>& tails() const { return tails_; }

  BigInt at(std::uint64_t n) const;
  /// a(0..N) with a(0) = 0.
  std::vector<BigInt> prefix(std::uint64_t N) const;

  bool bounded() const { return tails_.empty(); }
  bool is_zero() const;
  /// Largest n with a(n) > 0 (bounded families only).
  std::optional<std::uint64_t> max_length() const;
  /// Lengths n <= horizon with a(n) > 0, increasing.
  std::vector<std::uint64_t> support_up_to(std::uint64_t horizon) const;
  /// Smallest n > after with a(n) > 0 (nullopt if none).
  std::optional<std::uint64_t> next_length(std::uint64_t after) const;

  /// Copy with a(n) replaced by count.
  SequenceFamily with_count(std::uint64_t n, const BigInt& count) const;
  /// Copy with a(n) = 0 for all n < n_min.
  SequenceFamily without_lengths_below(std::uint64_t n_min) const;
  /// Copy keeping only lengths in [lo, hi]; always bounded.
  SequenceFamily restricted(std::uint64_t lo, std::uint64_t hi) const;
  SequenceFamily with_tail(const LacunaryTerm& t) const;

  bool operator==(const SequenceFamily&) const = default;

 private:
  void normalize();

  std::map<std::uint64_t, BigInt> explicit_;
  std::vector<LacunaryTerm> tails_;
};

}  // namespace mskit
