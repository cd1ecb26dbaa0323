#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mskit/family.hpp"
#include "mskit/graph.hpp"
#include "mskit/numeric.hpp"

namespace mskit {

/// Value of a nonnegative series: exact closed form, certified enclosure, or
/// divergence (terms do not tend to zero).
struct SeriesValue {
  enum class Status { Exact, Interval, Diverges };

  Status status = Status::Exact;
  Rational lo;
  Rational hi;
  Rational tail_bound;

  static SeriesValue exact(const Rational& v) { return {Status::Exact, v, v, 0}; }
  static SeriesValue interval(const Rational& lo, const Rational& hi, const Rational& tail) {
    return {Status::Interval, lo, hi, tail};
  }
  static SeriesValue divergent() { return {Status::Diverges, 0, 0, 0}; }

  bool is_exact() const { return status == Status::Exact; }
  bool is_finite() const { return status != Status::Diverges; }
  bool diverges() const { return status == Status::Diverges; }
  const Rational& value() const;  // exact only

  /// Certified sign of (this - t): -1, 0, +1; nullopt when undecided.
  std::optional<int> compare(const Rational& t) const;

  SeriesValue operator+(const SeriesValue& o) const;
  SeriesValue operator+(const Rational& v) const;
};

/// Radius of convergence: exact rational, rational enclosure, or +infinity.
struct RadiusInfo {
  enum class Kind { R, L };

  Kind kind = Kind::R;
  bool infinite = false;
  Rational lo;
  Rational hi;
  bool rigorous = true;
  double estimate = 0.0;  // point estimate (hadamard only)

  static RadiusInfo exact(Kind k, const Rational& v) { return {k, false, v, v, true, v.get_d()}; }
  static RadiusInfo enclosure(Kind k, const Rational& lo, const Rational& hi) {
    return {k, false, lo, hi, true, Rational((lo + hi) / 2).get_d()};
  }
  static RadiusInfo unbounded(Kind k) { return {k, true, 0, 0, true, 0.0}; }

  bool is_exact() const { return !infinite && lo == hi; }
  const Rational& value() const;  // exact only
  /// Enclosure of -log(radius), i.e. the entropy it certifies.
  RealInterval neg_log() const;
};

enum class Weight { Plain, Linear };

/// Sum of a(n) x^n (Plain) or n a(n) x^n (Linear) for rational x > 0.
/// Interval results have width <= 2^tol_exp.
SeriesValue family_eval(const SequenceFamily& a, const Rational& x, int tol_exp = -64, Weight w = Weight::Plain);

/// Radius of convergence of sum a(n) z^n; +infinity for bounded families.
RadiusInfo family_radius(const SequenceFamily& a);

/// Root of sum a(n) x^n = 1 on (0, L) by certified bisection.
/// Requires F(L) > 1 or divergence at L.
RadiusInfo solve_f_eq_1(const SequenceFamily& a, int tol_exp = -64);

/// p(n) = sum_{k=1..n} f(k) p(n-k), p(0) = 1, for n <= N.
CountTable renewal_convolve(const CountTable& f, std::size_t N);
std::vector<BigInt> renewal_convolve(const std::vector<BigInt>& f, std::size_t N);

/// Non-rigorous estimate of 1/limsup c(n)^{1/n} from coefficient data,
/// computed in the log domain from the top `window` indices.
RadiusInfo hadamard_estimate(const std::vector<BigInt>& coeffs, std::size_t window,
                             RadiusInfo::Kind kind = RadiusInfo::Kind::R);

}  // namespace mskit
