#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mskit/classify.hpp"
#include "mskit/graph.hpp"
#include "mskit/series.hpp"

namespace mskit {

/// Maximal measure of a finite strongly connected graph. Eigenvectors are
/// kept as exact positive integer vectors; the transition matrix and the
/// stationary vector are exact rationals built from them and lambda_hat.
struct ParryMeasure {
  FiniteGraph graph;
  Rational lambda_lo;
  Rational lambda_hi;
  Rational lambda_hat;  // midpoint used by the transition matrix
  std::vector<BigInt> right;
  std::vector<BigInt> left;
  RealInterval entropy;
  Rational row_residual;           // max_u |sum_v q(u,v) - 1|
  Rational stationarity_residual;  // max_v |(pi Q)(v) - pi(v)|

  Rational transition(VertexId u, VertexId v) const;
  Rational stationary(VertexId v) const;
  std::vector<Rational> stationary_vector() const;
};

ParryMeasure parry_measure(const FiniteGraph& g, int tol_exp = -30);

/// Renewal-form maximal measure of a positive recurrent loop system: from
/// the base each individual loop of length n is entered with probability
/// R^n; interior steps are deterministic.
struct LoopMaximalMeasure {
  LoopSystem system;
  RadiusInfo R;
  SeriesValue mean_return;  // m = sum n a(n) R^n
  RealInterval entropy;     // -log R

  /// R^n, exact R only.
  Rational per_loop_prob(std::uint64_t n) const;
  /// a(n) R^n.
  Rational return_prob(std::uint64_t n) const;
  /// 1/m (exact only).
  Rational base_frequency() const;
};

/// Throws PreconditionError for transient or null recurrent systems.
LoopMaximalMeasure loop_maximal_measure(const LoopSystem& ls);

/// Measure of the cylinder fixing `word` at coordinates 0..len.
Rational cylinder_measure(const LoopMaximalMeasure& mm, const std::vector<VertexId>& word);

struct AbramovReport {
  double value = 0.0;   // (sum -P log P) / (sum n P)
  double target = 0.0;  // -log R
  double deviation = 0.0;
  std::uint64_t horizon = 0;
  bool within = false;  // deviation <= 2^-20
};
AbramovReport abramov_check(const LoopMaximalMeasure& mm, std::uint64_t N);

struct RenewalLimitReport {
  bool skipped = false;  // periodic system
  std::uint64_t period = 1;
  Rational limit;        // 1/m (aperiodic systems only)
  std::size_t from = 0;
  std::size_t to = 0;
  double max_deviation = 0.0;
  std::vector<std::pair<std::size_t, double>> values;  // (n, p(n) R^n)
};
RenewalLimitReport renewal_limit_check(const LoopSystem& ls, std::size_t N, std::size_t window = 50);

struct EscapeStage {
  std::uint64_t shortest = 0;  // l_j
  std::uint64_t longest = 0;   // M_j
  SequenceFamily loops;        // lengths in [l_j, M_j]
  RadiusInfo root;             // root of the stage's F(x) = 1
  RealInterval entropy;
  Rational base_mass_lo;       // measure of the cylinder {x_0 = base}
  Rational base_mass_hi;
};

struct EscapeSequence {
  RealInterval target;  // h(G)
  std::vector<EscapeStage> stages;
  bool entropies_increasing = true;
  bool masses_decreasing = true;
  bool masses_below_inverse_shortest = true;
};

/// Finite subsystems whose maximal measures escape to infinity.
EscapeSequence escape_sequence(const LoopSystem& ls, std::size_t stages);

}  // namespace mskit
