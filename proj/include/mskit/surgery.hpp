#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mskit/classify.hpp"
#include "mskit/graph.hpp"

namespace mskit {

/// One step of the greedy loop-addition: partial = sum_{i<=k} alpha^{n_i}.
struct GreedyStep {
  std::uint64_t n = 0;
  Rational partial;
  Rational tail_after;  // sum_{j>n} alpha^j
};

struct LoopAddition {
  std::vector<std::pair<std::uint64_t, BigInt>> additions;  // (length, multiplicity)
  BigInt p;
  Rational alpha;
  Rational deficiency;  // D = 1 - F(R)
  bool index_set_finite = true;
  Rational residual;    // D/2 - sum alpha^{n_i}; 0 when finite
  std::string continuation;  // rule for the remaining terms when truncated
  std::vector<GreedyStep> trace;
};

/// Padding data: contributions n * a_added(n) * R^n of the added lengths.
struct Padding {
  std::uint64_t k = 0;
  std::optional<LacunaryTerm> tail;                          // when R = 1/b
  std::vector<std::pair<std::uint64_t, BigInt>> explicit_terms;  // otherwise
  std::vector<std::pair<std::uint64_t, Rational>> contributions;
  std::optional<Rational> min_contribution;
  std::string continuation;
};

struct SurgeryResult {
  std::string operation;
  std::map<std::string, std::string> params;
  LoopSystem before;
  LoopSystem after;
  VereJonesClass claimed = VereJonesClass::Transient;
  ClassificationReport verification;  // recomputed on `after`
  bool claim_verified = false;
  bool entropy_preserved = false;     // R(after) = R(before) exactly
  std::optional<LoopAddition> addition;
  std::optional<Padding> padding;
  std::vector<std::string> notes;
};

/// Adds one loop of the least length k >= 2 with F(R) + R^k < 1.
SurgeryResult transient_extension(const LoopSystem& ls);

/// Greedy addition of 2p^{n_i} loops of length n_i bringing F(R) to 1.
SurgeryResult recurrent_extension(const LoopSystem& ls, std::size_t max_terms = 64);

/// Adds floor(R^{-(m_n-n)}) loops of length m_n = floor(R^{-n}) for n >= k.
SurgeryResult null_recurrent_padding(const LoopSystem& ls, std::uint64_t horizon = 64);

/// Deletes loop (length n, index i). Errors on SPR input.
SurgeryResult branch_contraction(const LoopSystem& ls, std::uint64_t n, const BigInt& i);

/// Removes every loop of length < n.
SurgeryResult entropy_concentration(const LoopSystem& ls, std::uint64_t n);

}  // namespace mskit
