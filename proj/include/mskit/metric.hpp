#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mskit/classify.hpp"
#include "mskit/graph.hpp"
#include "mskit/numeric.hpp"

namespace mskit {

/// |2^-n - 2^-m|, exact.
Rational vertex_distance(std::uint64_t n, std::uint64_t m);

/// Bi-infinite path: `core` occupies coordinates start .. start+|core|-1;
/// to the left the word `left` repeats (x_{start-1} = left.back()), to the
/// right the word `right` repeats (x_{end} = right.front()).
struct BiPath {
  std::int64_t start = 0;
  std::vector<VertexId> core;
  std::vector<VertexId> left;
  std::vector<VertexId> right;

  /// Constant path at a vertex with a self-loop, or a periodic cycle word.
  static BiPath periodic(std::vector<VertexId> cycle);

  std::int64_t end() const { return start + static_cast<std::int64_t>(core.size()); }
  VertexId at(std::int64_t i) const;
  /// sigma^k: (sigma^k x)_i = x_{i+k}.
  BiPath shifted(std::int64_t k) const;
  /// Every consecutive pair is an arrow (checked over one full period on
  /// each side).
  bool is_path(const std::function<bool(VertexId, VertexId)>& arrow) const;
};

struct DyadicInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

/// [S, S + 2^{1-K}] with S the exact windowed sum over |n| <= K, hi <= 3.
DyadicInterval path_distance(const BiPath& x, const BiPath& y, std::uint64_t K);

enum class BallStatus { In, Out, Unresolved };
struct BallMembership {
  BallStatus status = BallStatus::Unresolved;
  std::uint64_t K = 0;  // window radius reached
};

constexpr std::uint64_t kDefaultK = 16;
constexpr std::uint64_t kMaxK = 2048;

/// d(sigma^i center, sigma^i y) < r for 0 <= i < n.
BallMembership bowen_ball_member(const BiPath& center, const BiPath& y, const Rational& r, std::uint64_t n,
                                 std::uint64_t K0 = kDefaultK, std::uint64_t K_cap = kMaxK);

/// reference_n in V => candidate_n = reference_n; reference_n outside V =>
/// candidate_n outside V.
bool constraint_set_member(const BiPath& candidate, const BiPath& reference, const std::vector<VertexId>& V);

/// Every distinct pair has some k < n with d(sigma^k x, sigma^k y) >= delta.
/// Throws Unresolved at the window cap.
bool separated_check(const std::vector<BiPath>& paths, const Rational& delta, std::uint64_t n,
                     std::uint64_t K0 = kDefaultK, std::uint64_t K_cap = kMaxK);

/// A loop of the system as (length, index).
struct LoopRef {
  std::uint64_t length = 0;
  BigInt index = 1;
  bool operator==(const LoopRef&) const = default;
};

/// Vertex sequence base, v_1, ..., v_{n-1} of one loop.
std::vector<VertexId> loop_vertices(const LoopSystem& ls, const LoopRef& loop);

/// Path running through `loops` from coordinate 0, padded on both sides by
/// repetitions of `filler`.
BiPath loop_word_path(const LoopSystem& ls, const std::vector<LoopRef>& loops, const LoopRef& filler);

struct LocalEntropyProbe {
  double value = 0.0;            // max (1/n) log(count)
  std::size_t best_count = 0;
  std::size_t centers = 0;
  std::size_t candidates = 0;    // paths examined
  Rational epsilon;
  Rational delta;
  RealInterval h_G;
  std::string note;
};

/// Greedy packing of (delta,n)-separated paths inside Bowen balls around
/// lexicographically enumerated loop-word paths. Heuristic lower bound.
LocalEntropyProbe local_entropy_probe(const LoopSystem& ls, int p_exp, int q_exp, std::uint64_t n,
                                      std::size_t budget = 2000, std::uint64_t max_len = 16,
                                      std::size_t max_centers = 4);

struct EntropyAtInfinity {
  std::vector<RealInterval> stages;  // h(G \ F_k)
  RealInterval limit;
  RealInterval h_G;
  bool below_h = false;  // h_inf < h(G)
  std::optional<bool> spr;
  /// h_inf < h(G) while G is not SPR.
  bool caveat_instance = false;
  std::string caveat;
};

EntropyAtInfinity entropy_at_infinity(const LoopSystem& ls, const std::vector<std::vector<VertexId>>& exhaustion);
EntropyAtInfinity entropy_at_infinity(const FiniteGraph& g, const std::vector<std::vector<VertexId>>& exhaustion);

/// Materialization balls B_m = vertices on loops of length <= m, for the
/// given truncation levels.
std::vector<std::vector<VertexId>> materialization_exhaustion(const LoopSystem& ls,
                                                              const std::vector<std::uint64_t>& levels);

}  // namespace mskit
