#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mskit/family.hpp"
#include "mskit/numeric.hpp"

namespace mskit {

using VertexId = std::uint64_t;
using Arrow = std::pair<VertexId, VertexId>;

/// Compressed rows over dense vertex indices.
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;

  std::size_t rows() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> row(std::size_t i) const {
    return {targets.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

/// Finite directed graph with at most one arrow per ordered pair.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  /// Throws ParseError on duplicate vertices/arrows or undeclared endpoints.
  FiniteGraph(std::vector<VertexId> vertices, std::vector<Arrow> arrows);

  std::size_t size() const { return ids_.size(); }
  std::size_t arrow_count() const { return out_.targets.size(); }
  bool empty() const { return ids_.empty(); }

  /// Sorted vertex ids; dense index i refers to vertices()[i].
  const std::vector<VertexId>& vertices() const { return ids_; }
  std::vector<Arrow> arrows() const;

  VertexId id(std::size_t index) const { return ids_[index]; }
  std::optional<std::size_t> find(VertexId v) const;
  /// Throws UnknownVertex.
  std::size_t index(VertexId v) const;
  bool contains(VertexId v) const { return find(v).has_value(); }
  bool has_arrow(VertexId u, VertexId v) const;

  const Csr& out() const { return out_; }
  const Csr& in() const { return in_; }

  /// Subgraph induced on the given ids (ids absent from the graph are ignored).
  FiniteGraph induced(std::span<const VertexId> keep) const;

  bool operator==(const FiniteGraph& o) const { return ids_ == o.ids_ && arrows() == o.arrows(); }

 private:
  std::vector<VertexId> ids_;
  Csr out_;
  Csr in_;
};

/// (u_0, ..., u_n); a loop when u_0 = u_n.
struct Path {
  std::vector<VertexId> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  bool is_loop() const { return !vertices.empty() && vertices.front() == vertices.back(); }
  bool valid_in(const FiniteGraph& g) const;
};

/// Base vertex with a(n) disjoint loops of length n. Materialized interior
/// vertices are numbered base+1, base+2, ... lexicographically in (n, i, k).
struct LoopSystem {
  VertexId base = 0;
  SequenceFamily counts;

  /// a(1) <= 1 (one arrow per pair) and at least one loop. Throws ParseError.
  void validate() const;
  bool operator==(const LoopSystem&) const = default;
};

/// Position of an interior vertex v_k^{n,i}; k = 0 denotes the base.
struct LoopPosition {
  std::uint64_t length = 0;
  BigInt index = 0;  // i, 1-based
  std::uint64_t step = 0;  // k
};

/// Deterministic numbering of a loop system's vertices.
class LoopIndexer {
 public:
  explicit LoopIndexer(const LoopSystem& ls) : ls_(&ls) {}

  /// Id of v_k^{n,i} (1 <= k <= n-1); throws if the id exceeds 64 bits.
  VertexId id(std::uint64_t n, const BigInt& i, std::uint64_t k) const;
  /// First interior id of loops of length n.
  BigInt offset(std::uint64_t n) const;
  /// Decode an id; nullopt for ids that name no vertex.
  std::optional<LoopPosition> decode(VertexId v) const;

 private:
  const LoopSystem* ls_;
};

/// Computable locally finite graph seen from a root.
struct GraphOracle {
  VertexId root = 0;
  std::function<std::vector<VertexId>(VertexId)> out_neighbors;
};

enum class CountKind { P, F, T };

/// Exact counts indexed by path length n.
struct CountTable {
  CountKind kind = CountKind::P;
  VertexId from = 0;
  VertexId to = 0;
  std::vector<BigInt> values;
  std::vector<VertexId> constraint;  // T only: allowed interior vertices, sorted

  std::size_t horizon() const { return values.empty() ? 0 : values.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return values[n]; }
};

/// Default 10^6, overridden by MSKIT_VERTEX_BUDGET.
std::uint64_t vertex_budget();

bool is_strongly_connected(const FiniteGraph& g);
/// Strongly connected components as lists of dense indices.
std::vector<std::vector<std::size_t>> strongly_connected_components(const FiniteGraph& g);

CountTable path_counts(const FiniteGraph& g, VertexId u, VertexId v, std::size_t N);
CountTable first_return_counts(const FiniteGraph& g, VertexId u, std::size_t N);
/// Paths u -> v of length n whose interior vertices all lie in `allowed`.
CountTable constrained_path_counts(const FiniteGraph& g, VertexId u, VertexId v,
                                   std::span<const VertexId> allowed, std::size_t N);

/// f_uu(n) = a(n) for the loop system's base.
CountTable first_return_counts(const LoopSystem& ls, std::size_t N);

/// t_uv with interior in the complement of the finite set W, computed on
/// growing truncations V_q until stable.
struct StabilizedCounts {
  CountTable table;
  std::vector<std::uint64_t> truncations;  // q values tried
  std::uint64_t stable_at = 0;
};
StabilizedCounts constrained_counts_stabilized(const GraphOracle& oracle, VertexId u, VertexId v,
                                               std::span<const VertexId> W, std::size_t N);
StabilizedCounts constrained_counts_stabilized(const LoopSystem& ls, VertexId u, VertexId v,
                                               std::span<const VertexId> W, std::size_t N);

/// Vertex count 1 + sum_{n<=maxLen} a(n)(n-1).
BigInt materialized_size(const LoopSystem& ls, std::uint64_t max_len);
/// Throws BudgetExceeded above `budget` vertices.
FiniteGraph materialize(const LoopSystem& ls, std::uint64_t max_len, std::uint64_t budget = vertex_budget());

/// Induced subgraph on vertices within `radius` steps of the root.
FiniteGraph out_ball(const GraphOracle& oracle, std::size_t radius, std::uint64_t budget = vertex_budget());

}  // namespace mskit
