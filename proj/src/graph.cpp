#include "mskit/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>

#include "mskit/error.hpp"
#include "mskit/kernels.hpp"

namespace mskit {

namespace {

Csr build_csr(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  csr.targets.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    ++csr.offsets[a + 1];
    csr.targets.push_back(b);
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  return csr;
}

}  // namespace

FiniteGraph::FiniteGraph(std::vector<VertexId> vertices, std::vector<Arrow> arrows) : ids_(std::move(vertices)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) throw ParseError("duplicate vertex id");
  if (ids_.size() > std::numeric_limits<std::uint32_t>::max()) throw ParseError("too many vertices");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> fwd, bwd;
  fwd.reserve(arrows.size());
  bwd.reserve(arrows.size());
  for (const auto& [u, v] : arrows) {
    auto iu = find(u), iv = find(v);
    if (!iu || !iv)
      throw ParseError("arrow " + std::to_string(u) + "->" + std::to_string(v) + " uses an undeclared vertex");
    fwd.emplace_back(static_cast<std::uint32_t>(*iu), static_cast<std::uint32_t>(*iv));
    bwd.emplace_back(static_cast<std::uint32_t>(*iv), static_cast<std::uint32_t>(*iu));
  }
  std::sort(fwd.begin(), fwd.end());
  if (std::adjacent_find(fwd.begin(), fwd.end()) != fwd.end()) throw ParseError("at most one arrow per ordered pair");
  out_ = build_csr(ids_.size(), std::move(fwd));
  in_ = build_csr(ids_.size(), std::move(bwd));
}

std::vector<Arrow> FiniteGraph::arrows() const {
  std::vector<Arrow> out;
  out.reserve(arrow_count());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::uint32_t j : out_.row(i)) out.emplace_back(ids_[i], ids_[j]);
  return out;
}

std::optional<std::size_t> FiniteGraph::find(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t FiniteGraph::index(VertexId v) const {
  auto i = find(v);
  if (!i) throw UnknownVertex("unknown vertex " + std::to_string(v));
  return *i;
}

bool FiniteGraph::has_arrow(VertexId u, VertexId v) const {
  auto iu = find(u), iv = find(v);
  if (!iu || !iv) return false;
  auto row = out_.row(*iu);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(*iv));
}

FiniteGraph FiniteGraph::induced(std::span<const VertexId> keep) const {
  std::vector<std::uint8_t> in_set(size(), 0);
  std::vector<VertexId> vs;
  for (VertexId v : keep)
    if (auto i = find(v); i && !in_set[*i]) {
      in_set[*i] = 1;
      vs.push_back(v);
    }
  std::vector<Arrow> as;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!in_set[i]) continue;
    for (std::uint32_t j : out_.row(i))
      if (in_set[j]) as.emplace_back(ids_[i], ids_[j]);
  }
  return FiniteGraph(std::move(vs), std::move(as));
}

bool Path::valid_in(const FiniteGraph& g) const {
  if (vertices.empty()) return false;
  if (!g.contains(vertices.front())) return false;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if (!g.has_arrow(vertices[i], vertices[i + 1])) return false;
  return true;
}

void LoopSystem::validate() const {
  if (counts.at(1) > 1) throw ParseError("loop system: a(1) <= 1 (at most one arrow base->base)");
  if (counts.is_zero()) throw ParseError("loop system: needs at least one loop");
}

BigInt LoopIndexer::offset(std::uint64_t n) const {
  BigInt off = BigInt(ls_->base) + 1;
  std::uint64_t m = 0;
  while (auto next = ls_->counts.next_length(m)) {
    if (*next >= n) break;
    off += ls_->counts.at(*next) * BigInt(*next - 1);
    m = *next;
  }
  return off;
}

VertexId LoopIndexer::id(std::uint64_t n, const BigInt& i, std::uint64_t k) const {
  if (k < 1 || k >= n) throw Error("loop indexer: step out of range");
  if (i < 1 || i > ls_->counts.at(n)) throw UnknownVertex("loop indexer: no loop " + i.get_str() + " of length " + std::to_string(n));
  BigInt v = offset(n) + (i - 1) * BigInt(n - 1) + BigInt(k - 1);
  if (!v.fits_ulong_p()) throw Error("loop indexer: vertex id exceeds 64 bits");
  return v.get_ui();
}

std::optional<LoopPosition> LoopIndexer::decode(VertexId v) const {
  if (v == ls_->base) return LoopPosition{0, 0, 0};
  if (v < ls_->base) return std::nullopt;
  BigInt rel = BigInt(v) - BigInt(ls_->base) - 1;
  std::uint64_t m = 0;
  while (auto n = ls_->counts.next_length(m)) {
    m = *n;
    if (m < 2) continue;
    const BigInt block = ls_->counts.at(m) * BigInt(m - 1);
    if (rel < block) {
      BigInt q, r;
      const BigInt width = BigInt(m - 1);
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rel.get_mpz_t(), width.get_mpz_t());
      return LoopPosition{m, q + 1, r.get_ui() + 1};
    }
    rel -= block;
  }
  return std::nullopt;
}

std::uint64_t vertex_budget() {
  if (const char* env = std::getenv("MSKIT_VERTEX_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ParseError("MSKIT_VERTEX_BUDGET is not an integer");
    }
  }
  return 1000000;
}

bool is_strongly_connected(const FiniteGraph& g) {
  if (g.empty()) throw PreconditionError("is_strongly_connected: empty graph");
  auto reach_all = [&](const Csr& rows) {
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (std::uint32_t j : rows.row(i))
        if (!seen[j]) {
          seen[j] = 1;
          ++count;
          stack.push_back(j);
        }
    }
    return count == g.size();
  };
  return reach_all(g.out()) && reach_all(g.in());
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const FiniteGraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kNone), low(n, 0), edge_pos(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::size_t> stack, call;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back(root);
    while (!call.empty()) {
      const std::size_t v = call.back();
      if (index[v] == kNone) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      auto row = g.out().row(v);
      if (edge_pos[v] < row.size()) {
        const std::size_t w = row[edge_pos[v]++];
        if (index[w] == kNone)
          call.push_back(w);
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

CountTable path_counts(const FiniteGraph& g, VertexId u, VertexId v, std::size_t N) {
  const std::size_t iu = g.index(u), iv = g.index(v);
  CountTable t{CountKind::P, u, v, {}, {}};
  t.values.reserve(N + 1);
  std::vector<BigInt> x(g.size(), BigInt(0)), y(g.size(), BigInt(0));
  x[iu] = 1;
  t.values.push_back(x[iv]);
  for (std::size_t n = 1; n <= N; ++n) {
    kernels::gather_sum(g.in(), x, y);
    std::swap(x, y);
    t.values.push_back(x[iv]);
  }
  return t;
}

CountTable constrained_path_counts(const FiniteGraph& g, VertexId u, VertexId v, std::span<const VertexId> allowed,
                                   std::size_t N) {
  const std::size_t iu = g.index(u), iv = g.index(v);
  std::vector<std::uint8_t> mask(g.size(), 0);
  std::vector<VertexId> constraint;
  for (VertexId w : allowed)
    if (auto i = g.find(w)) {
      mask[*i] = 1;
      constraint.push_back(w);
    }
  std::sort(constraint.begin(), constraint.end());
  constraint.erase(std::unique(constraint.begin(), constraint.end()), constraint.end());

  CountTable t{CountKind::T, u, v, {}, std::move(constraint)};
  t.values.assign(N + 1, BigInt(0));
  if (N == 0) return t;
  t.values[1] = g.has_arrow(u, v) ? 1 : 0;

  // y[w] = paths u -> w of the current length with every vertex after u in S.
  std::vector<BigInt> y(g.size(), BigInt(0)), next(g.size(), BigInt(0));
  for (std::uint32_t j : g.out().row(iu))
    if (mask[j]) y[j] = 1;
  for (std::size_t n = 2; n <= N; ++n) {
    BigInt total = 0;
    for (std::uint32_t w : g.in().row(iv)) total += y[w];
    t.values[n] = total;
    if (n == N) break;
    kernels::gather_sum(g.in(), y, next, mask);
    std::swap(y, next);
  }
  return t;
}

CountTable first_return_counts(const FiniteGraph& g, VertexId u, std::size_t N) {
  if (N < 1) throw PreconditionError("first_return_counts: N >= 1");
  std::vector<VertexId> others;
  others.reserve(g.size());
  for (VertexId w : g.vertices())
    if (w != u) others.push_back(w);
  CountTable t = constrained_path_counts(g, u, u, others, N);
  t.kind = CountKind::F;
  t.constraint.clear();
  return t;
}

CountTable first_return_counts(const LoopSystem& ls, std::size_t N) {
  if (N < 1) throw PreconditionError("first_return_counts: N >= 1");
  return CountTable{CountKind::F, ls.base, ls.base, ls.counts.prefix(N), {}};
}

namespace {

std::vector<VertexId> complement_in(const FiniteGraph& g, std::span<const VertexId> W) {
  std::set<VertexId> w(W.begin(), W.end());
  std::vector<VertexId> out;
  for (VertexId v : g.vertices())
    if (!w.count(v)) out.push_back(v);
  return out;
}

}  // namespace

StabilizedCounts constrained_counts_stabilized(const GraphOracle& oracle, VertexId u, VertexId v,
                                               std::span<const VertexId> W, std::size_t N) {
  GraphOracle from_u{u, oracle.out_neighbors};
  const FiniteGraph ball = out_ball(from_u, N);
  StabilizedCounts out;
  if (!ball.contains(v)) {
    out.table = CountTable{CountKind::T, u, v, std::vector<BigInt>(N + 1, BigInt(0)), {}};
    return out;
  }
  const VertexId max_id = ball.vertices().back();
  std::uint64_t q = std::max(u, v);
  for (VertexId w : W) q = std::max(q, w);
  q = std::max<std::uint64_t>(q, 1);

  std::optional<std::vector<BigInt>> previous;
  for (;;) {
    std::vector<VertexId> keep;
    for (VertexId x : ball.vertices())
      if (x <= q) keep.push_back(x);
    const FiniteGraph trunc = ball.induced(keep);
    CountTable t = constrained_path_counts(trunc, u, v, complement_in(trunc, W), N);
    out.truncations.push_back(q);
    if (!previous || *previous != t.values) out.stable_at = q;
    previous = t.values;
    out.table = std::move(t);
    if (q >= max_id) break;
    q = (q > max_id / 2) ? max_id : 2 * q;
  }
  // The truncation constraint was V_q minus W; report the full complement.
  out.table.constraint.clear();
  return out;
}

StabilizedCounts constrained_counts_stabilized(const LoopSystem& ls, VertexId u, VertexId v,
                                               std::span<const VertexId> W, std::size_t N) {
  StabilizedCounts out;
  const bool base_only = W.size() == 1 && W[0] == ls.base;
  if (base_only && u == ls.base && v == ls.base) {
    // Every return avoiding the base internally is one whole loop.
    out.table = CountTable{CountKind::T, u, v, ls.counts.prefix(N), {}};
    return out;
  }
  // A path of length <= N between vertices of loops of length <= N never
  // completes a longer loop, so the materialized truncation is exact.
  const FiniteGraph g = materialize(ls, std::max<std::uint64_t>(N, 1));
  if (!g.contains(u) || !g.contains(v))
    throw PreconditionError("constrained_counts_stabilized: endpoints must lie on loops of length <= N");
  out.table = constrained_path_counts(g, u, v, complement_in(g, W), N);
  out.table.constraint.clear();
  out.truncations.push_back(g.vertices().back());
  out.stable_at = g.vertices().back();
  return out;
}

BigInt materialized_size(const LoopSystem& ls, std::uint64_t max_len) {
  BigInt total = 1;
  for (std::uint64_t n : ls.counts.support_up_to(max_len)) total += ls.counts.at(n) * BigInt(n - 1);
  return total;
}

FiniteGraph materialize(const LoopSystem& ls, std::uint64_t max_len, std::uint64_t budget) {
  ls.validate();
  const BigInt total = materialized_size(ls, max_len);
  if (total > BigInt(std::to_string(budget), 10))
    throw BudgetExceeded("materialize: " + total.get_str() + " vertices exceed the budget of " +
                         std::to_string(budget));
  const std::uint64_t count = total.get_ui();
  std::vector<VertexId> vs(count);
  for (std::uint64_t i = 0; i < count; ++i) vs[i] = ls.base + i;
  std::vector<Arrow> as;
  VertexId next = ls.base + 1;
  for (std::uint64_t n : ls.counts.support_up_to(max_len)) {
    const std::uint64_t loops = ls.counts.at(n).get_ui();
    for (std::uint64_t i = 0; i < loops; ++i) {
      if (n == 1) {
        as.emplace_back(ls.base, ls.base);
        continue;
      }
      VertexId prev = ls.base;
      for (std::uint64_t k = 1; k < n; ++k) {
        as.emplace_back(prev, next);
        prev = next++;
      }
      as.emplace_back(prev, ls.base);
    }
  }
  return FiniteGraph(std::move(vs), std::move(as));
}

FiniteGraph out_ball(const GraphOracle& oracle, std::size_t radius, std::uint64_t budget) {
  std::unordered_map<VertexId, std::size_t> depth;
  std::deque<VertexId> queue{oracle.root};
  depth[oracle.root] = 0;
  std::vector<VertexId> order{oracle.root};
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    if (depth[x] == radius) continue;
    for (VertexId y : oracle.out_neighbors(x)) {
      if (depth.count(y)) continue;
      depth[y] = depth[x] + 1;
      order.push_back(y);
      if (order.size() > budget) throw BudgetExceeded("out_ball: vertex budget exceeded");
      queue.push_back(y);
    }
  }
  std::vector<Arrow> as;
  for (VertexId x : order) {
    auto nbrs = oracle.out_neighbors(x);
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (VertexId y : nbrs)
      if (depth.count(y)) as.emplace_back(x, y);
  }
  return FiniteGraph(std::move(order), std::move(as));
}

}  // namespace mskit
