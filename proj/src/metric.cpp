#include "mskit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "mskit/error.hpp"

namespace mskit {

Rational vertex_distance(std::uint64_t n, std::uint64_t m) {
  if (n > (std::uint64_t{1} << 24) || m > (std::uint64_t{1} << 24))
    throw PreconditionError("vertex_distance: index too large for an exact value");
  const Rational d = two_pow(-static_cast<std::int64_t>(n)) - two_pow(-static_cast<std::int64_t>(m));
  return d < 0 ? Rational(-d) : d;
}

BiPath BiPath::periodic(std::vector<VertexId> cycle) {
  if (cycle.empty()) throw PreconditionError("BiPath: empty cycle");
  BiPath p;
  p.left = cycle;
  p.right = std::move(cycle);
  return p;
}

VertexId BiPath::at(std::int64_t i) const {
  if (i >= start && i < end()) return core[static_cast<std::size_t>(i - start)];
  if (i >= end()) {
    if (right.empty()) throw PreconditionError("BiPath: no right extension");
    return right[static_cast<std::size_t>((i - end()) % static_cast<std::int64_t>(right.size()))];
  }
  if (left.empty()) throw PreconditionError("BiPath: no left extension");
  const auto L = static_cast<std::int64_t>(left.size());
  return left[static_cast<std::size_t>(((i - start) % L + L) % L)];
}

BiPath BiPath::shifted(std::int64_t k) const {
  BiPath out = *this;
  out.start -= k;
  return out;
}

bool BiPath::is_path(const std::function<bool(VertexId, VertexId)>& arrow) const {
  const std::int64_t lo = start - static_cast<std::int64_t>(left.size()) - 1;
  const std::int64_t hi = end() + static_cast<std::int64_t>(right.size()) + 1;
  for (std::int64_t i = lo; i < hi; ++i)
    if (!arrow(at(i), at(i + 1))) return false;
  return true;
}

namespace {

std::pair<Rational, Rational> inv_pow(std::uint64_t a, std::uint64_t P) {
  if (a <= P) {
    const Rational v = two_pow(-static_cast<std::int64_t>(a));
    return {v, v};
  }
  return {0, two_pow(-static_cast<std::int64_t>(P))};
}

}  // namespace

DyadicInterval path_distance(const BiPath& x, const BiPath& y, std::uint64_t K) {
  const std::uint64_t P = K + 64;
  Rational lo = 0, hi = 0;
  const auto k = static_cast<std::int64_t>(K);
  for (std::int64_t n = -k; n <= k; ++n) {
    const VertexId a = x.at(n), b = y.at(n);
    if (a == b) continue;
    const auto [alo, ahi] = inv_pow(a, P);
    const auto [blo, bhi] = inv_pow(b, P);
    const Rational dlo = std::max({Rational(0), Rational(alo - bhi), Rational(blo - ahi)});
    const Rational dhi = std::max(Rational(ahi - blo), Rational(bhi - alo));
    const Rational w = two_pow(-std::abs(n));
    lo += dlo * w;
    hi += dhi * w;
  }
  hi = std::min(Rational(3), Rational(hi + two_pow(1 - k)));
  lo = std::min(lo, hi);
  return {lo, hi};
}

BallMembership bowen_ball_member(const BiPath& center, const BiPath& y, const Rational& r, std::uint64_t n,
                                 std::uint64_t K0, std::uint64_t K_cap) {
  if (r <= 0 || n < 1) throw PreconditionError("bowen_ball_member: r > 0 and n >= 1");
  std::vector<std::uint64_t> pending(n);
  std::iota(pending.begin(), pending.end(), 0);
  std::uint64_t K = K0;
  for (;;) {
    std::vector<std::uint64_t> still;
    for (std::uint64_t i : pending) {
      const auto shift = static_cast<std::int64_t>(i);
      const DyadicInterval d = path_distance(center.shifted(shift), y.shifted(shift), K);
      if (d.lo >= r) return {BallStatus::Out, K};
      if (!(d.hi < r)) still.push_back(i);
    }
    if (still.empty()) return {BallStatus::In, K};
    if (K * 2 > K_cap) return {BallStatus::Unresolved, K};
    pending = std::move(still);
    K *= 2;
  }
}

bool constraint_set_member(const BiPath& candidate, const BiPath& reference, const std::vector<VertexId>& V) {
  auto period = [](std::size_t a, std::size_t b) -> std::int64_t {
    const std::size_t l = std::lcm(std::max<std::size_t>(a, 1), std::max<std::size_t>(b, 1));
    if (l > 1000000) throw PreconditionError("constraint_set_member: windows incompatible (period too long)");
    return static_cast<std::int64_t>(l);
  };
  const std::set<VertexId> vs(V.begin(), V.end());
  const std::int64_t lo = std::min(candidate.start, reference.start) - period(candidate.left.size(), reference.left.size());
  const std::int64_t hi = std::max(candidate.end(), reference.end()) + period(candidate.right.size(), reference.right.size());
  for (std::int64_t i = lo; i < hi; ++i) {
    const VertexId r = reference.at(i), c = candidate.at(i);
    if (vs.count(r)) {
      if (c != r) return false;
    } else if (vs.count(c)) {
      return false;
    }
  }
  return true;
}

bool separated_check(const std::vector<BiPath>& paths, const Rational& delta, std::uint64_t n, std::uint64_t K0,
                     std::uint64_t K_cap) {
  if (delta <= 0) throw PreconditionError("separated_check: delta > 0");
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      std::vector<std::uint64_t> pending(n);
      std::iota(pending.begin(), pending.end(), 0);
      bool separated = false;
      for (std::uint64_t K = K0; !separated; K *= 2) {
        if (K > K_cap) throw Unresolved("separated_check: comparison unresolved at the window cap");
        std::vector<std::uint64_t> still;
        for (std::uint64_t k : pending) {
          const auto shift = static_cast<std::int64_t>(k);
          const DyadicInterval d = path_distance(paths[a].shifted(shift), paths[b].shifted(shift), K);
          if (d.lo >= delta) {
            separated = true;
            break;
          }
          if (!(d.hi < delta)) still.push_back(k);
        }
        if (separated) break;
        if (still.empty()) return false;
        pending = std::move(still);
      }
    }
  }
  return true;
}

std::vector<VertexId> loop_vertices(const LoopSystem& ls, const LoopRef& loop) {
  std::vector<VertexId> out{ls.base};
  if (loop.length == 1) {
    if (ls.counts.at(1) < 1) throw PreconditionError("loop_vertices: no loop of length 1");
    return out;
  }
  const LoopIndexer idx(ls);
  for (std::uint64_t k = 1; k < loop.length; ++k) out.push_back(idx.id(loop.length, loop.index, k));
  return out;
}

BiPath loop_word_path(const LoopSystem& ls, const std::vector<LoopRef>& loops, const LoopRef& filler) {
  BiPath p;
  p.left = loop_vertices(ls, filler);
  p.right = p.left;
  for (const LoopRef& l : loops) {
    const auto vs = loop_vertices(ls, l);
    p.core.insert(p.core.end(), vs.begin(), vs.end());
  }
  return p;
}

LocalEntropyProbe local_entropy_probe(const LoopSystem& ls, int p_exp, int q_exp, std::uint64_t n,
                                      std::size_t budget, std::uint64_t max_len, std::size_t max_centers) {
  if (n < 4) throw PreconditionError("local_entropy_probe: n >= 4");
  if (budget == 0) throw BudgetExceeded("local_entropy_probe: budget exhausted");
  ls.validate();
  LocalEntropyProbe out;
  out.epsilon = two_pow(-(p_exp - 1));
  out.delta = two_pow(-q_exp);
  out.note = "heuristic lower-bound probe of separated-set growth inside Bowen balls; not certified";
  try {
    out.h_G = entropy(ls).value;
  } catch (const Error&) {
    out.h_G = {0, 0};
  }

  std::vector<LoopRef> loops;
  for (std::uint64_t len : ls.counts.support_up_to(max_len)) {
    const BigInt a = ls.counts.at(len);
    for (BigInt i = 1; i <= a && loops.size() < budget; ++i) loops.push_back({len, i});
  }
  if (loops.empty()) throw PreconditionError("local_entropy_probe: no loop of length <= max_len");
  const LoopRef filler = loops.front();

  // Lexicographic enumeration of loop words covering coordinates 0..n.
  std::vector<BiPath> candidates;
  std::vector<LoopRef> word;
  std::function<void(std::uint64_t)> dfs = [&](std::uint64_t covered) {
    if (candidates.size() >= budget) return;
    if (covered > n) {
      candidates.push_back(loop_word_path(ls, word, filler));
      return;
    }
    for (const LoopRef& l : loops) {
      if (candidates.size() >= budget) return;
      word.push_back(l);
      dfs(covered + l.length);
      word.pop_back();
    }
  };
  dfs(0);
  out.candidates = candidates.size();

  const std::size_t centers = std::min(max_centers, candidates.size());
  for (std::size_t c = 0; c < centers; ++c) {
    std::vector<const BiPath*> selected;
    for (const BiPath& y : candidates) {
      if (bowen_ball_member(candidates[c], y, out.epsilon, n).status != BallStatus::In) continue;
      bool ok = true;
      for (const BiPath* s : selected) {
        try {
          if (!separated_check({*s, y}, out.delta, n)) {
            ok = false;
            break;
          }
        } catch (const Unresolved&) {
          ok = false;
          break;
        }
      }
      if (ok) selected.push_back(&y);
    }
    out.centers = c + 1;
    if (selected.size() > out.best_count) {
      out.best_count = selected.size();
      out.value = std::log(static_cast<double>(selected.size())) / static_cast<double>(n);
    }
  }
  return out;
}

namespace {

constexpr const char* kCaveat = "h_inf < h(G) does not imply that G is strongly positive recurrent";

void finish(EntropyAtInfinity& out) {
  out.limit = out.stages.back();
  out.below_h = out.limit.hi < out.h_G.lo;
  out.caveat_instance = out.below_h && out.spr.has_value() && !*out.spr;
  out.caveat = kCaveat;
}

}  // namespace

EntropyAtInfinity entropy_at_infinity(const LoopSystem& ls, const std::vector<std::vector<VertexId>>& exhaustion) {
  if (exhaustion.empty()) throw PreconditionError("entropy_at_infinity: empty exhaustion");
  ls.validate();
  EntropyAtInfinity out;
  out.h_G = entropy(ls).value;
  try {
    out.spr = spr_test(ls).spr;
  } catch (const PreconditionError&) {
  }
  const LoopIndexer idx(ls);
  bool has_base = false;
  for (const auto& stage : exhaustion) {
    std::map<std::uint64_t, std::set<BigInt>> touched;
    bool base = false;
    for (VertexId v : stage) {
      auto pos = idx.decode(v);
      if (!pos) throw UnknownVertex("entropy_at_infinity: unknown vertex " + std::to_string(v));
      if (pos->length == 0)
        base = true;
      else
        touched[pos->length].insert(pos->index);
    }
    if (base) {
      // The complement is a disjoint union of finite paths.
      has_base = true;
      out.stages.push_back({0, 0});
      continue;
    }
    SequenceFamily rest = ls.counts;
    for (const auto& [len, ids] : touched) rest = rest.with_count(len, rest.at(len) - BigInt(ids.size()));
    if (rest.is_zero()) {
      out.stages.push_back({0, 0});
      continue;
    }
    out.stages.push_back(entropy(LoopSystem{ls.base, rest}).value);
  }
  if (!has_base) throw PreconditionError("entropy_at_infinity: the exhaustion never contains the base vertex");
  finish(out);
  return out;
}

EntropyAtInfinity entropy_at_infinity(const FiniteGraph& g, const std::vector<std::vector<VertexId>>& exhaustion) {
  if (exhaustion.empty()) throw PreconditionError("entropy_at_infinity: empty exhaustion");
  EntropyAtInfinity out;
  out.h_G = entropy(g).value;
  out.spr = true;
  for (const auto& stage : exhaustion) {
    const std::set<VertexId> removed(stage.begin(), stage.end());
    std::vector<VertexId> keep;
    for (VertexId v : g.vertices())
      if (!removed.count(v)) keep.push_back(v);
    const FiniteGraph rest = g.induced(keep);
    Rational lo = 0, hi = 0;
    for (const auto& scc : strongly_connected_components(rest)) {
      std::vector<VertexId> ids;
      for (std::size_t i : scc) ids.push_back(rest.id(i));
      const FiniteGraph sub = rest.induced(ids);
      if (sub.arrow_count() == 0) continue;
      const PerronEnclosure pe = perron_enclosure(sub);
      lo = std::max(lo, pe.lo);
      hi = std::max(hi, pe.hi);
    }
    out.stages.push_back(hi == 0 ? RealInterval{0, 0} : log_enclosure(lo, hi));
  }
  finish(out);
  return out;
}

std::vector<std::vector<VertexId>> materialization_exhaustion(const LoopSystem& ls,
                                                              const std::vector<std::uint64_t>& levels) {
  std::vector<std::vector<VertexId>> out;
  for (std::uint64_t m : levels) {
    const BigInt size = materialized_size(ls, m);
    if (size > BigInt(std::to_string(vertex_budget())))
      throw BudgetExceeded("materialization_exhaustion: level " + std::to_string(m) + " exceeds the vertex budget");
    std::vector<VertexId> stage(size.get_ui());
    std::iota(stage.begin(), stage.end(), ls.base);
    out.push_back(std::move(stage));
  }
  return out;
}

}  // namespace mskit
