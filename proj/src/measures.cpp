#include "mskit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mskit/error.hpp"
#include "mskit/kernels.hpp"

namespace mskit {

namespace {

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace

Rational ParryMeasure::transition(VertexId u, VertexId v) const {
  if (!graph.has_arrow(u, v)) return 0;
  return Rational(right[graph.index(v)]) / (lambda_hat * Rational(right[graph.index(u)]));
}

std::vector<Rational> ParryMeasure::stationary_vector() const {
  BigInt denom = 0;
  for (std::size_t i = 0; i < right.size(); ++i) denom += left[i] * right[i];
  std::vector<Rational> pi(right.size());
  for (std::size_t i = 0; i < right.size(); ++i) pi[i] = ratio(left[i] * right[i], denom);
  return pi;
}

Rational ParryMeasure::stationary(VertexId v) const { return stationary_vector()[graph.index(v)]; }

ParryMeasure parry_measure(const FiniteGraph& g, int tol_exp) {
  const PerronEnclosure pr = perron_enclosure(g, tol_exp - 8, false);
  const PerronEnclosure pl = perron_enclosure(g, tol_exp - 8, true);
  ParryMeasure pm;
  pm.graph = g;
  pm.lambda_lo = std::max(pr.lo, pl.lo);
  pm.lambda_hi = std::min(pr.hi, pl.hi);
  if (pm.lambda_hi <= 0) throw PreconditionError("parry_measure: graph has no cycle");
  pm.lambda_hat = (pm.lambda_lo + pm.lambda_hi) / 2;
  pm.right = pr.certificate;
  pm.left = pl.certificate;
  pm.entropy = log_enclosure(pm.lambda_lo, pm.lambda_hi);

  const std::size_t n = g.size();
  std::vector<BigInt> ar(n), atl(n);
  kernels::gather_sum(g.out(), pm.right, ar);
  kernels::gather_sum(g.in(), pm.left, atl);
  BigInt denom = 0;
  for (std::size_t i = 0; i < n; ++i) denom += pm.left[i] * pm.right[i];
  pm.row_residual = 0;
  pm.stationarity_residual = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational row = abs(Rational(ar[i]) / (pm.lambda_hat * Rational(pm.right[i])) - 1);
    pm.row_residual = std::max(pm.row_residual, row);
    const Rational pi = ratio(pm.left[i] * pm.right[i], denom);
    const Rational st = pi * abs(Rational(atl[i]) / (pm.lambda_hat * Rational(pm.left[i])) - 1);
    pm.stationarity_residual = std::max(pm.stationarity_residual, st);
  }
  return pm;
}

Rational LoopMaximalMeasure::per_loop_prob(std::uint64_t n) const { return pow(R.value(), n); }

Rational LoopMaximalMeasure::return_prob(std::uint64_t n) const {
  return Rational(system.counts.at(n)) * per_loop_prob(n);
}

Rational LoopMaximalMeasure::base_frequency() const { return 1 / mean_return.value(); }

LoopMaximalMeasure loop_maximal_measure(const LoopSystem& ls) {
  const ClassificationReport rep = classify_exact(ls);
  if (rep.cls != VereJonesClass::PositiveRecurrent)
    throw PreconditionError("no maximal measure: the system is " + to_string(rep.cls) +
                            ", and a maximal measure exists iff the graph is positive recurrent (Gurevich)");
  return LoopMaximalMeasure{ls, rep.R, rep.mean_at_R, rep.R.neg_log()};
}

Rational cylinder_measure(const LoopMaximalMeasure& mm, const std::vector<VertexId>& word) {
  if (word.empty()) throw PreconditionError("cylinder_measure: empty word");
  if (!mm.R.is_exact() || !mm.mean_return.is_exact())
    throw ExactnessUnavailable("cylinder_measure: R or the mean return time is not exact");
  const LoopSystem& ls = mm.system;
  const LoopIndexer idx(ls);
  auto decode = [&](VertexId v) {
    auto pos = idx.decode(v);
    if (!pos) throw PreconditionError("cylinder_measure: " + std::to_string(v) + " is not a vertex");
    return *pos;
  };

  std::vector<LoopPosition> pos;
  pos.reserve(word.size());
  for (VertexId v : word) pos.push_back(decode(v));

  Rational measure = mm.base_frequency();
  if (pos[0].length != 0) measure *= mm.per_loop_prob(pos[0].length);
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
    const LoopPosition& x = pos[i];
    const LoopPosition& y = pos[i + 1];
    bool ok = false;
    if (x.length == 0) {
      if (y.length == 0 && ls.counts.at(1) > 0) {
        ok = true;
        measure *= mm.per_loop_prob(1);
      } else if (y.length != 0 && y.step == 1) {
        ok = true;
        measure *= mm.per_loop_prob(y.length);
      }
    } else if (x.step + 1 == x.length) {
      ok = y.length == 0;
    } else {
      ok = y.length == x.length && y.index == x.index && y.step == x.step + 1;
    }
    if (!ok)
      throw PreconditionError("cylinder_measure: " + std::to_string(word[i]) + "->" + std::to_string(word[i + 1]) +
                              " is not an arrow");
  }
  return measure;
}

AbramovReport abramov_check(const LoopMaximalMeasure& mm, std::uint64_t N) {
  const Rational R = mm.R.is_exact() ? mm.R.value() : Rational((mm.R.lo + mm.R.hi) / 2);
  const Rational m = mm.mean_return.is_exact() ? mm.mean_return.value()
                                                : Rational((mm.mean_return.lo + mm.mean_return.hi) / 2);
  AbramovReport rep;
  rep.horizon = N;
  const double lnR = ln(R);
  rep.target = lnR == 0.0 ? 0.0 : -lnR;

  double num = 0;
  Rational den_partial = 0;
  for (std::uint64_t n : mm.system.counts.support_up_to(N)) {
    const BigInt a = mm.system.counts.at(n);
    const double logP = static_cast<double>(n) * lnR;
    // a(n) loops, each with -P log P.
    num += std::exp(ln(a) + logP) * -logP;
    den_partial += Rational(a) * Rational(n) * pow(R, n);
  }
  // Beyond N every loop contributes -P log P = (-log R) n P exactly.
  num += rep.target * Rational(m - den_partial).get_d();
  rep.value = num / m.get_d();
  rep.deviation = std::abs(rep.value - rep.target);
  rep.within = rep.deviation <= std::ldexp(1.0, -20);
  return rep;
}

RenewalLimitReport renewal_limit_check(const LoopSystem& ls, std::size_t N, std::size_t window) {
  const ClassificationReport rep = classify_exact(ls);
  if (rep.cls != VereJonesClass::PositiveRecurrent)
    throw PreconditionError("renewal_limit_check: the system is " + to_string(rep.cls) + ", not positive recurrent");
  RenewalLimitReport out;
  std::uint64_t g = 0, cur = 0;
  for (int i = 0; i < 64 && g != 1; ++i) {
    auto n = ls.counts.next_length(cur);
    if (!n) break;
    g = std::gcd(g, *n);
    cur = *n;
  }
  out.period = g;
  if (g != 1) {
    out.skipped = true;
    return out;
  }
  if (!rep.R.is_exact() || !rep.mean_at_R.is_exact())
    throw ExactnessUnavailable("renewal_limit_check: R or the mean is not exact");
  out.limit = 1 / rep.mean_at_R.value();
  const Rational& R = rep.R.value();
  const std::vector<BigInt> p = renewal_convolve(ls.counts.prefix(N), N);
  out.from = N > window ? N - window : 1;
  out.to = N;
  Rational Rn = pow(R, out.from);
  for (std::size_t n = out.from; n <= N; ++n, Rn *= R) {
    const Rational v = Rational(p[n]) * Rn;
    const double dev = abs(Rational(v - out.limit)).get_d();
    out.max_deviation = std::max(out.max_deviation, dev);
    out.values.emplace_back(n, v.get_d());
  }
  return out;
}

EscapeSequence escape_sequence(const LoopSystem& ls, std::size_t stages) {
  if (ls.counts.bounded()) throw PreconditionError("escape_sequence: loop lengths are bounded");
  const ClassificationReport rep = classify_exact(ls);
  if (rep.spr) throw PreconditionError("escape_sequence: SPR input");

  EscapeSequence out;
  out.target = rep.R.neg_log();
  std::vector<std::uint64_t> lengths;
  std::uint64_t cur = 0;
  while (lengths.size() < stages + 1) {
    auto n = ls.counts.next_length(cur);
    if (!n) throw PreconditionError("escape_sequence: not enough loop lengths");
    lengths.push_back(*n);
    cur = *n;
  }

  for (std::size_t j = 1; j <= stages; ++j) {
    EscapeStage st;
    st.shortest = lengths[j];
    const double floor_j = out.target.hi - std::ldexp(1.0, -static_cast<int>(j));
    const double prev = out.stages.empty() ? -1.0 : out.stages.back().entropy.hi;
    std::uint64_t M = st.shortest;
    for (int tries = 0;; ++tries) {
      st.loops = ls.counts.restricted(st.shortest, M);
      st.root = solve_f_eq_1(st.loops);
      st.entropy = st.root.neg_log();
      if (st.entropy.lo > std::max(floor_j, prev)) break;
      auto next = ls.counts.next_length(M);
      if (!next || tries > 4096) throw Unresolved("escape_sequence: stage entropy did not reach the target");
      M = *next;
    }
    st.longest = M;
    // Mass at the root is F(x)/m(x), decreasing in x.
    const SeriesValue F_hi = family_eval(st.loops, st.root.hi, -64);
    const SeriesValue m_hi = family_eval(st.loops, st.root.hi, -64, Weight::Linear);
    const SeriesValue F_lo = family_eval(st.loops, st.root.lo, -64);
    const SeriesValue m_lo = family_eval(st.loops, st.root.lo, -64, Weight::Linear);
    st.base_mass_lo = F_hi.lo / m_hi.hi;
    st.base_mass_hi = F_lo.hi / m_lo.lo;

    if (!out.stages.empty()) {
      const EscapeStage& last = out.stages.back();
      if (!(st.entropy.lo > last.entropy.hi)) out.entropies_increasing = false;
      if (!(st.base_mass_hi < last.base_mass_lo)) out.masses_decreasing = false;
    }
    if (st.base_mass_hi > Rational(1, st.shortest)) out.masses_below_inverse_shortest = false;
    out.stages.push_back(std::move(st));
  }
  return out;
}

}  // namespace mskit
