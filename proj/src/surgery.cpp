#include "mskit/surgery.hpp"

#include "mskit/error.hpp"

namespace mskit {

namespace {

struct TransientInput {
  ClassificationReport report;
  Rational R;
  Rational F_hi;  // certified upper bound on F(R)
};

TransientInput require_transient(const LoopSystem& ls, const std::string& op) {
  TransientInput in{classify_exact(ls), 0, 0};
  if (in.report.cls != VereJonesClass::Transient)
    throw PreconditionError(op + ": input is not transient (class " + to_string(in.report.cls) + ")");
  if (!in.report.R.is_exact()) throw ExactnessUnavailable(op + ": R is not an exact rational");
  in.R = in.report.R.value();
  in.F_hi = in.report.F_at_R.hi;
  return in;
}

void finalize(SurgeryResult& res) {
  res.verification = classify_exact(res.after);
  res.claim_verified = res.verification.cls == res.claimed;
  const ClassificationReport before = classify_exact(res.before);
  res.entropy_preserved =
      before.R.is_exact() && res.verification.R.is_exact() && before.R.value() == res.verification.R.value();
}

SurgeryResult start(const std::string& op, const LoopSystem& ls) {
  SurgeryResult res;
  res.operation = op;
  res.before = ls;
  res.after = ls;
  return res;
}

}  // namespace

SurgeryResult transient_extension(const LoopSystem& ls) {
  const TransientInput in = require_transient(ls, "transient_extension");
  std::uint64_t k = 2;
  Rational Rk = in.R * in.R;
  while (in.F_hi + Rk >= 1) {
    ++k;
    Rk *= in.R;
  }
  SurgeryResult res = start("extend-transient", ls);
  res.params["k"] = std::to_string(k);
  res.after.counts = ls.counts.with_count(k, ls.counts.at(k) + 1);
  res.claimed = VereJonesClass::Transient;
  finalize(res);
  return res;
}

SurgeryResult recurrent_extension(const LoopSystem& ls, std::size_t max_terms) {
  const TransientInput in = require_transient(ls, "recurrent_extension");
  if (!in.report.F_at_R.is_exact()) throw ExactnessUnavailable("recurrent_extension: F(R) is not exact");
  const Rational& R = in.R;

  LoopAddition add;
  add.p = R * 2 >= 1 ? BigInt(1) : ceil(Rational(1) / (2 * R));
  add.alpha = Rational(add.p) * R;
  add.deficiency = 1 - in.report.F_at_R.value();
  const Rational& alpha = add.alpha;
  const Rational half = add.deficiency / 2;
  auto tail_from = [&](std::uint64_t n) -> Rational { return pow(alpha, n) / (1 - alpha); };

  Rational partial = 0;
  std::uint64_t prev = 1;
  bool done = false;
  for (std::size_t i = 0; i < max_terms; ++i) {
    // Greatest n > prev (n >= 2) with partial + tail(n) > D/2.
    std::uint64_t n = std::max<std::uint64_t>(prev + 1, 2);
    while (partial + tail_from(n + 1) > half) ++n;
    partial += pow(alpha, n);
    add.trace.push_back({n, partial, tail_from(n + 1)});
    add.additions.emplace_back(n, 2 * pow(add.p, n));
    prev = n;
    if (partial == half) {
      done = true;
      break;
    }
  }
  add.index_set_finite = done;
  add.residual = half - partial;
  if (!done)
    add.continuation =
        "n_{i+1} = greatest n > n_i with sum alpha^{n_j} + alpha^n/(1-alpha) > D/2; add 2p^n loops of length n";

  SurgeryResult res = start("extend-recurrent", ls);
  res.params["maxTerms"] = std::to_string(max_terms);
  SequenceFamily counts = ls.counts;
  for (const auto& [n, m] : add.additions) counts = counts.with_count(n, counts.at(n) + m);
  res.after.counts = counts;
  if (done) {
    res.claimed = in.report.mean_at_R.diverges() ? VereJonesClass::NullRecurrent : VereJonesClass::PositiveRecurrent;
  } else {
    res.claimed = VereJonesClass::Transient;
    res.notes.push_back("index set truncated after " + std::to_string(max_terms) +
                        " terms; the output spec is the finite truncation");
  }
  res.addition = std::move(add);
  finalize(res);
  return res;
}

SurgeryResult null_recurrent_padding(const LoopSystem& ls, std::uint64_t horizon) {
  const TransientInput in = require_transient(ls, "null_recurrent_padding");
  const Rational& R = in.R;
  const Rational D = 1 - in.F_hi;

  Padding pad;
  pad.k = 1;
  Rational Rk = R;
  while (Rk / (1 - R) >= D) {
    ++pad.k;
    Rk *= R;
  }

  SurgeryResult res = start("pad-null", ls);
  res.params["horizon"] = std::to_string(horizon);
  res.params["k"] = std::to_string(pad.k);
  res.claimed = VereJonesClass::Transient;

  if (horizon >= pad.k) {
    const Rational inv = 1 / R;
    if (is_integer(inv) && inv.get_num().fits_ulong_p()) {
      const std::uint64_t b = inv.get_num().get_ui();
      // b^{b^n - n} loops of length b^n, n >= k.
      LacunaryTerm t{Support::powers(b, pad.k), 1, Rational(b), Rational(1, b), false};
      pad.tail = t;
      res.after.counts = ls.counts.with_tail(t);
      for (std::uint64_t n = pad.k; n <= horizon; ++n) {
        auto len = t.support.length(n);
        if (!len) break;
        pad.contributions.emplace_back(*len, Rational(1));
      }
      pad.min_contribution = Rational(1);
    } else {
      SequenceFamily counts = ls.counts;
      for (std::uint64_t n = pad.k; n <= horizon; ++n) {
        const BigInt m = floor(pow(inv, n));
        if (m > 1000000) {
          res.notes.push_back("padding stopped at n = " + std::to_string(n) + " (loop length beyond 10^6)");
          break;
        }
        const std::uint64_t len = m.get_ui();
        const BigInt count = floor(pow(inv, len - n));
        pad.explicit_terms.emplace_back(len, count);
        counts = counts.with_count(len, counts.at(len) + count);
        const Rational contrib = Rational(len) * Rational(count) * pow(R, len);
        pad.contributions.emplace_back(len, contrib);
        if (!pad.min_contribution || contrib < *pad.min_contribution) pad.min_contribution = contrib;
      }
      res.after.counts = counts;
      pad.continuation = "for n > horizon add floor(R^{-(m_n-n)}) loops of length m_n = floor(R^{-n})";
    }
  }
  res.padding = std::move(pad);
  finalize(res);
  return res;
}

SurgeryResult branch_contraction(const LoopSystem& ls, std::uint64_t n, const BigInt& i) {
  const BigInt an = ls.counts.at(n);
  if (i < 1 || i > an)
    throw PreconditionError("branch_contraction: no loop " + i.get_str() + " of length " + std::to_string(n));
  if (ls.counts.bounded()) {
    BigInt total = 0;
    for (const auto& [len, c] : ls.counts.explicit_terms()) total += c;
    if (total < 2) throw PreconditionError("branch_contraction: needs at least two loops");
  }
  const SprCertificate cert = spr_test(ls);
  if (cert.spr) throw PreconditionError("branch_contraction: SPR input, h(G')<h(G) for all proper subgraphs");

  SurgeryResult res = start("contract", ls);
  res.params["loop"] = std::to_string(n);
  res.params["index"] = i.get_str();
  res.after.counts = ls.counts.with_count(n, an - 1);
  // F(L) <= 1 drops strictly: the remaining system is transient with R = L.
  res.claimed = VereJonesClass::Transient;
  finalize(res);
  if (!res.entropy_preserved) throw Error("branch_contraction: entropy changed; no contraction of equal entropy");
  return res;
}

SurgeryResult entropy_concentration(const LoopSystem& ls, std::uint64_t n) {
  if (ls.counts.bounded()) throw PreconditionError("entropy_concentration: loop lengths are bounded");
  const ClassificationReport rep = classify_exact(ls);
  if (rep.spr) throw PreconditionError("entropy_concentration: SPR input");

  SurgeryResult res = start("concentrate", ls);
  res.params["n"] = std::to_string(n);
  res.after.counts = ls.counts.without_lengths_below(n);
  const auto first = ls.counts.next_length(0);
  res.claimed = (first && *first >= n) ? rep.cls : VereJonesClass::Transient;
  finalize(res);
  return res;
}

}  // namespace mskit
