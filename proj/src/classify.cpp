#include "mskit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mskit/error.hpp"
#include "mskit/kernels.hpp"

namespace mskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string to_string(VereJonesClass c) {
  switch (c) {
    case VereJonesClass::Transient:
      return "Transient";
    case VereJonesClass::NullRecurrent:
      return "NullRecurrent";
    case VereJonesClass::PositiveRecurrent:
      return "PositiveRecurrent";
  }
  return "?";
}

VereJonesClass parse_class(const std::string& s) {
  if (s == "Transient") return VereJonesClass::Transient;
  if (s == "NullRecurrent") return VereJonesClass::NullRecurrent;
  if (s == "PositiveRecurrent") return VereJonesClass::PositiveRecurrent;
  throw ParseError("unknown class '" + s + "'");
}

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "empirical"; }

std::string to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::NegLogR:
      return "radius";
    case EntropyMethod::FiniteSubgraphSup:
      return "truncation";
    case EntropyMethod::RootOfF:
      return "root";
  }
  return "?";
}

std::string to_string(GzVerdict v) {
  switch (v) {
    case GzVerdict::PassesSPR:
      return "PassesSPR";
    case GzVerdict::Fails:
      return "Fails";
    case GzVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

RadiusR radius_R(const LoopSystem& ls, int tol_exp) {
  ls.validate();
  RadiusR out;
  out.L = family_radius(ls.counts);
  Discriminant& d = out.discriminant;
  if (out.L.infinite) {
    d.F_at_L = SeriesValue::divergent();
    d.sign = 1;
    d.infinite = true;
  } else {
    if (!out.L.is_exact())
      throw ExactnessUnavailable("classify: L is only known as an enclosure; use empirical mode");
    d.F_at_L = family_eval(ls.counts, out.L.value(), tol_exp);
    auto c = d.F_at_L.compare(1);
    if (!c) throw ExactnessUnavailable("classify: cannot decide F(L) against 1; use empirical mode");
    d.sign = *c;
    d.infinite = d.F_at_L.diverges();
    if (!d.infinite && d.F_at_L.lo > 0) d.value = log_enclosure(d.F_at_L.lo, d.F_at_L.hi);
  }
  if (d.sign > 0) {
    out.R = solve_f_eq_1(ls.counts, tol_exp);
  } else {
    out.R = RadiusInfo::exact(RadiusInfo::Kind::R, out.L.value());
  }
  return out;
}

namespace {

void require_positive_entropy(const RadiusInfo& R) {
  if (R.hi >= 1) throw ZeroEntropyError("entropy zero (R >= 1); positive entropy is required");
}

SeriesValue eval_at(const SequenceFamily& a, const RadiusInfo& x, int tol_exp, Weight w) {
  if (x.is_exact()) return family_eval(a, x.value(), tol_exp, w);
  const SeriesValue lo = family_eval(a, x.lo, tol_exp, w), hi = family_eval(a, x.hi, tol_exp, w);
  if (hi.diverges()) return hi;
  return SeriesValue::interval(lo.lo, hi.hi, std::max(lo.tail_bound, hi.tail_bound));
}

std::uint64_t support_gcd(const SequenceFamily& a) {
  std::uint64_t g = 0, cur = 0;
  for (int i = 0; i < 64 && g != 1; ++i) {
    auto n = a.next_length(cur);
    if (!n) break;
    g = std::gcd(g, *n);
    cur = *n;
  }
  return g;
}

}  // namespace

ClassificationReport classify_exact(const LoopSystem& ls, int tol_exp) {
  RadiusR rr = radius_R(ls, tol_exp);
  require_positive_entropy(rr.R);

  ClassificationReport rep;
  rep.mode = Mode::Exact;
  rep.R = rr.R;
  rep.L = rr.L;
  rep.discriminant = rr.discriminant;
  const int sign = rr.discriminant.sign;
  if (sign < 0) {
    rep.cls = VereJonesClass::Transient;
    rep.F_at_R = rr.discriminant.F_at_L;
    rep.mean_at_R = family_eval(ls.counts, rr.L.value(), tol_exp, Weight::Linear);
    rep.notes.push_back("F(L) < 1: transient, R = L");
  } else if (sign == 0) {
    rep.F_at_R = rr.discriminant.F_at_L;
    rep.mean_at_R = family_eval(ls.counts, rr.L.value(), tol_exp, Weight::Linear);
    rep.cls = rep.mean_at_R.diverges() ? VereJonesClass::NullRecurrent : VereJonesClass::PositiveRecurrent;
    rep.notes.push_back("F(L) = 1: recurrent with R = L, not SPR");
  } else {
    rep.cls = VereJonesClass::PositiveRecurrent;
    rep.spr = true;
    rep.F_at_R = eval_at(ls.counts, rr.R, tol_exp, Weight::Plain);
    rep.mean_at_R = eval_at(ls.counts, rr.R, tol_exp, Weight::Linear);
    rep.notes.push_back("F(L) > 1: strongly positive recurrent, R < L");
  }
  if (rep.cls == VereJonesClass::PositiveRecurrent && rep.mean_at_R.is_finite()) {
    const Rational m = rep.mean_at_R.is_exact() ? rep.mean_at_R.value() : (rep.mean_at_R.lo + rep.mean_at_R.hi) / 2;
    rep.renewal_limit = Rational(support_gcd(ls.counts)) / m;
  }
  return rep;
}

namespace {

// log sum exp over terms given as logs.
double log_sum(const std::vector<double>& logs) {
  if (logs.empty()) return -kInf;
  const double mx = *std::max_element(logs.begin(), logs.end());
  double s = 0;
  for (double v : logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace

ClassificationReport classify_empirical(const CountTable& f, const CountTable& p) {
  const std::size_t N = std::min(f.horizon(), p.horizon());
  if (N < 16) throw PreconditionError("classify_empirical: insufficient data (N < 16)");
  std::vector<BigInt> fv(f.values.begin(), f.values.begin() + N + 1);
  std::vector<BigInt> pv(p.values.begin(), p.values.begin() + N + 1);
  if (std::all_of(fv.begin() + 1, fv.end(), [](const BigInt& v) { return v == 0; }))
    throw PreconditionError("classify_empirical: all-zero first-return counts");

  ClassificationReport rep;
  rep.mode = Mode::Empirical;
  const std::size_t window = std::max<std::size_t>(8, N / 2);
  rep.L = hadamard_estimate(fv, window, RadiusInfo::Kind::L);
  rep.R = hadamard_estimate(pv, window, RadiusInfo::Kind::R);
  rep.spr = rep.L.lo > rep.R.hi;

  std::vector<std::size_t> support;
  for (std::size_t n = 1; n <= N; ++n)
    if (fv[n] != 0) support.push_back(n);
  std::vector<double> lf(N + 1, 0.0);
  for (std::size_t n : support) lf[n] = ln(fv[n]);

  // log F_m(e^t) for the prefix of f up to m.
  auto log_F = [&](std::size_t m, double t) {
    std::vector<double> terms;
    for (std::size_t n : support) {
      if (n > m) break;
      terms.push_back(lf[n] + static_cast<double>(n) * t);
    }
    return log_sum(terms);
  };
  // Root of F_m = 1, as a log radius.
  auto root = [&](std::size_t m) {
    double lo = std::log(rep.R.estimate) - 1, hi = lo + 2;
    while (log_F(m, lo) > 0) lo -= 1;
    while (log_F(m, hi) < 0) hi += 1;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (log_F(m, mid) < 0 ? lo : hi) = mid;
    }
    return lo;
  };

  // Prefix roots decrease toward R; Aitken over the last three support points extrapolates the limit.
  const double t_root = root(N);
  double t_R = t_root;
  if (!rep.spr && support.size() >= 3) {
    const double t1 = root(support[support.size() - 3]), t2 = root(support[support.size() - 2]);
    const double d1 = t2 - t1, d2 = t_root - t2;
    if (d1 != 0) {
      const double q = d2 / d1;
      if (q > 0 && q < 1) t_R = t_root + d2 * q / (1 - q);
    }
  }
  const double lnR = rep.spr ? std::log(rep.R.estimate) : t_R;

  std::vector<double> logs, weighted;
  for (std::size_t n : support) {
    const double lt = lf[n] + static_cast<double>(n) * lnR;
    logs.push_back(lt);
    weighted.push_back(lt + std::log(static_cast<double>(n)));
  }
  const double F_hat = std::exp(log_sum(logs));
  const double mean_hat = std::exp(log_sum(weighted));
  const Rational Fq = from_double(F_hat), mq = from_double(mean_hat);
  rep.F_at_R = SeriesValue::interval(Fq, Fq, 0);
  rep.mean_at_R = SeriesValue::interval(mq, mq, 0);

  const double lnL = std::log(rep.L.estimate);
  const double logFL = log_F(N, lnL);
  const Rational FLq = from_double(std::exp(std::min(logFL, 700.0)));
  rep.discriminant.F_at_L = SeriesValue::interval(FLq, FLq, 0);
  rep.discriminant.sign = logFL > 0 ? 1 : (logFL < 0 ? -1 : 0);
  rep.discriminant.value = RealInterval{logFL, logFL};

  if (rep.spr) {
    rep.cls = VereJonesClass::PositiveRecurrent;
  } else if (F_hat < 0.9) {
    rep.cls = VereJonesClass::Transient;
  } else {
    // At the prefix root, null recurrence keeps the weighted contributions n f(n) x^n from vanishing.
    const std::size_t k = std::min<std::size_t>(3, support.size());
    std::vector<double> tail;
    for (std::size_t i = support.size() - k; i < support.size(); ++i) {
      const std::size_t n = support[i];
      tail.push_back(lf[n] + static_cast<double>(n) * t_root + std::log(static_cast<double>(n)));
    }
    const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
    rep.cls = (k >= 2 && std::exp(*mn - *mx) >= 0.75) ? VereJonesClass::NullRecurrent
                                                        : VereJonesClass::PositiveRecurrent;
    t_R = t_root;
  }
  if (!rep.spr) {
    rep.R.estimate = std::exp(t_R);
    const Rational e = from_double(rep.R.estimate);
    if (e < rep.R.lo) rep.R.lo = e;
    if (e > rep.R.hi) rep.R.hi = e;
  }
  const double lnR_final = std::log(rep.R.estimate);
  if (lnR_final != lnR) {
    logs.clear();
    weighted.clear();
    for (std::size_t n : support) {
      logs.push_back(lf[n] + static_cast<double>(n) * lnR_final);
      weighted.push_back(logs.back() + std::log(static_cast<double>(n)));
    }
    const Rational F2 = from_double(std::exp(log_sum(logs))), m2 = from_double(std::exp(log_sum(weighted)));
    rep.F_at_R = SeriesValue::interval(F2, F2, 0);
    rep.mean_at_R = SeriesValue::interval(m2, m2, 0);
  }

  if (rep.cls == VereJonesClass::PositiveRecurrent) {
    const std::size_t from = N - N / 8;
    double sum = 0;
    std::size_t cnt = 0;
    for (std::size_t n = from; n <= N; ++n) {
      if (pv[n] == 0) continue;
      sum += std::exp(ln(pv[n]) + static_cast<double>(n) * lnR_final);
      ++cnt;
    }
    if (cnt > 0) rep.renewal_limit = from_double(sum / static_cast<double>(cnt));
  }
  rep.notes.push_back("suggestive: finite coefficient data cannot certify the class");
  return rep;
}

SprCertificate spr_test(const LoopSystem& ls) {
  RadiusR rr = radius_R(ls);
  require_positive_entropy(rr.R);
  return SprCertificate{rr.discriminant.sign > 0, rr.discriminant, rr.R, rr.L};
}

SprCertificate spr_test(const FiniteGraph& g) {
  if (g.empty() || !is_strongly_connected(g)) throw PreconditionError("spr_test: graph is not strongly connected");
  SprCertificate cert;
  cert.spr = true;
  cert.discriminant.sign = 1;
  cert.discriminant.F_at_L = SeriesValue::divergent();
  cert.discriminant.infinite = true;
  const PerronEnclosure pe = perron_enclosure(g);
  if (pe.lo > 0) cert.R = RadiusInfo::enclosure(RadiusInfo::Kind::R, 1 / pe.hi, 1 / pe.lo);
  cert.L = RadiusInfo::unbounded(RadiusInfo::Kind::L);
  return cert;
}

PerronEnclosure perron_enclosure(const FiniteGraph& g, int tol_exp, bool left) {
  if (g.empty() || !is_strongly_connected(g))
    throw PreconditionError("perron_enclosure: graph is not strongly connected");
  const Csr& rows = left ? g.in() : g.out();
  const std::size_t n = g.size();
  PerronEnclosure out;

  // Power iteration on A + I so that periodic graphs converge too.
  std::vector<double> x(n, 1.0), y(n, 0.0);
  const double target = std::ldexp(1.0, tol_exp - 2);
  const std::size_t work = rows.targets.size() + n;
  const std::size_t max_iter = std::max<std::size_t>(4000, static_cast<std::size_t>(4e8 / static_cast<double>(work)));
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    kernels::spmv(rows, x, y, 1.0);
    double mx = 0;
    for (double v : y) mx = std::max(mx, v);
    if (mx == 0) break;
    if (it % 8 == 7) {
      double lo = kInf, hi = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] / x[i] - 1.0;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / mx;
      if (hi - lo <= target * std::max(1.0, hi)) {
        ++it;
        break;
      }
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / mx;
  }
  out.iterations = it;

  // Exact Collatz-Wielandt bounds on an integer rounding of x.
  std::vector<BigInt> xi(n), ax(n);
  const Rational scale = two_pow(60);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt v = floor(from_double(x[i]) * scale);
    xi[i] = v < 1 ? BigInt(1) : v;
  }
  kernels::gather_sum(rows, xi, ax);
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational q = ratio(ax[i], xi[i]);
    if (first || q < out.lo) out.lo = q;
    if (first || q > out.hi) out.hi = q;
    first = false;
  }
  out.vector = std::move(x);
  out.certificate = std::move(xi);
  return out;
}

EntropyReport entropy(const FiniteGraph& g, int tol_exp) {
  const PerronEnclosure pe = perron_enclosure(g, tol_exp);
  EntropyReport rep;
  rep.method = EntropyMethod::NegLogR;
  if (pe.hi == 0) {
    rep.value = {-kInf, -kInf};
  } else if (pe.lo == 0) {
    rep.value = {-kInf, log_enclosure(pe.hi, pe.hi).hi};
  } else {
    rep.value = log_enclosure(pe.lo, pe.hi);
    rep.radius = RadiusInfo::enclosure(RadiusInfo::Kind::R, 1 / pe.hi, 1 / pe.lo);
    rep.exact = pe.lo == pe.hi;
  }
  return rep;
}

EntropyReport entropy(const LoopSystem& ls, EntropyMethod method, std::uint64_t max_len) {
  EntropyReport rep;
  rep.method = method;
  if (method == EntropyMethod::FiniteSubgraphSup) {
    ls.validate();
    for (std::uint64_t m : ls.counts.support_up_to(max_len)) {
      const SequenceFamily trunc = ls.counts.restricted(1, m);
      const RadiusInfo R = solve_f_eq_1(trunc);
      rep.witnesses.push_back({m, R.neg_log()});
      rep.radius = R;
    }
    if (rep.witnesses.empty()) throw PreconditionError("entropy: no loop of length <= " + std::to_string(max_len));
    rep.value = rep.witnesses.back().value;
    rep.lower_bound = true;
    rep.exact = rep.radius->is_exact();
    return rep;
  }
  const RadiusR rr = radius_R(ls);
  if (method == EntropyMethod::RootOfF && rr.discriminant.sign < 0)
    throw PreconditionError("entropy: F(x) = 1 has no root on (0, L]; the system is transient (use --method radius)");
  rep.radius = rr.R;
  rep.value = rr.R.neg_log();
  rep.exact = rr.R.is_exact();
  return rep;
}

namespace {

constexpr double kGzMargin = 1.0 / 256.0;

GzReport empirical_verdict(GzReport rep, std::size_t N) {
  double tau = -kInf;
  for (auto [n, v] : rep.series) tau = std::max(tau, v);
  rep.tau_hat = tau;
  if (rep.series.empty()) {
    rep.verdict = GzVerdict::PassesSPR;
    return rep;
  }
  const std::size_t late = N - N / 4;
  double early_max = -kInf, late_max = -kInf, late_min = kInf;
  std::size_t late_count = 0;
  for (auto [n, v] : rep.series) {
    if (n >= late) {
      late_max = std::max(late_max, v);
      late_min = std::min(late_min, v);
      ++late_count;
    } else {
      early_max = std::max(early_max, v);
    }
  }
  if (tau <= rep.h_W.lo - kGzMargin && (late_count == 0 || late_max <= early_max))
    rep.verdict = GzVerdict::PassesSPR;
  else if (late_count > 0 && late_min > rep.h_W.hi + kGzMargin)
    rep.verdict = GzVerdict::Fails;
  else
    rep.verdict = GzVerdict::Inconclusive;
  return rep;
}

void push_series(GzReport& rep, const std::vector<std::vector<BigInt>>& tables, std::size_t N) {
  for (std::size_t n = 1; n <= N; ++n) {
    double best = -kInf;
    for (const auto& t : tables)
      if (t[n] > 0) best = std::max(best, ln(t[n]) / static_cast<double>(n));
    if (best > -kInf) rep.series.emplace_back(n, best);
  }
}

RealInterval log_lambda(const Rational& lo, const Rational& hi) {
  if (hi == 0) return {-kInf, -kInf};
  if (lo == 0) return {-kInf, log_enclosure(hi, hi).hi};
  return log_enclosure(lo, hi);
}

// Perron enclosure allowing graphs without cycles (lambda = 0).
std::pair<Rational, Rational> lambda_of(const FiniteGraph& g) {
  if (g.arrow_count() == 0) return {0, 0};
  const PerronEnclosure pe = perron_enclosure(g);
  return {pe.lo, pe.hi};
}

}  // namespace

GzReport gz_test(const FiniteGraph& g, const std::vector<VertexId>& W, std::size_t N) {
  if (W.empty()) throw PreconditionError("gz_test: W is empty");
  for (VertexId w : W) g.index(w);
  const FiniteGraph gw = g.induced(W);
  if (!is_strongly_connected(gw)) throw PreconditionError("gz_test: W is not connected");

  GzReport rep;
  rep.rigorous = true;
  const auto [wlo, whi] = lambda_of(gw);
  rep.h_W = log_lambda(wlo, whi);

  // Vertices of the complement lying on some W -> ... -> W excursion.
  const std::set<VertexId> wset(W.begin(), W.end());
  std::vector<VertexId> comp;
  for (VertexId v : g.vertices())
    if (!wset.count(v)) comp.push_back(v);
  const FiniteGraph gc = g.induced(comp);
  auto reach = [&](bool forward) {
    std::vector<std::uint8_t> seen(gc.size(), 0);
    std::vector<std::size_t> stack;
    for (VertexId w : wset) {
      const std::size_t iw = g.index(w);
      for (std::uint32_t j : (forward ? g.out() : g.in()).row(iw))
        if (auto c = gc.find(g.id(j)); c && !seen[*c]) {
          seen[*c] = 1;
          stack.push_back(*c);
        }
    }
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::uint32_t j : (forward ? gc.out() : gc.in()).row(i))
        if (!seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
    }
    return seen;
  };
  const auto fwd = reach(true), bwd = reach(false);
  std::vector<VertexId> between;
  for (std::size_t i = 0; i < gc.size(); ++i)
    if (fwd[i] && bwd[i]) between.push_back(gc.id(i));
  const FiniteGraph gb = gc.induced(between);

  Rational tlo = 0, thi = 0;
  bool any = false;
  for (const auto& scc : strongly_connected_components(gb)) {
    std::vector<VertexId> ids;
    for (std::size_t i : scc) ids.push_back(gb.id(i));
    const FiniteGraph sub = gb.induced(ids);
    if (sub.arrow_count() == 0) continue;
    const auto [lo, hi] = lambda_of(sub);
    tlo = any ? std::max(tlo, lo) : lo;
    thi = any ? std::max(thi, hi) : hi;
    any = true;
  }
  rep.tau = any ? log_lambda(tlo, thi) : RealInterval{-kInf, -kInf};

  std::vector<std::vector<BigInt>> tables;
  for (VertexId u : W)
    for (VertexId v : W) tables.push_back(constrained_path_counts(g, u, v, comp, N).values);
  push_series(rep, tables, N);
  rep.tau_hat = -kInf;
  for (auto [n, v] : rep.series) rep.tau_hat = std::max(rep.tau_hat, v);

  if (!any || thi <= wlo)
    rep.verdict = GzVerdict::PassesSPR;
  else if (tlo > whi)
    rep.verdict = GzVerdict::Fails;
  else
    rep.verdict = GzVerdict::Inconclusive;
  return rep;
}

GzReport gz_test(const LoopSystem& ls, const std::vector<VertexId>& W, std::size_t N) {
  if (N < 8) throw PreconditionError("gz_test: N >= 8");
  ls.validate();
  if (W.size() == 1 && W[0] == ls.base) {
    // Interior-avoiding returns are whole loops: t(n) = a(n).
    GzReport rep;
    rep.rigorous = true;
    const BigInt a1 = ls.counts.at(1);
    rep.h_W = a1 > 0 ? RealInterval{0, 0} : RealInterval{-kInf, -kInf};
    push_series(rep, {ls.counts.prefix(N)}, N);
    rep.tau_hat = -kInf;
    for (auto [n, v] : rep.series) rep.tau_hat = std::max(rep.tau_hat, v);
    const RadiusInfo L = family_radius(ls.counts);
    if (L.infinite) {
      rep.tau = RealInterval{-kInf, -kInf};
      rep.verdict = GzVerdict::PassesSPR;
      return rep;
    }
    rep.tau = L.neg_log();
    // tau = log(1/L) against h(W) = log a(1), compared as rationals.
    const Rational lam_w = Rational(a1);
    if (1 / L.lo <= lam_w)
      rep.verdict = GzVerdict::PassesSPR;
    else if (1 / L.hi > lam_w)
      rep.verdict = GzVerdict::Fails;
    else
      rep.verdict = GzVerdict::Inconclusive;
    return rep;
  }

  const FiniteGraph g = materialize(ls, N);
  for (VertexId w : W)
    if (!g.contains(w)) throw PreconditionError("gz_test: W must lie on loops of length <= N");
  const FiniteGraph gw = g.induced(W);
  if (!is_strongly_connected(gw)) throw PreconditionError("gz_test: W is not connected");
  GzReport rep;
  const auto [wlo, whi] = lambda_of(gw);
  rep.h_W = log_lambda(wlo, whi);
  std::vector<std::vector<BigInt>> tables;
  for (VertexId u : W)
    for (VertexId v : W) tables.push_back(constrained_counts_stabilized(ls, u, v, W, N).table.values);
  push_series(rep, tables, N);
  return empirical_verdict(std::move(rep), N);
}

GzReport gz_test(const GraphOracle& oracle, const std::vector<VertexId>& W, std::size_t N) {
  if (N < 8) throw PreconditionError("gz_test: N >= 8");
  if (W.empty()) throw PreconditionError("gz_test: W is empty");
  const std::set<VertexId> wset(W.begin(), W.end());
  std::vector<Arrow> arrows;
  for (VertexId w : wset)
    for (VertexId v : oracle.out_neighbors(w))
      if (wset.count(v)) arrows.emplace_back(w, v);
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  const FiniteGraph gw(std::vector<VertexId>(wset.begin(), wset.end()), arrows);
  if (!is_strongly_connected(gw)) throw PreconditionError("gz_test: W is not connected");
  GzReport rep;
  const auto [wlo, whi] = lambda_of(gw);
  rep.h_W = log_lambda(wlo, whi);
  std::vector<std::vector<BigInt>> tables;
  for (VertexId u : W)
    for (VertexId v : W) tables.push_back(constrained_counts_stabilized(oracle, u, v, W, N).table.values);
  push_series(rep, tables, N);
  return empirical_verdict(std::move(rep), N);
}

}  // namespace mskit
