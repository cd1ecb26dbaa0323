#include "mskit/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mskit/error.hpp"

namespace mskit {

const Rational& SeriesValue::value() const {
  if (!is_exact()) throw ExactnessUnavailable("series value is not exact");
  return lo;
}

std::optional<int> SeriesValue::compare(const Rational& t) const {
  if (diverges()) return 1;
  if (hi < t) return -1;
  if (lo > t) return 1;
  if (lo == t && hi == t) return 0;
  return std::nullopt;
}

SeriesValue SeriesValue::operator+(const SeriesValue& o) const {
  if (diverges() || o.diverges()) return SeriesValue::divergent();
  if (is_exact() && o.is_exact()) return SeriesValue::exact(lo + o.lo);
  return SeriesValue::interval(lo + o.lo, hi + o.hi, tail_bound + o.tail_bound);
}

SeriesValue SeriesValue::operator+(const Rational& v) const {
  if (diverges()) return *this;
  SeriesValue out = *this;
  out.lo += v;
  out.hi += v;
  return out;
}

const Rational& RadiusInfo::value() const {
  if (!is_exact()) throw ExactnessUnavailable("radius is not exact");
  return lo;
}

RealInterval RadiusInfo::neg_log() const {
  if (infinite) throw PreconditionError("radius is infinite");
  if (lo <= 0) throw PreconditionError("radius enclosure touches 0");
  return neg_log_enclosure(lo, hi);
}

namespace {

constexpr std::uint64_t kMaxTerms = std::uint64_t{1} << 20;

int ceil_log2(std::uint64_t n) {
  int b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

// sum_{k>=k0} r^k
Rational geo0(const Rational& r, std::uint64_t k0) { return pow(r, k0) / (1 - r); }

// sum_{k>=k0} k r^k
Rational geo1(const Rational& r, std::uint64_t k0) {
  const Rational one_minus = 1 - r;
  return pow(r, k0) * (Rational(k0) - (Rational(k0) - 1) * r) / (one_minus * one_minus);
}

// sum_{k>=k0} k^2 r^k
Rational geo2(const Rational& r, std::uint64_t k0) {
  const Rational one_minus = 1 - r;
  Rational total = r * (1 + r) / (one_minus * one_minus * one_minus);
  Rational rk = r;
  for (std::uint64_t k = 1; k < k0; ++k) {
    total -= Rational(k * k) * rk;
    rk *= r;
  }
  return total;
}

std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

// Outward dyadic enclosure of q^e for q >= 0, on the grid 2^-bits.
std::pair<Rational, Rational> pow_bounds(const Rational& q, std::uint64_t e, std::uint64_t bits) {
  if (static_cast<long double>(e) * bit_size(q) < (1 << 20)) {
    const Rational v = pow(q, e);
    return {round_down(v, bits), round_up(v, bits)};
  }
  Rational lo = 1, hi = 1;
  Rational blo = round_down(q, bits), bhi = round_up(q, bits);
  while (e > 0) {
    if (e & 1) {
      lo = round_down(lo * blo, bits);
      hi = round_up(hi * bhi, bits);
    }
    e >>= 1;
    if (e) {
      blo = round_down(blo * blo, bits);
      bhi = round_up(bhi * bhi, bits);
    }
  }
  return {lo, hi};
}

struct TailEval {
  const LacunaryTerm& t;
  Rational x;
  Rational rho;  // beta * x
  Weight w;

  Rational weight(std::uint64_t s) const { return w == Weight::Linear ? Rational(s) : Rational(1); }

  std::uint64_t length(std::uint64_t k) const {
    auto s = t.support.length(k);
    if (!s) throw Unresolved("series: loop length overflows 64 bits before the tail bound settled");
    return *s;
  }

  // Enclosure of the k-th term on the 2^-bits grid.
  std::pair<Rational, Rational> term(std::uint64_t k, std::uint64_t bits) const {
    const std::uint64_t s = length(k);
    if (t.floor) {
      const BigInt count = t.count_at_index(k);
      if (count == 0) return {0, 0};
      auto [xl, xh] = pow_bounds(x, s, bits + 64);
      const Rational f = Rational(count) * weight(s);
      return {round_down(f * xl, bits), round_up(f * xh, bits)};
    }
    return raw_term(k, bits);
  }

  // Enclosure of c gamma^k rho^s(k) w(k), ignoring the floor flag.
  std::pair<Rational, Rational> raw_term(std::uint64_t k, std::uint64_t bits) const {
    const std::uint64_t s = length(k);
    auto [gl, gh] = pow_bounds(t.gamma, k, bits + 64);
    auto [rl, rh] = pow_bounds(rho, s, bits + 64);
    const Rational f = t.c * weight(s);
    return {round_down(f * gl * rl, bits), round_up(f * gh * rh, bits)};
  }

  // Upper bound on sum_{k>K} of the raw terms; nullopt while the ratio bound
  // is not yet below 1.
  std::optional<Rational> tail_after(std::uint64_t K, std::uint64_t bits) const {
    const std::uint64_t s1 = length(K + 1);
    if (w == Weight::Plain && t.gamma < 1 && rho <= 1) {
      auto [rl, rh] = pow_bounds(rho, s1, bits + 64);
      auto [gl, gh] = pow_bounds(t.gamma, K + 1, bits + 64);
      return round_up(t.c * rh * gh / (1 - t.gamma), bits);
    }
    const std::uint64_t s2 = length(K + 2);
    auto [rl, rh] = pow_bounds(rho, s2 - s1, bits + 64);
    const Rational q = t.gamma * rh * weight(s2) / weight(s1);
    if (q >= 1) return std::nullopt;
    const Rational head = raw_term(K + 1, bits).second;
    return round_up(head / (1 - q), bits);
  }
};

// Partial sums with a certified tail bound; width <= 2^tol_exp.
SeriesValue interval_sum(const TailEval& ev, int tol_exp) {
  const Rational budget = two_pow(tol_exp - 1);
  const std::uint64_t bits = static_cast<std::uint64_t>(std::max(0, -tol_exp)) + 24;
  Rational lo = 0, hi = 0;
  const std::uint64_t k0 = ev.t.support.k0;
  for (std::uint64_t k = k0; k < k0 + kMaxTerms; ++k) {
    auto [tl, th] = ev.term(k, bits);
    lo += tl;
    hi += th;
    if (auto tail = ev.tail_after(k, bits); tail && *tail <= budget)
      return SeriesValue::interval(lo, hi + *tail, *tail);
  }
  throw Unresolved("series: tail bound did not reach the requested tolerance");
}

SeriesValue eval_tail(const LacunaryTerm& t, const Rational& x, int tol_exp, Weight w) {
  const TailEval ev{t, x, t.beta * x, w};
  const Rational& rho = ev.rho;
  const Support& sp = t.support;
  const std::uint64_t k0 = sp.k0;

  if (sp.shape == SupportShape::All || sp.shape == SupportShape::Arithmetic) {
    const std::uint64_t step = sp.shape == SupportShape::All ? 1 : sp.step;
    const std::uint64_t off = sp.shape == SupportShape::All ? 0 : sp.offset;
    const Rational r = t.gamma * pow(rho, step);
    if (r >= 1) {
      if (t.floor && r == 1) throw ExactnessUnavailable("series: floored term on the boundary of convergence");
      return SeriesValue::divergent();
    }
    if (t.floor) return interval_sum(ev, tol_exp);
    const Rational head = t.c * pow(rho, off);
    if (w == Weight::Plain) return SeriesValue::exact(head * geo0(r, k0));
    return SeriesValue::exact(head * (Rational(step) * geo1(r, k0) + Rational(off) * geo0(r, k0)));
  }

  if (rho > 1) return SeriesValue::divergent();
  if (rho == 1) {
    if (t.floor) throw ExactnessUnavailable("series: floored term on the boundary of convergence");
    if (t.gamma >= 1) return SeriesValue::divergent();
    if (w == Weight::Plain) return SeriesValue::exact(t.c * geo0(t.gamma, k0));
    if (sp.shape == SupportShape::Squares) return SeriesValue::exact(t.c * geo2(t.gamma, k0));
    const Rational r = Rational(sp.base) * t.gamma;
    if (r >= 1) return SeriesValue::divergent();
    return SeriesValue::exact(t.c * geo0(r, k0));
  }
  return interval_sum(ev, tol_exp);
}

}  // namespace

SeriesValue family_eval(const SequenceFamily& a, const Rational& x, int tol_exp, Weight w) {
  if (x <= 0) throw PreconditionError("family_eval: x must be > 0");
  const auto& tails = a.tails();
  const int tail_tol = tol_exp - 1 - ceil_log2(std::max<std::size_t>(tails.size(), 1));

  SeriesValue total = SeriesValue::exact(0);
  for (const auto& t : tails) {
    total = total + eval_tail(t, x, tail_tol, w);
    if (total.diverges()) return total;
  }
  Rational correction = 0;
  for (const auto& [n, v] : a.explicit_terms()) {
    BigInt delta = v;
    for (const auto& t : tails) delta -= t.count_at(n);
    if (delta == 0) continue;
    Rational term = Rational(delta) * pow(x, n);
    if (w == Weight::Linear) term *= Rational(n);
    correction += term;
  }
  return total + correction;
}

namespace {

// Enclosure of q^(1/m), q > 0; exact when the root is rational.
std::pair<Rational, Rational> root_enclosure(const Rational& q, std::uint64_t m) {
  if (m == 1) return {q, q};
  BigInt rn, rd;
  const bool num_exact = mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), m) != 0;
  const bool den_exact = mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), m) != 0;
  if (num_exact && den_exact) {
    const Rational v = ratio(rn, rd);
    return {v, v};
  }
  Rational lo = std::min(Rational(1), q), hi = std::max(Rational(1), q);
  const Rational eps = two_pow(-80);
  while (hi - lo > eps) {
    const Rational mid = round_down((lo + hi) / 2, 96);
    if (pow(mid, m) <= q)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

// Radius of one tail; nullopt when the counts are eventually zero.
std::optional<RadiusInfo> tail_radius(const LacunaryTerm& t) {
  const auto L = RadiusInfo::Kind::L;
  const Support& sp = t.support;
  if (sp.shape == SupportShape::All || sp.shape == SupportShape::Arithmetic) {
    const std::uint64_t step = sp.shape == SupportShape::All ? 1 : sp.step;
    auto [gl, gh] = root_enclosure(t.gamma, step);
    const Rational glo = t.beta * gl, ghi = t.beta * gh;
    if (t.floor) {
      if (ghi < 1) return std::nullopt;
      if (glo <= 1 && ghi >= 1) {
        if (glo == 1 && ghi == 1) {
          if (t.count_at_index(sp.k0 + 4096) == 0) return std::nullopt;
          return RadiusInfo::exact(L, 1);
        }
        throw ExactnessUnavailable("family_radius: floored growth rate too close to 1");
      }
    }
    if (glo == ghi) return RadiusInfo::exact(L, 1 / glo);
    return RadiusInfo::enclosure(L, 1 / ghi, 1 / glo);
  }
  if (t.floor && t.beta == 1) {
    if (t.gamma < 1) return std::nullopt;
    if (t.gamma == 1 && floor(t.c) == 0) return std::nullopt;
  }
  return RadiusInfo::exact(L, 1 / t.beta);
}

}  // namespace

RadiusInfo family_radius(const SequenceFamily& a) {
  std::optional<RadiusInfo> best;
  for (const auto& t : a.tails()) {
    auto r = tail_radius(t);
    if (!r) continue;
    if (!best) {
      best = r;
      continue;
    }
    const Rational lo = std::min(best->lo, r->lo), hi = std::min(best->hi, r->hi);
    best = lo == hi ? RadiusInfo::exact(RadiusInfo::Kind::L, lo) : RadiusInfo::enclosure(RadiusInfo::Kind::L, lo, hi);
  }
  return best ? *best : RadiusInfo::unbounded(RadiusInfo::Kind::L);
}

RadiusInfo solve_f_eq_1(const SequenceFamily& a, int tol_exp) {
  const auto R = RadiusInfo::Kind::R;
  if (a.is_zero()) throw PreconditionError("solve_f_eq_1: zero family has no root");
  const RadiusInfo L = family_radius(a);
  const int eval_tol = tol_exp - 8;

  Rational lo = 0, hi;
  if (L.infinite) {
    hi = 1;
    for (int i = 0;; ++i) {
      const SeriesValue v = family_eval(a, hi, eval_tol);
      auto c = v.compare(1);
      if (c && *c == 0) return RadiusInfo::exact(R, hi);
      if (c && *c > 0) break;
      if (c && *c < 0) lo = hi;
      if (i > 4096) throw Unresolved("solve_f_eq_1: no upper bracket found");
      hi *= 2;
    }
  } else {
    hi = L.lo;
    const SeriesValue v = family_eval(a, hi, eval_tol);
    auto c = v.compare(1);
    if (!c || *c <= 0)
      throw PreconditionError("solve_f_eq_1: requires F(L) > 1 or divergence at L");
  }

  int tol = eval_tol;
  const Rational width = two_pow(tol_exp);
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    std::optional<int> c;
    for (int tries = 0; tries < 4; ++tries) {
      c = family_eval(a, mid, tol).compare(1);
      if (c) break;
      tol -= 32;
    }
    if (!c) break;
    if (*c == 0) return RadiusInfo::exact(R, mid);
    (*c < 0 ? lo : hi) = mid;
  }
  return RadiusInfo::enclosure(R, lo, hi);
}

std::vector<BigInt> renewal_convolve(const std::vector<BigInt>& f, std::size_t N) {
  std::vector<std::size_t> support;
  for (std::size_t k = 1; k < f.size() && k <= N; ++k)
    if (f[k] != 0) support.push_back(k);
  std::vector<BigInt> p(N + 1, BigInt(0));
  p[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    BigInt acc = 0;
    for (std::size_t k : support) {
      if (k > n) break;
      acc += f[k] * p[n - k];
    }
    p[n] = std::move(acc);
  }
  return p;
}

CountTable renewal_convolve(const CountTable& f, std::size_t N) {
  if (f.horizon() < N) throw PreconditionError("renewal_convolve: first-return counts known only up to " +
                                               std::to_string(f.horizon()));
  return CountTable{CountKind::P, f.from, f.to, renewal_convolve(f.values, N), {}};
}

RadiusInfo hadamard_estimate(const std::vector<BigInt>& coeffs, std::size_t window, RadiusInfo::Kind kind) {
  const std::size_t N = coeffs.empty() ? 0 : coeffs.size() - 1;
  std::vector<std::size_t> nz;
  for (std::size_t n = 1; n <= N; ++n)
    if (coeffs[n] > 0) nz.push_back(n);
  if (nz.empty()) throw PreconditionError("hadamard_estimate: all-zero input");

  auto e = [&](std::size_t n) { return ln(coeffs[n]) / static_cast<double>(n); };
  const std::size_t n3 = nz.back();
  const std::size_t first = N >= window ? N - window + 1 : 1;

  std::vector<double> hs;
  hs.push_back(e(n3));

  // Least-squares slope of log c(n) over the window.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n : nz)
    if (n >= first) pts.emplace_back(static_cast<double>(n), ln(coeffs[n]));
  std::optional<double> slope;
  if (pts.size() >= 2) {
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
    }
    const double mx = sx / pts.size(), my = sy / pts.size();
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    if (sxx > 0) {
      slope = sxy / sxx;
      hs.push_back(*slope);
    }
  }

  // Aitken extrapolation of (1/n) log c(n) along geometrically spaced indices.
  auto at_most = [&](std::size_t bound) -> std::optional<std::size_t> {
    auto it = std::upper_bound(nz.begin(), nz.end(), bound);
    if (it == nz.begin()) return std::nullopt;
    return *std::prev(it);
  };
  if (auto n2 = at_most(n3 / 4)) {
    if (auto n1 = at_most(*n2 / 4)) {
      const double e1 = e(*n1), e2 = e(*n2), e3 = e(n3);
      const double d1 = e2 - e1, d2 = e3 - e2;
      if (std::abs(d1) > 1e-12) {
        const double q = d2 / d1;
        if (q > 0 && q < 1) hs.push_back(e3 + d2 * q / (1 - q));
      }
    }
  }

  const auto [mn, mx] = std::minmax_element(hs.begin(), hs.end());
  const double pad = 0.5 * (*mx - *mn) + 1e-12;
  const double hlo = *mn - pad, hhi = *mx + pad;
  RadiusInfo out;
  out.kind = kind;
  out.lo = from_double(std::exp(-hhi));
  out.hi = from_double(std::exp(-hlo));
  out.rigorous = false;
  out.estimate = std::exp(-(slope ? *slope : hs.front()));
  return out;
}

}  // namespace mskit
