#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mskit/graph.hpp"
#include "mskit/numeric.hpp"
#include "mskit/series.hpp"

namespace mskit {

enum class VereJonesClass { Transient, NullRecurrent, PositiveRecurrent };
enum class Mode { Exact, Empirical };

std::string to_string(VereJonesClass c);
std::string to_string(Mode m);
VereJonesClass parse_class(const std::string& s);

/// Null-potential discriminant: log of F(L) = sum f(n) L^n.
struct Discriminant {
  SeriesValue F_at_L;
  int sign = 0;       // sign of log F(L); +1 when F diverges at L or L is infinite
  bool infinite = false;
  std::optional<RealInterval> value;  // log F(L) when finite and positive
};

struct ClassificationReport {
  VereJonesClass cls = VereJonesClass::Transient;
  bool spr = false;
  Mode mode = Mode::Exact;
  RadiusInfo R;
  RadiusInfo L;
  SeriesValue F_at_R;
  SeriesValue mean_at_R;
  Discriminant discriminant;
  std::optional<Rational> renewal_limit;  // lambda_uu
  std::vector<std::string> notes;
};

/// Radius R of sum p(n) z^n for a loop system together with F(L) and the
/// discriminant sign. R >= 1 is allowed here (entropy zero).
struct RadiusR {
  RadiusInfo R;
  RadiusInfo L;
  Discriminant discriminant;
};
RadiusR radius_R(const LoopSystem& ls, int tol_exp = -64);

/// Decision procedure on F(L) and the weighted series. Throws
/// ExactnessUnavailable outside the closed-form regime and ZeroEntropyError
/// when R >= 1.
ClassificationReport classify_exact(const LoopSystem& ls, int tol_exp = -64);

/// Suggestive verdict from coefficient prefixes (N >= 16).
ClassificationReport classify_empirical(const CountTable& f, const CountTable& p);

struct SprCertificate {
  bool spr = false;
  Discriminant discriminant;
  RadiusInfo R;
  RadiusInfo L;
};
SprCertificate spr_test(const LoopSystem& ls);
/// Finite strongly connected graphs are always SPR.
SprCertificate spr_test(const FiniteGraph& g);

/// Certified Collatz-Wielandt enclosure of the Perron root.
struct PerronEnclosure {
  Rational lo;
  Rational hi;
  std::vector<double> vector;  // normalized eigenvector estimate (max entry 1)
  std::vector<BigInt> certificate;  // positive integer vector the bounds were computed on
  std::size_t iterations = 0;
};
/// `left` selects the left eigenvector (power iteration on the transpose).
PerronEnclosure perron_enclosure(const FiniteGraph& g, int tol_exp = -40, bool left = false);

enum class EntropyMethod { NegLogR, FiniteSubgraphSup, RootOfF };
std::string to_string(EntropyMethod m);

struct EntropyWitness {
  std::uint64_t max_len = 0;  // truncation level (loop systems) or 0
  RealInterval value;
};

struct EntropyReport {
  EntropyMethod method = EntropyMethod::NegLogR;
  RealInterval value;
  /// R (loop systems) or 1/lambda bounds (finite graphs) certifying `value`.
  std::optional<RadiusInfo> radius;
  bool exact = false;         // -log of an exact rational
  bool lower_bound = false;   // truncation route
  std::vector<EntropyWitness> witnesses;
};

EntropyReport entropy(const FiniteGraph& g, int tol_exp = -40);
/// `max_len` bounds the truncation route.
EntropyReport entropy(const LoopSystem& ls, EntropyMethod method = EntropyMethod::NegLogR,
                      std::uint64_t max_len = 64);

enum class GzVerdict { PassesSPR, Fails, Inconclusive };
std::string to_string(GzVerdict v);

struct GzReport {
  GzVerdict verdict = GzVerdict::Inconclusive;
  bool rigorous = false;
  RealInterval h_W;
  /// Exact growth rate when a closed form applies; -inf when counts vanish.
  std::optional<RealInterval> tau;
  double tau_hat = 0.0;
  /// (n, max over u,v in W of (1/n) log t_uv(n)) for n with a nonzero count.
  std::vector<std::pair<std::size_t, double>> series;
};

GzReport gz_test(const FiniteGraph& g, const std::vector<VertexId>& W, std::size_t N = 32);
GzReport gz_test(const LoopSystem& ls, const std::vector<VertexId>& W, std::size_t N = 32);
GzReport gz_test(const GraphOracle& oracle, const std::vector<VertexId>& W, std::size_t N = 32);

}  // namespace mskit
