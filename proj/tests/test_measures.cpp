#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mskit/error.hpp"
#include "mskit/measures.hpp"

using namespace mskit;
using namespace fixtures;

TEST_SUITE("measures") {
  TEST_CASE("parry measure on the full graph") {
    const ParryMeasure pm = parry_measure(full2(), -30);
    CHECK(pm.lambda_lo <= 2);
    CHECK(2 <= pm.lambda_hi);
    CHECK(pm.lambda_hi - pm.lambda_lo <= two_pow(-30));
    CHECK(pm.stationarity_residual <= two_pow(-30));
    CHECK(pm.row_residual <= two_pow(-30));
    CHECK(pm.stationary(0) == Rational(1, 2));
    CHECK(pm.transition(0, 1) == Rational(1, 2));
    CHECK(pm.entropy.contains(std::log(2.0)));
  }

  TEST_CASE("parry measure on a 3-cycle") {
    const ParryMeasure pm = parry_measure(FiniteGraph({0, 1, 2}, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(pm.lambda_lo <= 1);
    CHECK(1 <= pm.lambda_hi);
    for (const Rational& p : pm.stationary_vector()) CHECK(p == Rational(1, 3));
    CHECK(pm.entropy.contains(0.0));
  }

  TEST_CASE("parry entropy on truncations stays below log 2") {
    const double e4 = parry_measure(materialize(example1(), 4)).entropy.hi;
    const double e9 = parry_measure(materialize(example1(), 9)).entropy.hi;
    CHECK(e4 < e9);
    CHECK(e9 < std::log(2.0));
  }

  TEST_CASE("maximal measure of example 1") {
    const LoopMaximalMeasure mm = loop_maximal_measure(example1());
    CHECK(mm.base_frequency() == Rational(1, 6));
    CHECK(mm.return_prob(9) == Rational(1, 8));
    CHECK(mm.entropy.contains(std::log(2.0)));
    // Kac: frequency of the base times the mean return time.
    CHECK(cylinder_measure(mm, {0}) * mm.mean_return.value() == 1);
    CHECK(cylinder_measure(mm, {0, 1, 2, 3, 0}) == Rational(1, 6) * Rational(1, 16));
    CHECK(cylinder_measure(mm, {0, 0}) == Rational(1, 12));
    CHECK(cylinder_measure(mm, {2, 3}) == cylinder_measure(mm, {2}));
    CHECK_THROWS_AS(cylinder_measure(mm, {0, 2}), PreconditionError);
  }

  TEST_CASE("first-return cylinders sum to the base frequency") {
    const LoopMaximalMeasure mm = loop_maximal_measure(geometric());
    CHECK(mm.base_frequency() == Rational(1, 2));
    const LoopIndexer idx(mm.system);
    Rational total = cylinder_measure(mm, {0, 0});
    for (std::uint64_t n = 2; n <= 40; ++n) {
      std::vector<VertexId> word{0};
      for (std::uint64_t k = 1; k < n; ++k) word.push_back(idx.id(n, 1, k));
      word.push_back(0);
      total += cylinder_measure(mm, word);
    }
    // Missing mass is sum_{n>40} 2^-n / 2.
    CHECK(mm.base_frequency() - total == two_pow(-41));
  }

  TEST_CASE("maximal measure errors cite Gurevich") {
    try {
      loop_maximal_measure(example2());
      FAIL("null recurrent system accepted");
    } catch (const PreconditionError& e) {
      CHECK(std::string(e.what()).find("Gurevich") != std::string::npos);
    }
    CHECK_THROWS_AS(loop_maximal_measure(gprime()), PreconditionError);
  }

  TEST_CASE("abramov check") {
    CHECK(abramov_check(loop_maximal_measure(example1()), 256).within);
    const AbramovReport g = abramov_check(loop_maximal_measure(geometric()), 64);
    CHECK(g.within);
    CHECK(g.deviation < 1e-12);
    const LoopSystem single{0, SequenceFamily::from_explicit({{1, BigInt(1)}})};
    const LoopMaximalMeasure degenerate{single, RadiusInfo::exact(RadiusInfo::Kind::R, 1), SeriesValue::exact(1), {0, 0}};
    const AbramovReport d = abramov_check(degenerate, 8);
    CHECK(d.value == 0.0);
    CHECK(d.target == 0.0);
  }

  TEST_CASE("renewal limit") {
    const RenewalLimitReport r = renewal_limit_check(example1(), 400);
    CHECK(r.limit == Rational(1, 6));
    CHECK(r.max_deviation < 1e-3);
    const RenewalLimitReport g = renewal_limit_check(geometric(), 64);
    CHECK(g.max_deviation == 0.0);
    const LoopSystem even{0, SequenceFamily::from_explicit({{2, BigInt(2)}})};
    const RenewalLimitReport e = renewal_limit_check(even, 64);
    CHECK(e.skipped);
    CHECK(e.period == 2);
  }

  TEST_CASE("escape sequence") {
    const EscapeSequence s = escape_sequence(example1(), 3);
    REQUIRE(s.stages.size() == 3);
    CHECK(s.entropies_increasing);
    CHECK(s.masses_decreasing);
    CHECK(s.masses_below_inverse_shortest);
    CHECK(s.stages[0].entropy.contains(std::log(4.0) / 4));
    for (const EscapeStage& st : s.stages) CHECK(st.entropy.hi < std::log(2.0));
    CHECK(escape_sequence(example1(), 0).stages.empty());
    CHECK_THROWS_AS(escape_sequence(geometric(), 2), PreconditionError);
  }
}
