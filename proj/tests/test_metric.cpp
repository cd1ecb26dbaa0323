#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mskit/error.hpp"
#include "mskit/metric.hpp"

using namespace mskit;
using namespace fixtures;

namespace {

std::vector<LoopRef> random_word(const LoopSystem& ls, std::mt19937_64& rng, std::size_t len) {
  const std::vector<std::uint64_t> lengths = ls.counts.support_up_to(16);
  std::vector<LoopRef> w;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t n = lengths[std::uniform_int_distribution<std::size_t>(0, lengths.size() - 1)(rng)];
    const std::uint64_t count = std::min<std::uint64_t>(ls.counts.at(n).get_ui(), 1000);
    w.push_back({n, BigInt(std::to_string(std::uniform_int_distribution<std::uint64_t>(1, count)(rng)))});
  }
  return w;
}

bool overlap(const DyadicInterval& a, const DyadicInterval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

TEST_SUITE("metric") {
  TEST_CASE("vertex distance") {
    CHECK(vertex_distance(0, 1) == Rational(1, 2));
    CHECK(vertex_distance(4, 4) == 0);
    CHECK(vertex_distance(2, 5) == Rational(7, 32));
  }

  TEST_CASE("bi-infinite paths extend periodically") {
    const LoopSystem ls = example1();
    const BiPath p = loop_word_path(ls, {{4, 1}}, {1, 1});
    CHECK(p.at(-1) == 0);
    CHECK(p.at(0) == 0);
    CHECK(p.at(3) == 3);
    CHECK(p.at(4) == 0);
    CHECK(p.at(100) == 0);
    CHECK(p.shifted(1).at(0) == 1);
    const FiniteGraph g = materialize(ls, 9);
    auto arrow = [&](VertexId a, VertexId b) { return g.has_arrow(a, b); };
    CHECK(p.is_path(arrow));
    CHECK(loop_word_path(ls, {{9, 5}, {4, 4}, {1, 1}}, {4, 2}).is_path(arrow));
    BiPath broken = p;
    broken.core[1] = 7;
    CHECK_FALSE(broken.is_path(arrow));
  }

  TEST_CASE("path distance") {
    const BiPath x = BiPath::periodic({0});
    const DyadicInterval self = path_distance(x, x, 16);
    CHECK(self.lo == 0);
    CHECK(self.hi == two_pow(-15));
    BiPath y = x;
    y.core = {1};
    const DyadicInterval d = path_distance(x, y, 16);
    CHECK(d.contains(Rational(1, 2)));
    CHECK(d.lo == Rational(1, 2));
  }

  TEST_CASE("metric properties on sampled triples") {
    const LoopSystem ls = example1();
    std::mt19937_64 rng(11);
    const LoopRef filler{1, 1};
    for (int t = 0; t < 100; ++t) {
      const BiPath a = loop_word_path(ls, random_word(ls, rng, 3), filler);
      const BiPath b = loop_word_path(ls, random_word(ls, rng, 3), filler);
      const BiPath c = loop_word_path(ls, random_word(ls, rng, 3), filler);
      const DyadicInterval ab = path_distance(a, b, 16), ba = path_distance(b, a, 16);
      const DyadicInterval bc = path_distance(b, c, 16), ac = path_distance(a, c, 16);
      CHECK(ab.hi <= 3);
      CHECK(overlap(ab, ba));
      CHECK(ac.lo <= ab.hi + bc.hi);
      // Shifting both paths and re-windowing agrees with the direct value.
      const DyadicInterval shifted = path_distance(a.shifted(2), b.shifted(2), 16);
      BiPath a2 = a, b2 = b;
      a2.start -= 2;
      b2.start -= 2;
      CHECK(overlap(shifted, path_distance(a2, b2, 32)));
    }
  }

  TEST_CASE("bowen balls") {
    const LoopSystem ls = example1();
    const BiPath c = loop_word_path(ls, {{4, 1}, {9, 2}}, {1, 1});
    CHECK(bowen_ball_member(c, c, Rational(1, 4), 8).status == BallStatus::In);
    // Equal on a long window, differing only from coordinate 34 on.
    std::vector<LoopRef> w{{4, 1}, {9, 2}};
    w.insert(w.end(), 21, LoopRef{1, 1});
    w.push_back({9, 7});
    const BiPath y = loop_word_path(ls, w, {1, 1});
    CHECK(bowen_ball_member(c, y, Rational(1, 4), 4).status == BallStatus::In);
    const BiPath d = loop_word_path(ls, {{4, 2}, {9, 2}}, {1, 1});
    CHECK(bowen_ball_member(c, d, Rational(1, 64), 4).status == BallStatus::Out);
  }

  TEST_CASE("constraint sets") {
    const LoopSystem ls = example1();
    const std::vector<VertexId> V{0, 1, 2, 3};
    const BiPath ref = loop_word_path(ls, {{4, 1}, {9, 3}}, {1, 1});
    CHECK(constraint_set_member(ref, ref, V));
    const BiPath other = loop_word_path(ls, {{4, 1}, {9, 40}}, {1, 1});
    CHECK(constraint_set_member(other, ref, V));
    const BiPath enters = loop_word_path(ls, {{4, 1}, {4, 1}, {1, 1}, {4, 1}}, {1, 1});
    const BiPath outside = loop_word_path(ls, {{4, 1}, {4, 3}, {1, 1}, {4, 1}}, {1, 1});
    CHECK_FALSE(constraint_set_member(enters, outside, V));
  }

  TEST_CASE("separated sets") {
    const LoopSystem ls = example1();
    const BiPath a = loop_word_path(ls, {{4, 1}}, {1, 1});
    const BiPath b = loop_word_path(ls, {{4, 2}}, {1, 1});
    CHECK(separated_check({a}, Rational(1, 8), 4));
    CHECK_FALSE(separated_check({a, a}, Rational(1, 8), 4));
    // First difference at coordinate 1: vertices 1 and 4, both below q = 5.
    CHECK(separated_check({a, b}, two_pow(-5), 4));
  }

  TEST_CASE("local entropy probe") {
    const LoopSystem single{0, SequenceFamily::from_explicit({{1, BigInt(1)}})};
    const LocalEntropyProbe s = local_entropy_probe(single, 2, 4, 6, 50);
    CHECK(s.value == 0.0);
    const LocalEntropyProbe e = local_entropy_probe(example1(), 2, 4, 6, 300);
    CHECK(e.value > 0.0);
    CHECK(e.value <= std::log(static_cast<double>(e.candidates)) / 6 + 1e-12);
    CHECK_THROWS_AS(local_entropy_probe(example1(), 2, 4, 3), PreconditionError);
    CHECK_THROWS_AS(local_entropy_probe(example1(), 2, 4, 6, 0), BudgetExceeded);
  }

  TEST_CASE("entropy at infinity") {
    const LoopSystem ls = example1();
    const EntropyAtInfinity e = entropy_at_infinity(ls, materialization_exhaustion(ls, {1, 4, 9}));
    CHECK(e.limit.hi == 0.0);
    CHECK(e.below_h);
    REQUIRE(e.spr);
    CHECK_FALSE(*e.spr);
    CHECK(e.caveat_instance);
    CHECK_FALSE(e.caveat.empty());
    const EntropyAtInfinity first = entropy_at_infinity(ls, {{}, {0}});
    CHECK(first.stages[0].contains(std::log(2.0)));
    CHECK_THROWS_AS(entropy_at_infinity(ls, {{1, 2}}), PreconditionError);
    const EntropyAtInfinity fin = entropy_at_infinity(full2(), {{0}, {0, 1}});
    CHECK(fin.limit.hi == 0.0);
    CHECK_FALSE(fin.caveat_instance);
  }
}
