#include <cstdlib>

#include "doctest.h"
#include "fixtures.hpp"
#include "mskit/error.hpp"
#include "mskit/series.hpp"

using namespace mskit;
using namespace fixtures;

TEST_SUITE("graphs") {
  TEST_CASE("construction rejects malformed input") {
    CHECK_THROWS_AS(FiniteGraph({0, 0}, {}), ParseError);
    CHECK_THROWS_AS(FiniteGraph({0}, {{0, 1}}), ParseError);
    CHECK_THROWS_AS(FiniteGraph({0, 1}, {{0, 1}, {0, 1}}), ParseError);
    CHECK_THROWS_AS(full2().index(7), UnknownVertex);
  }

  TEST_CASE("strong connectivity") {
    CHECK(is_strongly_connected(FiniteGraph({5}, {{5, 5}})));
    CHECK_FALSE(is_strongly_connected(FiniteGraph({0, 1}, {{0, 1}})));
    CHECK(is_strongly_connected(full2()));
  }

  TEST_CASE("strongly connected components") {
    const FiniteGraph g({0, 1, 2, 3}, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}});
    auto sccs = strongly_connected_components(g);
    CHECK(sccs.size() == 2);
  }

  TEST_CASE("path counts on the full graph") {
    CHECK(path_counts(full2(), 0, 0, 4).values == std::vector<BigInt>{1, 1, 2, 4, 8});
    const FiniteGraph self({0}, {{0, 0}});
    for (const BigInt& c : path_counts(self, 0, 0, 5).values) CHECK(c == 1);
  }

  TEST_CASE("path counts agree with the matrix-power oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const FiniteGraph g = random_strong(rng);
      const VertexId u = g.id(0), v = g.id(g.size() - 1);
      CHECK(path_counts(g, u, v, 15).values == matrix_power_counts(g, u, v, 15));
    }
  }

  TEST_CASE("first return counts") {
    const CountTable f = first_return_counts(example1(), 9);
    for (std::size_t n = 1; n <= 9; ++n) {
      const BigInt expected = n == 1 ? BigInt(1) : n == 4 ? BigInt(4) : n == 9 ? BigInt(64) : BigInt(0);
      CHECK(f[n] == expected);
    }
    const CountTable g = first_return_counts(full2(), 0, 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(g[n] == 1);
    const FiniteGraph line({0, 1}, {{0, 1}, {1, 1}});
    for (const BigInt& c : first_return_counts(line, 0, 6).values) CHECK(c == 0);
  }

  TEST_CASE("constrained path counts") {
    const std::vector<VertexId> S{1};
    const CountTable t = constrained_path_counts(full2(), 0, 0, S, 8);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(t[n] == 1);
    const CountTable e = constrained_path_counts(full2(), 0, 0, {}, 8);
    for (std::size_t n = 2; n <= 8; ++n) CHECK(e[n] == 0);
  }

  TEST_CASE("stabilized counts on a loop system") {
    const std::vector<VertexId> W{0};
    const StabilizedCounts s = constrained_counts_stabilized(example1(), 0, 0, W, 16);
    const auto f = example1().counts.prefix(16);
    for (std::size_t n = 1; n <= 16; ++n) CHECK(s.table[n] == f[n]);
  }

  TEST_CASE("stabilized counts through an oracle") {
    // Full graph on two vertices: W = {0} forces the path 0 1^{n-1} 0.
    GraphOracle o{0, [](VertexId) { return std::vector<VertexId>{0, 1}; }};
    const std::vector<VertexId> W{0};
    const StabilizedCounts s = constrained_counts_stabilized(o, 0, 0, W, 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(s.table[n] == 1);
  }

  TEST_CASE("materialization") {
    CHECK(materialized_size(example1(), 4) == 13);
    const FiniteGraph g = materialize(example1(), 4);
    CHECK(g.size() == 13);
    CHECK(is_strongly_connected(g));
    const FiniteGraph one = materialize(example1(), 3);
    CHECK(one.size() == 1);
    CHECK(one.has_arrow(0, 0));
    CHECK_THROWS_AS(materialize(example1(), 16, 1000), BudgetExceeded);
  }

  TEST_CASE("materialized first returns reproduce the family") {
    const FiniteGraph g = materialize(example1(), 9);
    const CountTable f = first_return_counts(g, 0, 9);
    CHECK(f.values == example1().counts.prefix(9));
  }

  TEST_CASE("loop indexer round-trips") {
    const LoopSystem ls = example1();
    const LoopIndexer idx(ls);
    CHECK(idx.id(4, 1, 1) == 1);
    CHECK(idx.id(4, 4, 3) == 12);
    CHECK(idx.id(9, 1, 1) == 13);
    for (VertexId v = 1; v < 200; ++v) {
      const auto p = idx.decode(v);
      REQUIRE(p);
      CHECK(idx.id(p->length, p->index, p->step) == v);
    }
    CHECK(idx.decode(0)->length == 0);
  }

  TEST_CASE("out ball of a binary tree") {
    GraphOracle tree{1, [](VertexId v) { return std::vector<VertexId>{2 * v, 2 * v + 1}; }};
    CHECK(out_ball(tree, 2).size() == 7);
    CHECK(out_ball(tree, 0).size() == 1);
  }

  TEST_CASE("loop systems validate") {
    LoopSystem bad{0, SequenceFamily::from_explicit({{1, BigInt(2)}})};
    CHECK_THROWS_AS(bad.validate(), ParseError);
    LoopSystem empty{0, SequenceFamily{}};
    CHECK_THROWS_AS(empty.validate(), ParseError);
  }

  TEST_CASE("vertex budget reads the environment") {
    setenv("MSKIT_VERTEX_BUDGET", "50", 1);
    CHECK(vertex_budget() == 50);
    CHECK_THROWS_AS(materialize(example1(), 9), BudgetExceeded);
    unsetenv("MSKIT_VERTEX_BUDGET");
  }
}
