#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mskit/kernels.hpp"

using namespace mskit;
using namespace fixtures;

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel gather sums agree") {
    const FiniteGraph g = materialize(example1(), 9);
    std::mt19937_64 rng(3);
    std::vector<BigInt> x(g.size());
    for (BigInt& v : x) v = BigInt(std::to_string(rng())) * BigInt(std::to_string(rng()));
    std::vector<BigInt> a(g.size()), b(g.size());
    kernels::serial::gather_sum(g.out(), x, a);
    kernels::omp::gather_sum(g.out(), x, b);
    CHECK(a == b);
    std::vector<std::uint8_t> mask(g.size());
    for (auto& m : mask) m = rng() & 1;
    kernels::serial::gather_sum(g.in(), x, a, mask);
    kernels::omp::gather_sum(g.in(), x, b, mask);
    CHECK(a == b);
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (!mask[i]) CHECK(a[i] == 0);
  }

  TEST_CASE("serial and parallel spmv agree bitwise") {
    const FiniteGraph g = materialize(example1(), 9);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(g.size()), a(g.size()), b(g.size());
    for (double& v : x) v = u(rng);
    kernels::serial::spmv(g.out(), x, a, 1.0);
    kernels::omp::spmv(g.out(), x, b, 1.0);
    CHECK(a == b);
  }

  TEST_CASE("gather sum is a matrix-vector product") {
    const FiniteGraph g = full2();
    std::vector<BigInt> x{3, 5}, y(2);
    kernels::gather_sum(g.out(), x, y);
    CHECK(y[0] == 8);
    CHECK(y[1] == 8);
  }
}
