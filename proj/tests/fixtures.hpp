#pragma once

#include <random>

#include "mskit/graph.hpp"

namespace fixtures {

using namespace mskit;

inline LoopSystem example1() {
  return {0, SequenceFamily({}, {LacunaryTerm{Support::squares(1), 1, 2, Rational(1, 2), false}})};
}

inline LoopSystem example2() {
  return {0, SequenceFamily({{1, BigInt(1)}}, {LacunaryTerm{Support::powers(2, 2), 1, 2, Rational(1, 2), false}})};
}

inline LoopSystem gprime() { return {0, example1().counts.without_lengths_below(2)}; }

/// f(n) = 1 for every n.
inline LoopSystem geometric() {
  return {0, SequenceFamily({}, {LacunaryTerm{Support::all(1), 1, 1, 1, false}})};
}

inline FiniteGraph full2() { return FiniteGraph({0, 1}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}); }

/// Random strongly connected graph: a Hamiltonian cycle plus random arrows.
inline FiniteGraph random_strong(std::mt19937_64& rng, std::size_t max_vertices = 8) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
  std::vector<VertexId> vs(n);
  for (std::size_t i = 0; i < n; ++i) vs[i] = 3 * i + 1;
  std::vector<bool> has(n * n, false);
  std::vector<Arrow> arrows;
  auto add = [&](std::size_t i, std::size_t j) {
    if (!has[i * n + j]) {
      has[i * n + j] = true;
      arrows.emplace_back(vs[i], vs[j]);
    }
  };
  for (std::size_t i = 0; i < n; ++i) add(i, (i + 1) % n);
  std::bernoulli_distribution coin(0.3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (coin(rng)) add(i, j);
  return FiniteGraph(vs, arrows);
}

/// Dense integer matrix power oracle: (A^n)_{uv} for n = 0..N.
inline std::vector<BigInt> matrix_power_counts(const FiniteGraph& g, VertexId u, VertexId v, std::size_t N) {
  const std::size_t n = g.size();
  std::vector<BigInt> A(n * n, 0), P(n * n, 0);
  for (const auto& [a, b] : g.arrows()) A[g.index(a) * n + g.index(b)] = 1;
  for (std::size_t i = 0; i < n; ++i) P[i * n + i] = 1;
  std::vector<BigInt> out;
  const std::size_t iu = g.index(u), iv = g.index(v);
  for (std::size_t step = 0; step <= N; ++step) {
    out.push_back(P[iu * n + iv]);
    std::vector<BigInt> Q(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (P[i * n + k] != 0)
          for (std::size_t j = 0; j < n; ++j)
            if (A[k * n + j] != 0) Q[i * n + j] += P[i * n + k];
    P = std::move(Q);
  }
  return out;
}

/// p(0) = 1, p(n) = sum_k f(k) p(n-k).
inline std::vector<BigInt> renewal_oracle(const std::vector<BigInt>& f, std::size_t N) {
  std::vector<BigInt> p(N + 1, 0);
  p[0] = 1;
  for (std::size_t n = 1; n <= N; ++n)
    for (std::size_t k = 1; k <= n && k < f.size(); ++k) p[n] += f[k] * p[n - k];
  return p;
}

}  // namespace fixtures
