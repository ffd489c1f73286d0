#ifndef STABCERT_TEST_UTIL_HPP
#define STABCERT_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "stabcert/graph.hpp"
#include "stabcert/matrix.hpp"
#include "stabcert/nonlinear.hpp"

namespace stabcert::testing {

struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

// Off-diagonals Uniform[0,1) at edge probability p. Hurwitz-biased samples
// get strictly dominant diagonals -(row sum) - U(0,1); mixed samples get
// -U(0,1) diagonals and land on either side of stability.
inline SquareMatrix random_metzler(Rng& rng, std::size_t n, double p, bool hurwitz_biased) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.chance(p)) {
        m(i, j) = rng.uniform(0.0, 1.0);
        row_sum += m(i, j);
      }
    }
    m(i, i) = hurwitz_biased ? -(row_sum + rng.uniform(0.0, 1.0) + 1e-3)
                             : -rng.uniform(1e-3, 1.0);
  }
  return m;
}

// A directed ring through all nodes keeps the graph strongly connected.
inline SquareMatrix random_irreducible_metzler(Rng& rng, std::size_t n, double p,
                                               bool hurwitz_biased) {
  SquareMatrix m = random_metzler(rng, n, p, hurwitz_biased);
  if (n == 1) return m;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t w = (v + 1) % n;  // edge v -> w means entry m(w, v)
    if (m(w, v) == 0.0) m(w, v) = rng.uniform(0.1, 1.0);
  }
  if (hurwitz_biased) {
    for (std::size_t i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) row_sum += m(i, j);
      m(i, i) = -(row_sum + rng.uniform(0.0, 1.0) + 1e-3);
    }
  }
  return m;
}

// Directed rings glued at single shared nodes, tree fashion: any two cycles
// share at most one node. Diagonals are -1; each ring's edge weights are
// scaled to a prescribed cycle gain, which is well-defined because rings
// never share an edge.
struct CactusSample {
  SquareMatrix matrix;
  std::vector<std::vector<std::size_t>> rings;

  explicit CactusSample(SquareMatrix m) : matrix(std::move(m)) {}
};

inline CactusSample random_cactus_metzler(Rng& rng, bool hurwitz) {
  const std::size_t ring_count = 1 + rng.index(4);
  std::vector<std::vector<std::size_t>> rings;
  std::size_t next_node = 0;

  {
    const std::size_t len = 2 + rng.index(3);
    std::vector<std::size_t> ring;
    for (std::size_t k = 0; k < len; ++k) ring.push_back(next_node++);
    rings.push_back(std::move(ring));
  }
  for (std::size_t r = 1; r < ring_count; ++r) {
    const auto& host = rings[rng.index(rings.size())];
    const std::size_t shared = host[rng.index(host.size())];
    const std::size_t extra = 1 + rng.index(3);
    std::vector<std::size_t> ring{shared};
    for (std::size_t k = 0; k < extra; ++k) ring.push_back(next_node++);
    rings.push_back(std::move(ring));
  }

  SquareMatrix m(next_node);
  for (std::size_t v = 0; v < next_node; ++v) m(v, v) = -1.0;
  double budget = hurwitz ? 0.8 : 0.7;  // total of the stable ring gains
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const auto& ring = rings[r];
    const bool spoiler = !hurwitz && r == 0;
    const double target =
        spoiler ? rng.uniform(1.05, 2.0) : rng.uniform(0.02, budget / static_cast<double>(rings.size()));
    const double w = std::pow(target, 1.0 / static_cast<double>(ring.size()));
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const std::size_t from = ring[k];
      const std::size_t to = ring[(k + 1) % ring.size()];
      m(to, from) = w;
    }
  }
  CactusSample sample(std::move(m));
  sample.rings = std::move(rings);
  return sample;
}

inline MonotoneNetworkSpec random_network_spec(Rng& rng, std::size_t n, double p) {
  MonotoneNetworkSpec spec;
  spec.n = n;
  spec.sigma = rng.chance(0.5) ? Sigma::Tanh : Sigma::Rational;
  for (std::size_t i = 0; i < n; ++i) spec.decay.push_back(rng.uniform(0.5, 2.0));
  spec.coupling.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.chance(p)) spec.coupling[i * n + j] = rng.uniform(0.1, 1.0);
  return spec;
}

// Exhaustive simple-cycle enumeration for small graphs: plain DFS rooted at
// each least node. Independent of the blocked-set search under test.
inline std::vector<std::vector<std::size_t>> brute_force_cycles(const WeightedDigraph& g) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = g.node_count();
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);

  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, s);
    std::fill(on_path.begin(), on_path.end(), false);
    on_path[s] = true;
    auto dfs = [&](auto&& self, std::size_t v) -> void {
      for (std::size_t w : g.successors(v)) {
        if (w == s) {
          if (path.size() >= 2) out.push_back(path);
        } else if (w > s && !on_path[w]) {
          path.push_back(w);
          on_path[w] = true;
          self(self, w);
          path.pop_back();
          on_path[w] = false;
        }
      }
    };
    dfs(dfs, s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Reachability-based strongly connected components (Floyd-Warshall closure).
inline std::vector<std::set<std::size_t>> brute_force_sccs(const WeightedDigraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    reach[v][v] = true;
    for (std::size_t w : g.successors(v)) reach[v][w] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::vector<std::set<std::size_t>> comps;
  std::vector<bool> done(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v]) continue;
    std::set<std::size_t> comp;
    for (std::size_t w = 0; w < n; ++w)
      if (reach[v][w] && reach[w][v]) comp.insert(w);
    for (std::size_t w : comp) done[w] = true;
    comps.push_back(std::move(comp));
  }
  return comps;
}

// ---- fixed instances used across suites -----------------------------------

// 3x3 with two 2-cycles sharing node 2; gains 1/2 and 1/2, zero eigenvalue.
inline SquareMatrix example_3x3() {
  return SquareMatrix(3, {-1, 1, 0, 1, -2, 1, 0, 1, -1});
}

// 4x4 chain of three 2-cycles; gains 3/5, 1/5, 1/5 summing to 1, Hurwitz.
inline SquareMatrix example_4x4() {
  return SquareMatrix(4, {-5, 1, 0, 0, 3, -1, 1, 0, 0, 1, -5, 1, 0, 0, 1, -1});
}

// 6x6 sparsity pattern with five cycles; `w` fills every structural entry.
inline SquareMatrix example_6x6(double w = 0.3, double diag = -1.0) {
  SquareMatrix m(6);
  for (std::size_t i = 0; i < 6; ++i) m(i, i) = diag;
  const std::pair<int, int> entries[] = {{1, 2}, {1, 6}, {2, 1}, {2, 3}, {3, 2},
                                         {4, 3}, {4, 5}, {5, 4}, {6, 1}, {6, 5}};
  for (auto [r, c] : entries) m(r - 1, c - 1) = w;
  return m;
}

// Two-node flow system: growth g at node 1, decay d at node 2, flow f.
inline SquareMatrix flow_2x2(double f, double g, double d) {
  return SquareMatrix(2, {g - f, f, f, -d - f});
}

}  // namespace stabcert::testing

#endif
