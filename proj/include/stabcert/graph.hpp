#ifndef STABCERT_GRAPH_HPP
#define STABCERT_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stabcert/matrix.hpp"

namespace stabcert {

/// Directed edge from -> to carrying the matrix entry m_{to,from}.
struct Edge {
  std::size_t from;
  std::size_t to;
  double weight;
};

/// Growable bitset over node indices.
class NodeSet {
 public:
  explicit NodeSet(std::size_t capacity) : bits_((capacity + 63) / 64, 0) {}

  void add(std::size_t v) { bits_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  bool contains(std::size_t v) const {
    return (bits_[v >> 6] >> (v & 63)) & 1;
  }
  bool intersects(const NodeSet& other) const;
  std::size_t intersection_count(const NodeSet& other) const;

 private:
  std::vector<std::uint64_t> bits_;
};

/// The weighted digraph associated with a square matrix: an edge (j, i) with
/// weight m_ij for every nonzero m_ij, i != j. Self-loops (nonzero diagonal
/// entries) are tracked separately and never appear in `edges()`.
class WeightedDigraph {
 public:
  static WeightedDigraph from_matrix(const SquareMatrix& m);

  std::size_t node_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_self_loop(std::size_t v) const { return self_loop_[v]; }
  double self_loop_weight(std::size_t v) const { return loop_weight_[v]; }
  std::size_t self_loop_count() const;

  /// Non-loop successors of v, ascending.
  const std::vector<std::size_t>& successors(std::size_t v) const { return succ_[v]; }

  /// Weight of the non-loop edge from -> to; 0 when absent.
  double edge_weight(std::size_t from, std::size_t to) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<bool> self_loop_;
  std::vector<double> loop_weight_;
  std::vector<std::vector<std::size_t>> succ_;
};

/// Node sequence (i1, ..., ik), k >= 2, with an implicit closing edge back to
/// i1. Canonical form: rotated so the least node comes first.
struct SimpleCycle {
  std::vector<std::size_t> nodes;

  std::size_t length() const noexcept { return nodes.size(); }
  NodeSet node_set(std::size_t capacity) const;
};

/// Partition of the nodes into strongly connected components, listed in
/// reverse topological order of the condensation; each component ascending.
std::vector<std::vector<std::size_t>> strongly_connected_components(const WeightedDigraph& g);

/// All simple cycles of length >= 2, each once, canonical, sorted
/// lexicographically by node list. Johnson-style search with blocked sets.
/// Throws TooManyCyclesError when the count would exceed `cap`.
std::vector<SimpleCycle> enumerate_simple_cycles(const WeightedDigraph& g, std::size_t cap);

/// Undirected, unweighted graph over cycle indices.
struct CycleGraph {
  std::size_t cycle_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, lexicographic

  bool adjacent(std::size_t i, std::size_t j) const;
  bool connected() const;

  std::vector<std::uint8_t> adj;  // cycle_count^2 incidence
};

/// Cycle graph (edge iff the two cycles share a node) and its complement on
/// the same vertex set.
std::pair<CycleGraph, CycleGraph> build_cycle_graphs(const std::vector<SimpleCycle>& cycles,
                                                     std::size_t node_count);

/// K_l for l = 1..r: families[l-1] lists the size-l sets of pairwise
/// node-disjoint cycles, as ascending cycle-index vectors in lexicographic
/// order. Empty K_l are kept so the grouping is explicit.
struct DisjointCycleSets {
  std::vector<std::vector<std::vector<std::size_t>>> families;

  std::size_t total_count() const;
};

DisjointCycleSets disjoint_cycle_sets(const std::vector<SimpleCycle>& cycles,
                                      std::size_t node_count, std::size_t family_cap);

/// First pair of cycles sharing two or more nodes, if any (0-based cycle
/// indices). Absence means the digraph is a cactus.
std::optional<std::pair<std::size_t, std::size_t>> overlapping_cycle_pair(
    const std::vector<SimpleCycle>& cycles, std::size_t node_count);

bool is_cactus(const std::vector<SimpleCycle>& cycles, std::size_t node_count);

/// Determinant by enumerating factors: disjoint families of self-loops and
/// simple cycles covering every node. Returns 0 when no factor exists.
double determinant_by_factors(const SquareMatrix& m, const WeightedDigraph& g,
                              std::size_t cycle_cap);

}  // namespace stabcert

#endif
