#include "stabcert/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>

namespace stabcert {

bool NodeSet::intersects(const NodeSet& other) const {
  const std::size_t words = std::min(bits_.size(), other.bits_.size());
  for (std::size_t w = 0; w < words; ++w)
    if (bits_[w] & other.bits_[w]) return true;
  return false;
}

std::size_t NodeSet::intersection_count(const NodeSet& other) const {
  const std::size_t words = std::min(bits_.size(), other.bits_.size());
  std::size_t c = 0;
  for (std::size_t w = 0; w < words; ++w) c += std::popcount(bits_[w] & other.bits_[w]);
  return c;
}

NodeSet SimpleCycle::node_set(std::size_t capacity) const {
  NodeSet s(capacity);
  for (std::size_t v : nodes) s.add(v);
  return s;
}

WeightedDigraph WeightedDigraph::from_matrix(const SquareMatrix& m) {
  WeightedDigraph g;
  const std::size_t n = m.size();
  g.n_ = n;
  g.self_loop_.assign(n, false);
  g.loop_weight_.assign(n, 0.0);
  g.succ_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = m(i, j);
      if (w == 0.0) continue;
      if (i == j) {
        g.self_loop_[i] = true;
        g.loop_weight_[i] = w;
      } else {
        // m_ij != 0 induces the edge j -> i.
        g.edges_.push_back({j, i, w});
        g.succ_[j].push_back(i);
      }
    }
  }
  for (auto& s : g.succ_) std::sort(s.begin(), s.end());
  return g;
}

std::size_t WeightedDigraph::self_loop_count() const {
  return static_cast<std::size_t>(std::count(self_loop_.begin(), self_loop_.end(), true));
}

double WeightedDigraph::edge_weight(std::size_t from, std::size_t to) const {
  for (const Edge& e : edges_)
    if (e.from == from && e.to == to) return e.weight;
  return 0.0;
}

namespace {

// Tarjan over an arbitrary successor view; emits components in reverse
// topological order of the condensation.
struct TarjanState {
  std::vector<std::size_t> index, low, stack;
  std::vector<bool> on_stack, seen;
  std::size_t next = 0;
  std::vector<std::vector<std::size_t>> components;
};

void tarjan_visit(std::size_t v, const std::function<const std::vector<std::size_t>&(std::size_t)>& succ,
                  const std::vector<bool>& active, TarjanState& st) {
  st.seen[v] = true;
  st.index[v] = st.low[v] = st.next++;
  st.stack.push_back(v);
  st.on_stack[v] = true;
  for (std::size_t w : succ(v)) {
    if (!active[w]) continue;
    if (!st.seen[w]) {
      tarjan_visit(w, succ, active, st);
      st.low[v] = std::min(st.low[v], st.low[w]);
    } else if (st.on_stack[w]) {
      st.low[v] = std::min(st.low[v], st.index[w]);
    }
  }
  if (st.low[v] == st.index[v]) {
    std::vector<std::size_t> comp;
    std::size_t w;
    do {
      w = st.stack.back();
      st.stack.pop_back();
      st.on_stack[w] = false;
      comp.push_back(w);
    } while (w != v);
    std::sort(comp.begin(), comp.end());
    st.components.push_back(std::move(comp));
  }
}

std::vector<std::vector<std::size_t>> tarjan_components(
    std::size_t n, const std::function<const std::vector<std::size_t>&(std::size_t)>& succ,
    const std::vector<bool>& active) {
  TarjanState st;
  st.index.assign(n, 0);
  st.low.assign(n, 0);
  st.on_stack.assign(n, false);
  st.seen.assign(n, false);
  for (std::size_t v = 0; v < n; ++v)
    if (active[v] && !st.seen[v]) tarjan_visit(v, succ, active, st);
  return st.components;
}

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(const WeightedDigraph& g) {
  std::vector<bool> active(g.node_count(), true);
  return tarjan_components(
      g.node_count(), [&g](std::size_t v) -> const std::vector<std::size_t>& { return g.successors(v); },
      active);
}

namespace {

// Johnson's circuit search rooted at s, restricted to `allowed` nodes.
struct JohnsonState {
  const WeightedDigraph* g = nullptr;
  std::size_t root = 0;
  std::size_t cap = 0;
  std::vector<bool> allowed, blocked;
  std::vector<std::vector<std::size_t>> block_lists;
  std::vector<std::size_t> path;
  std::vector<SimpleCycle>* out = nullptr;
};

void johnson_unblock(std::size_t v, JohnsonState& st) {
  st.blocked[v] = false;
  for (std::size_t w : st.block_lists[v])
    if (st.blocked[w]) johnson_unblock(w, st);
  st.block_lists[v].clear();
}

bool johnson_circuit(std::size_t v, JohnsonState& st) {
  bool found = false;
  st.path.push_back(v);
  st.blocked[v] = true;
  for (std::size_t w : st.g->successors(v)) {
    if (!st.allowed[w]) continue;
    if (w == st.root) {
      if (st.out->size() >= st.cap) throw TooManyCyclesError(st.cap);
      st.out->push_back(SimpleCycle{st.path});
      found = true;
    } else if (!st.blocked[w]) {
      if (johnson_circuit(w, st)) found = true;
    }
  }
  if (found) {
    johnson_unblock(v, st);
  } else {
    for (std::size_t w : st.g->successors(v)) {
      if (!st.allowed[w]) continue;
      auto& lst = st.block_lists[w];
      if (std::find(lst.begin(), lst.end(), v) == lst.end()) lst.push_back(v);
    }
  }
  st.path.pop_back();
  return found;
}

}  // namespace

std::vector<SimpleCycle> enumerate_simple_cycles(const WeightedDigraph& g, std::size_t cap) {
  const std::size_t n = g.node_count();
  std::vector<SimpleCycle> out;
  JohnsonState st;
  st.g = &g;
  st.cap = cap;
  st.out = &out;
  for (std::size_t s = 0; s < n; ++s) {
    // Component of s within the subgraph induced on {s, ..., n-1}; every
    // cycle is found once, rooted at its least node.
    std::vector<bool> active(n, false);
    for (std::size_t v = s; v < n; ++v) active[v] = true;
    auto comps = tarjan_components(
        n, [&g](std::size_t v) -> const std::vector<std::size_t>& { return g.successors(v); },
        active);
    const std::vector<std::size_t>* comp = nullptr;
    for (const auto& c : comps)
      if (std::find(c.begin(), c.end(), s) != c.end()) comp = &c;
    if (!comp || comp->size() < 2) continue;
    st.root = s;
    st.allowed.assign(n, false);
    for (std::size_t v : *comp) st.allowed[v] = true;
    st.blocked.assign(n, false);
    st.block_lists.assign(n, {});
    st.path.clear();
    johnson_circuit(s, st);
  }
  std::sort(out.begin(), out.end(),
            [](const SimpleCycle& a, const SimpleCycle& b) { return a.nodes < b.nodes; });
  return out;
}

bool CycleGraph::adjacent(std::size_t i, std::size_t j) const {
  return adj[i * cycle_count + j] != 0;
}

bool CycleGraph::connected() const {
  if (cycle_count == 0) return true;
  std::vector<bool> seen(cycle_count, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < cycle_count; ++w) {
      if (!seen[w] && adjacent(v, w)) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == cycle_count;
}

std::pair<CycleGraph, CycleGraph> build_cycle_graphs(const std::vector<SimpleCycle>& cycles,
                                                     std::size_t node_count) {
  const std::size_t r = cycles.size();
  CycleGraph cg, comp;
  cg.cycle_count = comp.cycle_count = r;
  cg.adj.assign(r * r, 0);
  comp.adj.assign(r * r, 0);
  std::vector<NodeSet> sets;
  sets.reserve(r);
  for (const auto& c : cycles) sets.push_back(c.node_set(node_count));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const bool shared = sets[i].intersects(sets[j]);
      CycleGraph& target = shared ? cg : comp;
      target.adj[i * r + j] = target.adj[j * r + i] = 1;
      target.edges.emplace_back(i, j);
    }
  }
  return {std::move(cg), std::move(comp)};
}

namespace {

// Upper bound on cycle counts for which the pairwise-disjointness bitmatrix
// (and from it, family enumeration) is still tractable.
constexpr std::size_t kDisjointEnumMaxCycles = 4096;

struct DisjointRows {
  std::size_t r = 0, words = 0;
  std::vector<std::uint64_t> bits;  // rows[i]: j > i with cycles i, j disjoint

  bool get(std::size_t i, std::size_t j) const {
    return (bits[i * words + (j >> 6)] >> (j & 63)) & 1;
  }
  void set(std::size_t i, std::size_t j) {
    bits[i * words + (j >> 6)] |= std::uint64_t{1} << (j & 63);
  }
};

DisjointRows disjointness_rows(const std::vector<SimpleCycle>& cycles, std::size_t node_count) {
  DisjointRows rows;
  rows.r = cycles.size();
  if (rows.r > kDisjointEnumMaxCycles)
    throw Error(ErrorCode::CombinatorialBlowup,
                "cycle count " + std::to_string(rows.r) +
                    " too large for disjoint-family enumeration");
  rows.words = (rows.r + 63) / 64;
  rows.bits.assign(rows.r * rows.words, 0);
  std::vector<NodeSet> sets;
  sets.reserve(rows.r);
  for (const auto& c : cycles) sets.push_back(c.node_set(node_count));
  for (std::size_t i = 0; i < rows.r; ++i)
    for (std::size_t j = i + 1; j < rows.r; ++j)
      if (!sets[i].intersects(sets[j])) rows.set(i, j);
  return rows;
}

// Visits every nonempty family of pairwise-disjoint cycles exactly once, in
// lexicographic order of the ascending index sequence. The callback receives
// the current family; the running count is checked against `cap`.
template <typename Visit>
void walk_families(const DisjointRows& rows, std::size_t cap, Visit&& visit) {
  std::vector<std::size_t> chosen;
  std::vector<std::uint64_t> cand(rows.words);
  std::size_t count = 0;

  std::function<void(const std::uint64_t*)> recurse = [&](const std::uint64_t* candidates) {
    // Iterate set bits ascending.
    for (std::size_t w = 0; w < rows.words; ++w) {
      std::uint64_t word = candidates[w];
      while (word) {
        const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        chosen.push_back(j);
        if (++count > cap)
          throw Error(ErrorCode::CombinatorialBlowup,
                      "disjoint-family count exceeds cap " + std::to_string(cap));
        visit(chosen);
        std::vector<std::uint64_t> next(rows.words);
        for (std::size_t k = 0; k < rows.words; ++k)
          next[k] = candidates[k] & rows.bits[j * rows.words + k];
        // Keep only indices > j; rows already store the upper triangle.
        recurse(next.data());
        chosen.pop_back();
      }
    }
  };

  for (std::size_t w = 0; w < rows.words; ++w) cand[w] = 0;
  for (std::size_t i = 0; i < rows.r; ++i) cand[i >> 6] |= std::uint64_t{1} << (i & 63);
  recurse(cand.data());
}

}  // namespace

std::size_t DisjointCycleSets::total_count() const {
  std::size_t t = 0;
  for (const auto& level : families) t += level.size();
  return t;
}

DisjointCycleSets disjoint_cycle_sets(const std::vector<SimpleCycle>& cycles,
                                      std::size_t node_count, std::size_t family_cap) {
  DisjointCycleSets out;
  out.families.assign(cycles.size(), {});
  if (cycles.empty()) return out;
  const DisjointRows rows = disjointness_rows(cycles, node_count);
  walk_families(rows, family_cap, [&out](const std::vector<std::size_t>& family) {
    out.families[family.size() - 1].push_back(family);
  });
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> overlapping_cycle_pair(
    const std::vector<SimpleCycle>& cycles, std::size_t node_count) {
  std::vector<NodeSet> sets;
  sets.reserve(cycles.size());
  for (const auto& c : cycles) sets.push_back(c.node_set(node_count));
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j)
      if (sets[i].intersection_count(sets[j]) >= 2) return std::make_pair(i, j);
  return std::nullopt;
}

bool is_cactus(const std::vector<SimpleCycle>& cycles, std::size_t node_count) {
  return !overlapping_cycle_pair(cycles, node_count).has_value();
}

double determinant_by_factors(const SquareMatrix& m, const WeightedDigraph& g,
                              std::size_t cycle_cap) {
  const std::size_t n = m.size();
  const std::vector<SimpleCycle> cycles = enumerate_simple_cycles(g, cycle_cap);

  std::vector<double> cycle_weight(cycles.size());
  std::vector<NodeSet> sets;
  sets.reserve(cycles.size());
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& nodes = cycles[c].nodes;
    double w = 1.0;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
      const std::size_t from = nodes[t];
      const std::size_t to = nodes[(t + 1) % nodes.size()];
      w *= m(to, from);
    }
    cycle_weight[c] = w;
    sets.push_back(cycles[c].node_set(n));
  }

  // Contribution of one cycle family: every uncovered node must carry a
  // self-loop; the factor weight picks up those diagonal entries.
  std::vector<std::size_t> covered(n, 0);
  const auto family_term = [&](const std::vector<std::size_t>& family) -> double {
    std::fill(covered.begin(), covered.end(), 0);
    double w = 1.0;
    std::size_t parts = family.size();
    for (std::size_t c : family) {
      w *= cycle_weight[c];
      for (std::size_t v : cycles[c].nodes) covered[v] = 1;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (covered[v]) continue;
      if (!g.has_self_loop(v)) return 0.0;
      w *= g.self_loop_weight(v);
      ++parts;
    }
    const double sgn = (parts % 2 == 0) ? 1.0 : -1.0;
    return sgn * w;
  };

  double total = family_term({});  // the pure self-loop factor, if it exists
  if (!cycles.empty()) {
    const DisjointRows rows = disjointness_rows(cycles, n);
    walk_families(rows, std::numeric_limits<std::size_t>::max(),
                  [&](const std::vector<std::size_t>& family) { total += family_term(family); });
  }
  const double sgn_n = (n % 2 == 0) ? 1.0 : -1.0;
  return sgn_n * total;
}

}  // namespace stabcert
