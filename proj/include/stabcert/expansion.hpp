#ifndef STABCERT_EXPANSION_HPP
#define STABCERT_EXPANSION_HPP

#include <utility>
#include <vector>

#include "stabcert/matrix.hpp"

namespace stabcert {

/// Result of inserting a relay node on every non-loop edge. Node n+k carries
/// diagonal -1 and splits the edge i -> j of weight m_ji into i -> n+k and
/// n+k -> j, both weighted sqrt(m_ji); the direct entry is cleared. Edges are
/// processed in row-major order of the source matrix, so added-node indices
/// are deterministic.
struct ExpandedMatrix {
  SquareMatrix original;
  SquareMatrix expanded;
  /// node_origin[k] is the original edge (from, to), 0-based, that added node
  /// original.size() + k replaced.
  std::vector<std::pair<std::size_t, std::size_t>> node_origin;
};

ExpandedMatrix expand(const MetzlerMatrix& m);

/// Eliminates every added node by Schur complements (their diagonals are -1,
/// so no pivot can vanish) and compares the recovered matrix to the original
/// entrywise within `tolerance`.
bool contract_check(const ExpandedMatrix& e, double tolerance = 1e-10);

}  // namespace stabcert

#endif
