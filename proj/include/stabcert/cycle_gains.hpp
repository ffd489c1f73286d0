#ifndef STABCERT_CYCLE_GAINS_HPP
#define STABCERT_CYCLE_GAINS_HPP

#include <optional>
#include <string>
#include <vector>

#include "stabcert/config.hpp"
#include "stabcert/graph.hpp"
#include "stabcert/matrix.hpp"

namespace stabcert {

/// Per-edge interconnection gains. gamma(i, j) = m_ij / -m_ii on edges
/// (j -> i), 0 elsewhere. The psi table is present only after a witness
/// construction; psi(i, j) = delta * xi_i / xi_j on the same edges.
struct EdgeGainTable {
  std::size_t n = 0;
  std::vector<double> gamma;
  bool has_psi = false;
  std::vector<double> psi;
  double delta = 0.0;

  double gamma_at(std::size_t i, std::size_t j) const { return gamma[i * n + j]; }
  double psi_at(std::size_t i, std::size_t j) const { return psi[i * n + j]; }
};

/// Sum gains require every diagonal entry below -tolerance; throws
/// Error(NonNegativeDiagonal) naming the first offending 1-based index.
EdgeGainTable edge_sum_gains(const MetzlerMatrix& m, double tolerance);

/// Product of edge gamma around the cycle. Throws Error(MissingEdge) when the
/// cycle uses an edge absent from the table.
double cycle_sum_gain(const SimpleCycle& c, const EdgeGainTable& gains);

/// Product of edge psi around the cycle; table must carry psi.
double cycle_max_gain(const SimpleCycle& c, const EdgeGainTable& gains);

/// gamma_prefix[i-1] is the total cycle gain of the leading i x i submatrix:
/// the inclusion-exclusion sum of gain products over families of pairwise
/// disjoint cycles lying inside {1..i}, or 0 when that prefix is acyclic.
struct TotalGainVector {
  std::vector<double> gamma_prefix;
};

/// Recomputes disjoint families per prefix on the cycles that fit. Every
/// prefix value is cross-checked against the determinant identity
/// det(M_I) = (1 - gamma_{M_I}) * prod m_jj; a violation beyond 1e-9 relative
/// throws Error(ConsistencyCheckFailed).
TotalGainVector total_cycle_gains(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                  const EdgeGainTable& gains, std::size_t family_cap);

/// Positive vector xi with M xi = -1 and the resulting contraction factor
/// delta = max_i sum_j (m_ij / -m_ii) xi_j / xi_i < 1.
struct FeasibilityWitness {
  std::vector<double> xi;
  double delta = 0.0;
};

enum class WitnessStatus { Feasible, Infeasible, Marginal };

struct WitnessOutcome {
  WitnessStatus status = WitnessStatus::Infeasible;
  std::optional<FeasibilityWitness> witness;
  std::string diagnostic;
};

/// Solves M xi = -1. Infeasible (with a diagnostic) when the solve fails or
/// xi has a nonpositive component — both certify the matrix is not Hurwitz.
/// Marginal when delta lands within tolerance of 1.
WitnessOutcome feasibility_witness(const MetzlerMatrix& m, double tolerance);

/// Populates psi_ij = delta * xi_i / xi_j on the edges of m. Validates that
/// every per-node sum  sum_j (m_ij / -m_ii) / psi_ij  is at most 1 (equality
/// is attained at the maximizing node by construction) and that delta < 1, so
/// all cycle products psi_c = delta^|c| stay below 1.
EdgeGainTable max_gains_from_witness(const MetzlerMatrix& m, const FeasibilityWitness& w,
                                     double tolerance);

}  // namespace stabcert

#endif
