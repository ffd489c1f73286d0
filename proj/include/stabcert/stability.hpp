#ifndef STABCERT_STABILITY_HPP
#define STABCERT_STABILITY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabcert/config.hpp"
#include "stabcert/cycle_gains.hpp"
#include "stabcert/graph.hpp"
#include "stabcert/matrix.hpp"

namespace stabcert {

/// Every decision is three-valued: quantities within `tolerance` of their
/// threshold yield Marginal instead of a boolean.
enum class Verdict { Hurwitz, NotHurwitz, Marginal };

enum class Tristate { Pass, Fail, Marginal };

const char* to_string(Verdict v);
const char* to_string(Tristate t);

/// value required strictly below `threshold`.
Tristate classify_below(double value, double threshold, double tolerance);

struct MinorsResult {
  std::vector<double> minors;  // det((-M)_I) for prefixes 1..n
  Verdict verdict = Verdict::Marginal;
};

struct SchurStep {
  std::size_t dim = 0;
  std::vector<double> diagonal;
};

struct SchurResult {
  std::vector<SchurStep> steps;  // working-matrix diagonals, dim n down to where it stopped
  Verdict verdict = Verdict::Marginal;
  bool zero_pivot = false;
  std::size_t zero_pivot_dim = 0;
};

struct CondensationResult {
  std::vector<std::vector<std::size_t>> components;  // reverse topological, 0-based nodes
  bool acyclic_fast_path = false;
  Verdict verdict = Verdict::Marginal;
  std::optional<std::size_t> culprit;  // index into components of a failing block
};

struct SumGainResult {
  bool applicable = false;  // requires all diagonal entries < -tolerance
  std::vector<double> cycle_gains;
  double cycle_gain_sum = 0.0;
  std::vector<double> total_gains;  // gamma_{M_I} per prefix
  Tristate necessary = Tristate::Marginal;   // every gamma_c < 1
  Tristate sufficient = Tristate::Marginal;  // sum of gamma_c < 1
  Verdict exact = Verdict::Marginal;         // every gamma_{M_I} < 1
};

struct WitnessResult {
  WitnessOutcome outcome;
  Verdict verdict = Verdict::Marginal;
  std::optional<std::vector<double>> eta;  // left witness, -M^-T 1
  std::optional<bool> lyapunov_negative_definite;
};

struct MaxGainResult {
  Verdict verdict = Verdict::Marginal;
  std::optional<EdgeGainTable> table;  // psi populated on success
  std::vector<double> node_sums;       // sum_j gamma_ij / psi_ij per node
  std::vector<double> cycle_products;  // psi_c per cycle, cycle order
  std::string diagnostic;
};

/// theta[c][t] is the constant for the node at position t of cycle c's
/// canonical node list.
struct ThetaCertificate {
  std::vector<std::vector<double>> theta;
};

enum class CactusStatus { Certificate, NotApplicable, Infeasible };

struct CactusResult {
  CactusStatus status = CactusStatus::NotApplicable;
  std::optional<std::pair<std::size_t, std::size_t>> overlapping_pair;  // 0-based cycle indices
  std::optional<ThetaCertificate> certificate;
  std::string diagnostic;
};

struct OracleResult {
  double abscissa = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  Verdict verdict = Verdict::Marginal;
};

struct StabilityReport {
  std::size_t n = 0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Marginal;
  bool consistent = false;
  std::vector<SimpleCycle> cycles;
  MinorsResult minors;
  SchurResult schur;
  CondensationResult condensation;
  SumGainResult sum_conditions;
  WitnessResult witness;
  MaxGainResult max_conditions;
  CactusResult cactus;
  std::optional<OracleResult> oracle;
};

/// Hurwitz iff every leading principal minor of -M exceeds +tolerance.
MinorsResult hurwitz_by_minors(const MetzlerMatrix& m, double tolerance);

/// Iterated Schur elimination; Hurwitz iff every working matrix has all
/// diagonal entries below -tolerance. A pivot at (numerical) zero stops the
/// iteration with a NotHurwitz verdict and the zero_pivot diagnostic.
SchurResult hurwitz_by_schur(const MetzlerMatrix& m, double tolerance);

/// Hurwitz iff every strongly connected component's principal submatrix is;
/// a cycle-free digraph short-circuits to the diagonal sign test.
CondensationResult hurwitz_by_condensation(const MetzlerMatrix& m, const WeightedDigraph& g,
                                           const std::vector<SimpleCycle>& cycles,
                                           double tolerance);

SumGainResult sum_gain_verdicts(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                const EdgeGainTable& gains, const TotalGainVector& totals,
                                double tolerance);

/// Hurwitz iff the feasibility witness exists; on success carries the psi
/// table together with the per-node sums and per-cycle products it certifies.
MaxGainResult max_gain_verdict(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                               const WitnessOutcome& witness, double tolerance);

/// Cactus-graph diagonal-stability certificate: per cycle and per node,
/// theta with  prod_{i in c} theta_i^c > gamma_c  and  sum_{c owning i}
/// theta_i^c = 1. NotApplicable when two cycles share two or more nodes,
/// Infeasible when the matrix is not Hurwitz.
CactusResult cactus_certificate(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                const WitnessOutcome& witness, double tolerance);

/// Estimate of the spectral abscissa via the Perron root of M + cI with
/// c = 1 + max |m_ii|, power-iterated per strongly connected component with
/// Collatz-Wielandt enclosure 1e-12. Non-convergence is reported in the
/// result, with the partial estimate kept.
OracleResult spectral_abscissa_oracle(const MetzlerMatrix& m, double tolerance);

/// Runs every test, the witness-derived diagonal Lyapunov check and the
/// oracle; fills the consistency flag. Deterministic for fixed input/config.
StabilityReport full_report(const SquareMatrix& a, const AnalysisConfig& cfg);

}  // namespace stabcert

#endif
