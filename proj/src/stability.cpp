#include "stabcert/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stabcert {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Hurwitz: return "Hurwitz";
    case Verdict::NotHurwitz: return "NotHurwitz";
    default: return "Marginal";
  }
}

const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::Pass: return "pass";
    case Tristate::Fail: return "fail";
    default: return "marginal";
  }
}

Tristate classify_below(double value, double threshold, double tolerance) {
  if (value < threshold - tolerance) return Tristate::Pass;
  if (value > threshold + tolerance) return Tristate::Fail;
  return Tristate::Marginal;
}

namespace {

// All entries required < -tolerance.
Verdict classify_negative_diagonal(const std::vector<double>& diag, double tolerance) {
  bool marginal = false;
  for (double d : diag) {
    if (d > tolerance) return Verdict::NotHurwitz;
    if (d >= -tolerance) marginal = true;
  }
  return marginal ? Verdict::Marginal : Verdict::Hurwitz;
}

std::vector<double> diagonal_of(const SquareMatrix& m) {
  std::vector<double> d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) d[i] = m(i, i);
  return d;
}

}  // namespace

MinorsResult hurwitz_by_minors(const MetzlerMatrix& m, double tolerance) {
  MinorsResult r;
  const SquareMatrix neg = m.base().negated();
  bool marginal = false;
  bool failed = false;
  for (std::size_t i = 1; i <= m.size(); ++i) {
    const double det = determinant_lu(leading_submatrix(neg, i));
    r.minors.push_back(det);
    if (det < -tolerance)
      failed = true;
    else if (det <= tolerance)
      marginal = true;
  }
  r.verdict = failed ? Verdict::NotHurwitz : (marginal ? Verdict::Marginal : Verdict::Hurwitz);
  return r;
}

SchurResult hurwitz_by_schur(const MetzlerMatrix& m, double tolerance) {
  SchurResult r;
  SquareMatrix work = m.base();
  const double pivot_tol = kPivotRelTol * m.base().inf_norm();
  while (true) {
    const std::size_t k = work.size();
    r.steps.push_back({k, diagonal_of(work)});
    bool marginal = false;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = work(i, i);
      if (d > tolerance) {
        r.verdict = Verdict::NotHurwitz;
        return r;
      }
      if (std::abs(d) <= pivot_tol) {
        // An exactly-zero diagonal is decisive: the matrix cannot be Hurwitz.
        // When it sits at the pivot position the iteration cannot continue
        // either, which is reported as a distinct diagnostic.
        if (i == k - 1) {
          r.zero_pivot = true;
          r.zero_pivot_dim = k;
        }
        r.verdict = Verdict::NotHurwitz;
        return r;
      }
      if (d >= -tolerance) marginal = true;
    }
    if (marginal) {
      r.verdict = Verdict::Marginal;
      return r;
    }
    if (k == 1) {
      r.verdict = Verdict::Hurwitz;
      return r;
    }
    work = schur_reduce(work);
  }
}

CondensationResult hurwitz_by_condensation(const MetzlerMatrix& m, const WeightedDigraph& g,
                                           const std::vector<SimpleCycle>& cycles,
                                           double tolerance) {
  CondensationResult r;
  r.components = strongly_connected_components(g);
  if (cycles.empty()) {
    r.acyclic_fast_path = true;
    r.verdict = classify_negative_diagonal(diagonal_of(m.base()), tolerance);
    return r;
  }
  bool marginal = false;
  for (std::size_t k = 0; k < r.components.size(); ++k) {
    const SquareMatrix sub = principal_submatrix(m.base(), r.components[k]);
    const Verdict v = hurwitz_by_minors(validate_metzler(sub), tolerance).verdict;
    if (v == Verdict::NotHurwitz) {
      r.verdict = Verdict::NotHurwitz;
      r.culprit = k;
      return r;
    }
    if (v == Verdict::Marginal) marginal = true;
  }
  r.verdict = marginal ? Verdict::Marginal : Verdict::Hurwitz;
  return r;
}

SumGainResult sum_gain_verdicts(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                const EdgeGainTable& gains, const TotalGainVector& totals,
                                double tolerance) {
  (void)m;
  SumGainResult r;
  r.applicable = true;
  r.necessary = Tristate::Pass;
  for (const SimpleCycle& c : cycles) {
    const double g = cycle_sum_gain(c, gains);
    r.cycle_gains.push_back(g);
    r.cycle_gain_sum += g;
    const Tristate t = classify_below(g, 1.0, tolerance);
    if (t == Tristate::Fail)
      r.necessary = Tristate::Fail;
    else if (t == Tristate::Marginal && r.necessary == Tristate::Pass)
      r.necessary = Tristate::Marginal;
  }
  r.sufficient = classify_below(r.cycle_gain_sum, 1.0, tolerance);
  r.total_gains = totals.gamma_prefix;
  bool marginal = false;
  bool failed = false;
  for (double gmi : r.total_gains) {
    const Tristate t = classify_below(gmi, 1.0, tolerance);
    if (t == Tristate::Fail) failed = true;
    if (t == Tristate::Marginal) marginal = true;
  }
  r.exact = failed ? Verdict::NotHurwitz : (marginal ? Verdict::Marginal : Verdict::Hurwitz);
  return r;
}

MaxGainResult max_gain_verdict(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                               const WitnessOutcome& witness, double tolerance) {
  MaxGainResult r;
  r.diagnostic = witness.diagnostic;
  if (witness.status == WitnessStatus::Infeasible) {
    r.verdict = Verdict::NotHurwitz;
    return r;
  }
  if (witness.status == WitnessStatus::Marginal) {
    r.verdict = Verdict::Marginal;
    return r;
  }
  r.verdict = Verdict::Hurwitz;
  EdgeGainTable table = max_gains_from_witness(m, *witness.witness, tolerance);
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (table.psi[i * n + j] != 0.0) s += table.gamma_at(i, j) / table.psi_at(i, j);
    r.node_sums.push_back(s);
  }
  for (const SimpleCycle& c : cycles) r.cycle_products.push_back(cycle_max_gain(c, table));
  r.table = std::move(table);
  return r;
}

CactusResult cactus_certificate(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                const WitnessOutcome& witness, double tolerance) {
  CactusResult r;
  if (auto pair = overlapping_cycle_pair(cycles, m.size())) {
    r.status = CactusStatus::NotApplicable;
    r.overlapping_pair = pair;
    r.diagnostic = "cycles " + std::to_string(pair->first + 1) + " and " +
                   std::to_string(pair->second + 1) + " share two or more nodes";
    return r;
  }
  if (witness.status != WitnessStatus::Feasible) {
    r.status = CactusStatus::Infeasible;
    r.diagnostic = witness.diagnostic.empty() ? "matrix is not Hurwitz" : witness.diagnostic;
    return r;
  }

  const EdgeGainTable table = max_gains_from_witness(m, *witness.witness, tolerance);
  const std::size_t n = m.size();

  // Raw theta at each node of each cycle: gain ratio gamma/psi of the cycle
  // edge entering that node. In a cactus no two cycles share an edge, so the
  // per-node sums of these ratios are bounded by the witness node sums.
  ThetaCertificate cert;
  cert.theta.resize(cycles.size());
  std::vector<double> node_sum(n, 0.0);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& nodes = cycles[c].nodes;
    cert.theta[c].resize(nodes.size());
    for (std::size_t t = 0; t < nodes.size(); ++t) {
      const std::size_t to = nodes[t];
      const std::size_t from = nodes[(t + nodes.size() - 1) % nodes.size()];
      const double theta = table.gamma_at(to, from) / table.psi_at(to, from);
      cert.theta[c][t] = theta;
      node_sum[to] += theta;
    }
  }
  // Normalize per node so the sums hit 1 exactly; dividing by a factor <= 1
  // can only grow each cycle product.
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& nodes = cycles[c].nodes;
    for (std::size_t t = 0; t < nodes.size(); ++t) cert.theta[c][t] /= node_sum[nodes[t]];
  }

  const EdgeGainTable sums = edge_sum_gains(m, tolerance);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    double prod = 1.0;
    for (double th : cert.theta[c]) prod *= th;
    const double gamma_c = cycle_sum_gain(cycles[c], sums);
    if (!(prod > gamma_c * (1.0 + tolerance)))
      throw Error(ErrorCode::ConsistencyCheckFailed,
                  "theta product does not clear the cycle gain at cycle " + std::to_string(c + 1));
  }
  r.status = CactusStatus::Certificate;
  r.certificate = std::move(cert);
  return r;
}

namespace {

struct PowerOutcome {
  double rho = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// Collatz-Wielandt enclosure on a nonnegative matrix with positive diagonal.
PowerOutcome perron_root(const SquareMatrix& b) {
  constexpr double kConvTol = 1e-12;
  constexpr std::size_t kMaxIter = 2000000;
  const std::size_t k = b.size();
  PowerOutcome out;
  std::vector<double> v(k, 1.0 / static_cast<double>(k));
  std::vector<double> w(k);
  for (std::size_t it = 1; it <= kMaxIter; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += b(i, j) * v[j];
      w[i] = s;
    }
    double lo = w[0] / v[0], hi = lo;
    for (std::size_t i = 1; i < k; ++i) {
      const double ratio = w[i] / v[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    out.rho = 0.5 * (lo + hi);
    out.iterations = it;
    if (hi - lo <= kConvTol * (1.0 + std::abs(hi))) {
      out.converged = true;
      return out;
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) v[i] = w[i] / total;
  }
  return out;
}

}  // namespace

OracleResult spectral_abscissa_oracle(const MetzlerMatrix& m, double tolerance) {
  OracleResult r;
  const std::size_t n = m.size();
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, std::abs(m(i, i)));
  shift += 1.0;

  const WeightedDigraph g = WeightedDigraph::from_matrix(m.base());
  const auto components = strongly_connected_components(g);
  double rho = 0.0;
  bool all_converged = true;
  bool first = true;
  for (const auto& comp : components) {
    double comp_rho;
    if (comp.size() == 1) {
      comp_rho = m(comp[0], comp[0]) + shift;
    } else {
      SquareMatrix block = principal_submatrix(m.base(), comp);
      for (std::size_t i = 0; i < block.size(); ++i) block(i, i) += shift;
      const PowerOutcome po = perron_root(block);
      comp_rho = po.rho;
      all_converged = all_converged && po.converged;
      r.iterations += po.iterations;
    }
    rho = first ? comp_rho : std::max(rho, comp_rho);
    first = false;
  }
  r.abscissa = rho - shift;
  r.converged = all_converged;
  if (!r.converged) {
    r.verdict = Verdict::Marginal;
  } else if (r.abscissa < -tolerance) {
    r.verdict = Verdict::Hurwitz;
  } else if (r.abscissa > tolerance) {
    r.verdict = Verdict::NotHurwitz;
  } else {
    r.verdict = Verdict::Marginal;
  }
  return r;
}

namespace {

bool cholesky_positive_definite(const SquareMatrix& q) {
  const std::size_t n = q.size();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = q(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return true;
}

WitnessResult witness_result(const MetzlerMatrix& m, double tolerance) {
  WitnessResult r;
  r.outcome = feasibility_witness(m, tolerance);
  switch (r.outcome.status) {
    case WitnessStatus::Feasible: r.verdict = Verdict::Hurwitz; break;
    case WitnessStatus::Marginal: r.verdict = Verdict::Marginal; break;
    default: r.verdict = Verdict::NotHurwitz; break;
  }
  if (r.outcome.status != WitnessStatus::Feasible) return r;

  // Left witness and the diagonal Lyapunov test: P = diag(eta_i / xi_i)
  // must make -(M^T P + P M) positive definite.
  const std::size_t n = m.size();
  std::vector<double> rhs(n, -1.0);
  try {
    std::vector<double> eta = solve_linear_transposed(m.base(), rhs);
    bool eta_positive = std::all_of(eta.begin(), eta.end(), [](double v) { return v > 0.0; });
    if (eta_positive) {
      const std::vector<double>& xi = r.outcome.witness->xi;
      SquareMatrix q(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double pi = eta[i] / xi[i];
        for (std::size_t j = 0; j < n; ++j) {
          const double pj = eta[j] / xi[j];
          q(i, j) = -(m(j, i) * pj + pi * m(i, j));
        }
      }
      r.lyapunov_negative_definite = cholesky_positive_definite(q);
    } else {
      r.lyapunov_negative_definite = false;
    }
    r.eta = std::move(eta);
  } catch (const Error&) {
    r.lyapunov_negative_definite = false;
  }
  return r;
}

void accumulate(Verdict v, bool& any_h, bool& any_nh) {
  if (v == Verdict::Hurwitz) any_h = true;
  if (v == Verdict::NotHurwitz) any_nh = true;
}

}  // namespace

StabilityReport full_report(const SquareMatrix& a, const AnalysisConfig& cfg) {
  cfg.validate();
  StabilityReport rep;
  rep.n = a.size();
  rep.tolerance = cfg.tolerance;

  const MetzlerMatrix m = validate_metzler(a);
  const WeightedDigraph g = WeightedDigraph::from_matrix(a);
  rep.cycles = enumerate_simple_cycles(g, cfg.cycle_cap);

  rep.minors = hurwitz_by_minors(m, cfg.tolerance);
  rep.schur = hurwitz_by_schur(m, cfg.tolerance);
  rep.condensation = hurwitz_by_condensation(m, g, rep.cycles, cfg.tolerance);

  bool diagonals_negative = true;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!(m(i, i) < -cfg.tolerance)) diagonals_negative = false;
  if (diagonals_negative) {
    const EdgeGainTable gains = edge_sum_gains(m, cfg.tolerance);
    const TotalGainVector totals = total_cycle_gains(m, rep.cycles, gains, cfg.family_cap);
    rep.sum_conditions = sum_gain_verdicts(m, rep.cycles, gains, totals, cfg.tolerance);
  }

  rep.witness = witness_result(m, cfg.tolerance);
  rep.max_conditions = max_gain_verdict(m, rep.cycles, rep.witness.outcome, cfg.tolerance);
  rep.cactus = cactus_certificate(m, rep.cycles, rep.witness.outcome, cfg.tolerance);
  if (cfg.with_oracle) rep.oracle = spectral_abscissa_oracle(m, cfg.tolerance);

  rep.verdict = rep.minors.verdict;

  bool any_h = false, any_nh = false;
  accumulate(rep.minors.verdict, any_h, any_nh);
  accumulate(rep.schur.verdict, any_h, any_nh);
  accumulate(rep.condensation.verdict, any_h, any_nh);
  accumulate(rep.witness.verdict, any_h, any_nh);
  accumulate(rep.max_conditions.verdict, any_h, any_nh);
  if (rep.sum_conditions.applicable) accumulate(rep.sum_conditions.exact, any_h, any_nh);
  if (rep.oracle && rep.oracle->converged) accumulate(rep.oracle->verdict, any_h, any_nh);

  if (any_h && any_nh) {
    rep.consistent = false;
  } else if (rep.verdict == Verdict::Hurwitz) {
    rep.consistent = !any_nh;
  } else if (rep.verdict == Verdict::NotHurwitz) {
    rep.consistent = !any_h;
  } else {
    rep.consistent = true;
  }
  return rep;
}

}  // namespace stabcert
