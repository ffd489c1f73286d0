#include "stabcert/cycle_gains.hpp"

#include <algorithm>
#include <cmath>

namespace stabcert {

EdgeGainTable edge_sum_gains(const MetzlerMatrix& m, double tolerance) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(m(i, i) < -tolerance))
      throw Error(ErrorCode::NonNegativeDiagonal,
                  "diagonal entry " + std::to_string(i + 1) + " = " + std::to_string(m(i, i)) +
                      " is not negative");
  EdgeGainTable t;
  t.n = n;
  t.gamma.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) != 0.0) t.gamma[i * n + j] = m(i, j) / -m(i, i);
  return t;
}

namespace {

double cycle_product(const SimpleCycle& c, const EdgeGainTable& t, const std::vector<double>& table) {
  double p = 1.0;
  for (std::size_t k = 0; k < c.nodes.size(); ++k) {
    const std::size_t from = c.nodes[k];
    const std::size_t to = c.nodes[(k + 1) % c.nodes.size()];
    const double g = table[to * t.n + from];
    if (g == 0.0)
      throw Error(ErrorCode::MissingEdge, "cycle uses absent edge " + std::to_string(from + 1) +
                                              " -> " + std::to_string(to + 1));
    p *= g;
  }
  return p;
}

}  // namespace

double cycle_sum_gain(const SimpleCycle& c, const EdgeGainTable& gains) {
  return cycle_product(c, gains, gains.gamma);
}

double cycle_max_gain(const SimpleCycle& c, const EdgeGainTable& gains) {
  if (!gains.has_psi)
    throw Error(ErrorCode::InvalidArgument, "gain table carries no max-interconnection gains");
  return cycle_product(c, gains, gains.psi);
}

TotalGainVector total_cycle_gains(const MetzlerMatrix& m, const std::vector<SimpleCycle>& cycles,
                                  const EdgeGainTable& gains, std::size_t family_cap) {
  const std::size_t n = m.size();
  std::vector<double> gain(cycles.size());
  std::vector<std::size_t> max_node(cycles.size());
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    gain[c] = cycle_sum_gain(cycles[c], gains);
    max_node[c] = *std::max_element(cycles[c].nodes.begin(), cycles[c].nodes.end());
  }

  TotalGainVector out;
  out.gamma_prefix.assign(n, 0.0);
  for (std::size_t prefix = 1; prefix <= n; ++prefix) {
    std::vector<SimpleCycle> sub;
    std::vector<double> sub_gain;
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      if (max_node[c] < prefix) {
        sub.push_back(cycles[c]);
        sub_gain.push_back(gain[c]);
      }
    }
    double total = 0.0;
    if (!sub.empty()) {
      const DisjointCycleSets sets = disjoint_cycle_sets(sub, prefix, family_cap);
      for (std::size_t l = 0; l < sets.families.size(); ++l) {
        const double sgn = (l % 2 == 0) ? 1.0 : -1.0;  // (-1)^(l+1-1), l+1 = family size
        for (const auto& family : sets.families[l]) {
          double p = 1.0;
          for (std::size_t c : family) p *= sub_gain[c];
          total += sgn * p;
        }
      }
    }
    out.gamma_prefix[prefix - 1] = total;

    // Cross-check against det(M_I) = (1 - gamma_{M_I}) prod_{j<=i} m_jj.
    const double det = determinant_lu(leading_submatrix(m.base(), prefix));
    double diag_prod = 1.0;
    for (std::size_t j = 0; j < prefix; ++j) diag_prod *= m(j, j);
    const double predicted = (1.0 - total) * diag_prod;
    if (std::abs(det - predicted) > 1e-9 * (1.0 + std::abs(det)))
      throw Error(ErrorCode::ConsistencyCheckFailed,
                  "total cycle gain disagrees with determinant at prefix " +
                      std::to_string(prefix));
  }
  return out;
}

WitnessOutcome feasibility_witness(const MetzlerMatrix& m, double tolerance) {
  const std::size_t n = m.size();
  WitnessOutcome out;
  std::vector<double> rhs(n, -1.0);
  std::vector<double> xi;
  try {
    xi = solve_linear(m.base(), rhs);
  } catch (const Error& e) {
    out.status = WitnessStatus::Infeasible;
    out.diagnostic = std::string("solve for xi failed: ") + e.what();
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xi[i] > 0.0)) {
      out.status = WitnessStatus::Infeasible;
      out.diagnostic = "xi_" + std::to_string(i + 1) + " = " + std::to_string(xi[i]) +
                       " is not positive";
      return out;
    }
  }
  double delta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(m(i, i) < 0.0)) {
      out.status = WitnessStatus::Infeasible;
      out.diagnostic = "diagonal entry " + std::to_string(i + 1) + " is not negative";
      return out;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) != 0.0) s += m(i, j) / -m(i, i) * xi[j] / xi[i];
    delta = std::max(delta, s);
  }
  if (delta >= 1.0 - tolerance) {
    out.status = delta <= 1.0 + tolerance ? WitnessStatus::Marginal : WitnessStatus::Infeasible;
    out.diagnostic = "contraction factor delta = " + std::to_string(delta);
    return out;
  }
  out.status = WitnessStatus::Feasible;
  out.witness = FeasibilityWitness{std::move(xi), delta};
  return out;
}

EdgeGainTable max_gains_from_witness(const MetzlerMatrix& m, const FeasibilityWitness& w,
                                     double tolerance) {
  const std::size_t n = m.size();
  if (w.xi.size() != n || w.delta < 0.0 || w.delta >= 1.0 - tolerance)
    throw Error(ErrorCode::InvalidWitness, "witness does not certify contraction");
  EdgeGainTable t = edge_sum_gains(m, tolerance);
  t.has_psi = true;
  t.delta = w.delta;
  t.psi.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) != 0.0) t.psi[i * n + j] = w.delta * w.xi[i] / w.xi[j];
  // Per-node sums equal s_i / delta <= 1, with equality exactly at the
  // node(s) attaining delta.
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (t.psi[i * n + j] != 0.0) s += t.gamma_at(i, j) / t.psi_at(i, j);
    if (s > 1.0 + 1e-12)
      throw Error(ErrorCode::InvalidWitness,
                  "node " + std::to_string(i + 1) + " gain sum " + std::to_string(s) +
                      " exceeds 1");
  }
  return t;
}

}  // namespace stabcert
