#include "stabcert/nonlinear.hpp"

#include <cmath>

#include "stabcert/graph.hpp"

namespace stabcert {

double sigma_eval(Sigma s, double x) {
  switch (s) {
    case Sigma::Tanh: return std::tanh(x);
    default: return x / (1.0 + std::abs(x));
  }
}

void MonotoneNetworkSpec::validate() const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "network needs at least one node");
  if (decay.size() != n || coupling.size() != n * n)
    throw Error(ErrorCode::InvalidArgument, "decay/coupling sizes do not match n");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(decay[i]) || decay[i] <= 0.0)
      throw Error(ErrorCode::InvalidArgument,
                  "decay rate " + std::to_string(i + 1) + " must be positive");
    for (std::size_t j = 0; j < n; ++j) {
      const double b = coupling[i * n + j];
      if (!std::isfinite(b) || b < 0.0)
        throw Error(ErrorCode::InvalidArgument, "coupling (" + std::to_string(i + 1) + "," +
                                                    std::to_string(j + 1) + ") must be >= 0");
      if (i == j && b != 0.0)
        throw Error(ErrorCode::InvalidArgument, "coupling diagonal must be zero");
    }
  }
}

JacobianRatioBounds ratio_bounds(const MonotoneNetworkSpec& spec) {
  spec.validate();
  JacobianRatioBounds b;
  b.n = spec.n;
  b.gamma.assign(spec.n * spec.n, 0.0);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.n; ++j)
      if (i != j) b.gamma[i * spec.n + j] = spec.coupling_at(i, j) / spec.decay[i];
  return b;
}

SquareMatrix comparison_matrix(const JacobianRatioBounds& bounds) {
  SquareMatrix m(bounds.n);
  for (std::size_t i = 0; i < bounds.n; ++i) {
    m(i, i) = -1.0;
    for (std::size_t j = 0; j < bounds.n; ++j)
      if (i != j) m(i, j) = bounds.at(i, j);
  }
  return m;
}

GasCertificate certify_sum(const MonotoneNetworkSpec& spec, const JacobianRatioBounds& bounds,
                           const AnalysisConfig& cfg) {
  spec.validate();
  cfg.validate();
  GasCertificate cert(GasMethod::Sum, comparison_matrix(bounds));
  const MetzlerMatrix m = validate_metzler(cert.comparison);
  const WeightedDigraph g = WeightedDigraph::from_matrix(cert.comparison);
  const auto cycles = enumerate_simple_cycles(g, cfg.cycle_cap);
  const EdgeGainTable gains = edge_sum_gains(m, cfg.tolerance);
  const TotalGainVector totals = total_cycle_gains(m, cycles, gains, cfg.family_cap);
  cert.total_gains = totals.gamma_prefix;
  for (const auto& c : cycles) cert.cycle_nodes.push_back(c.nodes);

  cert.verdict = Tristate::Pass;
  for (double gmi : cert.total_gains) {
    const Tristate t = classify_below(gmi, 1.0, cfg.tolerance);
    if (t == Tristate::Fail) cert.verdict = Tristate::Fail;
    if (t == Tristate::Marginal && cert.verdict == Tristate::Pass) cert.verdict = Tristate::Marginal;
  }
  cert.certified = cert.verdict == Tristate::Pass;
  if (!cert.certified) cert.diagnostic = "some prefix total cycle gain is not below 1";
  return cert;
}

GasCertificate certify_max(const MonotoneNetworkSpec& spec, const JacobianRatioBounds& bounds,
                           const AnalysisConfig& cfg) {
  spec.validate();
  cfg.validate();
  GasCertificate cert(GasMethod::Max, comparison_matrix(bounds));
  const MetzlerMatrix m = validate_metzler(cert.comparison);
  const WeightedDigraph g = WeightedDigraph::from_matrix(cert.comparison);
  const auto cycles = enumerate_simple_cycles(g, cfg.cycle_cap);
  for (const auto& c : cycles) cert.cycle_nodes.push_back(c.nodes);

  const WitnessOutcome outcome = feasibility_witness(m, cfg.tolerance);
  if (outcome.status != WitnessStatus::Feasible) {
    cert.verdict =
        outcome.status == WitnessStatus::Marginal ? Tristate::Marginal : Tristate::Fail;
    cert.diagnostic = outcome.diagnostic;
    return cert;
  }
  const FeasibilityWitness& w = *outcome.witness;
  cert.delta = w.delta;
  // Any scale in (delta, 1) makes both inequality families strict; the
  // midpoint is the canonical pick.
  cert.psi_scale = 0.5 * (1.0 + w.delta);
  const std::size_t n = bounds.n;
  const std::vector<double>& xi = w.xi;

  cert.verdict = Tristate::Pass;
  const auto fold = [&cert](Tristate t) {
    if (t == Tristate::Fail) cert.verdict = Tristate::Fail;
    if (t == Tristate::Marginal && cert.verdict == Tristate::Pass) cert.verdict = Tristate::Marginal;
  };

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || bounds.at(i, j) == 0.0) continue;
      const double psi = cert.psi_scale * xi[i] / xi[j];
      s += bounds.at(i, j) / psi;
    }
    cert.node_sums.push_back(s);
    fold(classify_below(s, 1.0, cfg.tolerance));
  }
  for (const auto& c : cycles) {
    double p = 1.0;
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
      const std::size_t from = c.nodes[k];
      const std::size_t to = c.nodes[(k + 1) % c.nodes.size()];
      p *= cert.psi_scale * xi[to] / xi[from];
    }
    cert.cycle_products.push_back(p);
    fold(classify_below(p, 1.0, cfg.tolerance));
  }
  cert.certified = cert.verdict == Tristate::Pass;
  if (!cert.certified && cert.diagnostic.empty())
    cert.diagnostic = "a checked inequality is not strictly below 1";
  return cert;
}

}  // namespace stabcert
