#ifndef STABCERT_NONLINEAR_HPP
#define STABCERT_NONLINEAR_HPP

#include <optional>
#include <string>
#include <vector>

#include "stabcert/config.hpp"
#include "stabcert/cycle_gains.hpp"
#include "stabcert/matrix.hpp"
#include "stabcert/stability.hpp"

namespace stabcert {

/// Saturations with sigma(0) = 0 and 0 < sigma'(s) <= 1 for s >= 0. The
/// rational family is softsign s / (1 + |s|), which matches s / (1 + s) on
/// the nonnegative orthant and stays defined for the small negative
/// excursions a fixed-step integrator can produce.
enum class Sigma { Tanh, Rational };

double sigma_eval(Sigma s, double x);

/// Network  dx_i/dt = -a_i x_i + sum_j b_ij sigma(x_j)  with a_i > 0,
/// b_ij >= 0 and zero coupling diagonal. Its Jacobian is Metzler on the
/// nonnegative orthant with J_ii = -a_i and J_ij = b_ij sigma'(x_j).
struct MonotoneNetworkSpec {
  std::size_t n = 0;
  std::vector<double> decay;     // a_i
  std::vector<double> coupling;  // b_ij, row-major, b_ii = 0
  Sigma sigma = Sigma::Tanh;

  double coupling_at(std::size_t i, std::size_t j) const { return coupling[i * n + j]; }
  void validate() const;
};

/// Constant bounds gamma_ij >= J_ij(x) / -J_ii(x) valid for all x >= 0; for
/// the built-in families gamma_ij = b_ij / a_i since sigma' <= 1.
struct JacobianRatioBounds {
  std::size_t n = 0;
  std::vector<double> gamma;

  double at(std::size_t i, std::size_t j) const { return gamma[i * n + j]; }
};

JacobianRatioBounds ratio_bounds(const MonotoneNetworkSpec& spec);

enum class GasMethod { Sum, Max };

/// Global-asymptotic-stability certificate for the origin. `verdict` is the
/// tri-state pass/fail/marginal of the certified inequalities; `certified`
/// collapses it to a strict pass.
struct GasCertificate {
  GasCertificate(GasMethod m, SquareMatrix cmp) : method(m), comparison(std::move(cmp)) {}

  GasMethod method;
  bool certified = false;
  Tristate verdict = Tristate::Marginal;
  SquareMatrix comparison;  // gamma off-diagonal, -1 diagonal

  // Sum method: total cycle gains of the comparison matrix per prefix.
  std::vector<double> total_gains;

  // Max method: witness-scaled psi data with the inflated scale beta in
  // (delta, 1) so every checked inequality is strict.
  double delta = 0.0;
  double psi_scale = 0.0;
  std::vector<double> node_sums;
  std::vector<std::vector<std::size_t>> cycle_nodes;  // 0-based
  std::vector<double> cycle_products;

  std::string diagnostic;
};

SquareMatrix comparison_matrix(const JacobianRatioBounds& bounds);

GasCertificate certify_sum(const MonotoneNetworkSpec& spec, const JacobianRatioBounds& bounds,
                           const AnalysisConfig& cfg);

GasCertificate certify_max(const MonotoneNetworkSpec& spec, const JacobianRatioBounds& bounds,
                           const AnalysisConfig& cfg);

}  // namespace stabcert

#endif
