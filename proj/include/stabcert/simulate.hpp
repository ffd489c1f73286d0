#ifndef STABCERT_SIMULATE_HPP
#define STABCERT_SIMULATE_HPP

#include <span>
#include <vector>

#include "stabcert/matrix.hpp"
#include "stabcert/nonlinear.hpp"

namespace stabcert {

/// Piecewise-constant nonnegative input, left-continuous on the switch grid:
/// value(t) = values[k] for t in [switch_times[k-1], switch_times[k]).
class InputSignal {
 public:
  static InputSignal zero(std::size_t n);
  static InputSignal constant(std::vector<double> u);
  static InputSignal piecewise(std::vector<double> switch_times,
                               std::vector<std::vector<double>> values);

  std::size_t dim() const { return values_.front().size(); }
  const std::vector<double>& value_at(double t) const;

 private:
  std::vector<double> switch_times_;               // ascending
  std::vector<std::vector<double>> values_;        // switch_times_.size() + 1 segments
};

struct Trajectory {
  double step = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> inputs;
  double min_state = 0.0;  // most negative component seen; positivity monitor
};

/// Classical fixed-step RK4 on dx/dt = M x + u(t); the input is held at its
/// segment value across each step. Throws Error(StepRejected) when the state
/// infinity norm passes 1e12.
Trajectory integrate(const MetzlerMatrix& m, std::span<const double> x0, const InputSignal& u,
                     double horizon, double step);

/// RK4 on the monotone network dynamics (no input).
Trajectory integrate(const MonotoneNetworkSpec& spec, std::span<const double> x0, double horizon,
                     double step);

struct IssBoundCheck {
  bool all_pass = false;
  std::vector<bool> node_pass;
  std::vector<double> worst_margin;  // min over grid of (bound - |x_i|); >= -slack when passing
  double slack = 0.0;
};

/// Verifies, at every grid point, the per-node trajectory bound
///   |x_i(t)| <= e^{m_ii t} |x_i(0)| + sum_j (m_ij / -m_ii) max_{s<=t} |x_j(s)|
///               + (1 / -m_ii) max_s |u_i(s)| + slack.
/// Requires negative diagonal entries.
IssBoundCheck check_sum_iss_bound(const Trajectory& traj, const MetzlerMatrix& m,
                                  double slack = 1e-6);

}  // namespace stabcert

#endif
