#include "stabcert/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stabcert {

InputSignal InputSignal::zero(std::size_t n) {
  InputSignal s;
  s.values_.emplace_back(n, 0.0);
  return s;
}

InputSignal InputSignal::constant(std::vector<double> u) {
  InputSignal s;
  s.values_.push_back(std::move(u));
  return s;
}

InputSignal InputSignal::piecewise(std::vector<double> switch_times,
                                   std::vector<std::vector<double>> values) {
  if (values.empty() || values.size() != switch_times.size() + 1)
    throw Error(ErrorCode::InvalidArgument, "need one more value segment than switch times");
  if (!std::is_sorted(switch_times.begin(), switch_times.end()))
    throw Error(ErrorCode::InvalidArgument, "switch times must be ascending");
  const std::size_t n = values.front().size();
  for (const auto& v : values)
    if (v.size() != n) throw Error(ErrorCode::InvalidArgument, "segment dimension mismatch");
  InputSignal s;
  s.switch_times_ = std::move(switch_times);
  s.values_ = std::move(values);
  return s;
}

const std::vector<double>& InputSignal::value_at(double t) const {
  std::size_t seg = 0;
  while (seg < switch_times_.size() && t >= switch_times_[seg]) ++seg;
  return values_[seg];
}

namespace {

constexpr double kOverflowGuard = 1e12;

template <typename Deriv>
Trajectory rk4(std::size_t n, std::span<const double> x0, const InputSignal* u, double horizon,
               double step, Deriv&& deriv) {
  if (!(step > 0.0) || horizon < step)
    throw Error(ErrorCode::InvalidArgument, "need step > 0 and horizon >= step");
  if (x0.size() != n) throw Error(ErrorCode::InvalidArgument, "initial state dimension mismatch");

  Trajectory traj;
  traj.step = step;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-12));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const std::vector<double> zero_input(n, 0.0);

  const auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.inputs.push_back(u ? u->value_at(t) : zero_input);
    for (double v : x) traj.min_state = std::min(traj.min_state, v);
  };
  record(0.0);

  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * step;
    // Hold the input at its segment value across the whole step.
    const std::vector<double>& uval = u ? u->value_at(t) : zero_input;
    deriv(x, uval, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
    deriv(tmp, uval, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
    deriv(tmp, uval, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
    deriv(tmp, uval, k4);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      norm = std::max(norm, std::abs(x[i]));
    }
    if (norm > kOverflowGuard)
      throw Error(ErrorCode::StepRejected,
                  "state norm exceeded overflow guard at t = " + std::to_string(t + step));
    record(static_cast<double>(s + 1) * step);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const MetzlerMatrix& m, std::span<const double> x0, const InputSignal& u,
                     double horizon, double step) {
  const std::size_t n = m.size();
  if (u.dim() != n) throw Error(ErrorCode::InvalidArgument, "input dimension mismatch");
  return rk4(n, x0, &u, horizon, step,
             [&m, n](const std::vector<double>& x, const std::vector<double>& uv,
                     std::vector<double>& out) {
               for (std::size_t i = 0; i < n; ++i) {
                 double s = uv[i];
                 for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
                 out[i] = s;
               }
             });
}

Trajectory integrate(const MonotoneNetworkSpec& spec, std::span<const double> x0, double horizon,
                     double step) {
  spec.validate();
  const std::size_t n = spec.n;
  std::vector<double> sig(n);
  return rk4(n, x0, nullptr, horizon, step,
             [&spec, &sig, n](const std::vector<double>& x, const std::vector<double>&,
                              std::vector<double>& out) {
               for (std::size_t j = 0; j < n; ++j) sig[j] = sigma_eval(spec.sigma, x[j]);
               for (std::size_t i = 0; i < n; ++i) {
                 double s = -spec.decay[i] * x[i];
                 for (std::size_t j = 0; j < n; ++j)
                   if (i != j) s += spec.coupling_at(i, j) * sig[j];
                 out[i] = s;
               }
             });
}

IssBoundCheck check_sum_iss_bound(const Trajectory& traj, const MetzlerMatrix& m, double slack) {
  const std::size_t n = m.size();
  if (traj.states.empty() || traj.states.front().size() != n)
    throw Error(ErrorCode::InvalidArgument, "trajectory dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(m(i, i) < 0.0))
      throw Error(ErrorCode::NonNegativeDiagonal,
                  "diagonal entry " + std::to_string(i + 1) + " is not negative");

  IssBoundCheck check;
  check.slack = slack;
  check.node_pass.assign(n, true);
  check.worst_margin.assign(n, std::numeric_limits<double>::infinity());

  std::vector<double> running_max(n, 0.0);  // max_{s<=t} |x_j(s)| over grid points
  std::vector<double> input_max(n, 0.0);
  const std::vector<double>& x0 = traj.states.front();

  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& x = traj.states[k];
    const auto& u = traj.inputs[k];
    for (std::size_t j = 0; j < n; ++j) {
      running_max[j] = std::max(running_max[j], std::abs(x[j]));
      input_max[j] = std::max(input_max[j], std::abs(u[j]));
    }
    const double t = traj.times[k];
    for (std::size_t i = 0; i < n; ++i) {
      double bound = std::exp(m(i, i) * t) * std::abs(x0[i]) + input_max[i] / -m(i, i);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && m(i, j) != 0.0) bound += m(i, j) / -m(i, i) * running_max[j];
      const double margin = bound + slack - std::abs(x[i]);
      check.worst_margin[i] = std::min(check.worst_margin[i], bound - std::abs(x[i]));
      if (margin < 0.0) check.node_pass[i] = false;
    }
  }
  check.all_pass =
      std::all_of(check.node_pass.begin(), check.node_pass.end(), [](bool b) { return b; });
  return check;
}

}  // namespace stabcert
