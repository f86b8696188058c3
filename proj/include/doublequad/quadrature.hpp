#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "doublequad/errors.hpp"

namespace dq {

using State = std::vector<double>;

/// Right-hand side of an autonomous or time-dependent ODE on a flat real space.
using Field = std::function<State(double t, const State& y)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const { return times.size(); }
};

/// Classical fixed-step RK4 from t0 to t1, recording every step. The last step
/// is shortened to land exactly on t1. Throws NonFiniteStateError carrying the
/// time of the first non-finite state.
Trajectory rk4_integrate(const Field& field, const State& y0, double t0, double t1, double h);

/// RK4 with step at most h, recording the state only at the requested
/// (strictly increasing, >= t0) sample times.
Trajectory rk4_sample(const Field& field, const State& y0, double t0,
                      const std::vector<double>& sample_times, double h);

/// Composite Simpson rule with n (even, >= 2) intervals. V needs V + V and double * V.
template <class Fn>
auto simpson_integral(Fn&& f, double t0, double t1, int n) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidArgument("simpson_integral: interval count must be even and >= 2, got " +
                          std::to_string(n));
  }
  const double h = (t1 - t0) / n;
  auto sum = f(t0) + f(t1);
  for (int k = 1; k < n; ++k) {
    const double w = (k % 2 == 1) ? 4.0 : 2.0;
    sum = sum + w * f(t0 + k * h);
  }
  return (h / 3.0) * sum;
}

struct DriftEntry {
  std::string name;
  double initial = 0.0;
  /// max_t |f(y_t) - f(y_0)|
  double max_drift = 0.0;
  double time_of_max = 0.0;
  /// max_t f(y_t) - min_t f(y_t)
  double spread = 0.0;
};

struct DriftReport {
  std::vector<DriftEntry> entries;

  /// Throws InvalidArgument for an unknown name.
  const DriftEntry& at(const std::string& name) const;
  double worst() const;
};

using NamedInvariant = std::pair<std::string, std::function<double(const State&)>>;

DriftReport drift_report(const Trajectory& traj, const std::vector<NamedInvariant>& invariants);

/// Reverses sample order and maps t -> t_first + t_last - t, keeping times increasing.
Trajectory time_reversed(const Trajectory& traj);

}  // namespace dq
