#include "doublequad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dq {

namespace {

void axpy(State& out, const State& y, double a, const State& k) {
  out.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
}

State checked_eval(const Field& field, double t, const State& y) {
  State k = field(t, y);
  if (k.size() != y.size()) {
    throw DimensionMismatchError("rk4: field returned " + std::to_string(k.size()) +
                                 " components for a state of size " + std::to_string(y.size()));
  }
  return k;
}

State rk4_step(const Field& field, double t, const State& y, double h) {
  State tmp;
  const State k1 = checked_eval(field, t, y);
  axpy(tmp, y, 0.5 * h, k1);
  const State k2 = checked_eval(field, t + 0.5 * h, tmp);
  axpy(tmp, y, 0.5 * h, k2);
  const State k3 = checked_eval(field, t + 0.5 * h, tmp);
  axpy(tmp, y, h, k3);
  const State k4 = checked_eval(field, t + h, tmp);
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

void require_finite(const State& y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw NonFiniteStateError("rk4: non-finite state at t = " + std::to_string(t), t);
    }
  }
}

// Integrates from t0 to t1 with steps t0 + k h, the last one shortened.
template <class OnStep>
State advance(const Field& field, State y, double t0, double t1, double h, OnStep&& on_step) {
  const double span = t1 - t0;
  const auto full = static_cast<long long>(std::floor(span / h * (1.0 + 1e-12)));
  double t = t0;
  for (long long k = 0; k < full; ++k) {
    const double next = (k + 1 == full && std::abs(t0 + (k + 1) * h - t1) <= 1e-12 * h)
                            ? t1
                            : t0 + static_cast<double>(k + 1) * h;
    y = rk4_step(field, t, y, next - t);
    t = next;
    require_finite(y, t);
    on_step(t, y);
  }
  if (t1 - t > 1e-12 * h) {
    y = rk4_step(field, t, y, t1 - t);
    require_finite(y, t1);
    on_step(t1, y);
  }
  return y;
}

}  // namespace

Trajectory rk4_integrate(const Field& field, const State& y0, double t0, double t1, double h) {
  if (!(h > 0.0)) throw InvalidArgument("rk4_integrate: step must be positive");
  if (!(t1 > t0)) throw InvalidArgument("rk4_integrate: t1 must exceed t0");
  require_finite(y0, t0);
  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(y0);
  advance(field, y0, t0, t1, h, [&](double t, const State& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
  });
  return traj;
}

Trajectory rk4_sample(const Field& field, const State& y0, double t0,
                      const std::vector<double>& sample_times, double h) {
  if (!(h > 0.0)) throw InvalidArgument("rk4_sample: step must be positive");
  require_finite(y0, t0);
  Trajectory traj;
  State y = y0;
  double t = t0;
  for (double ts : sample_times) {
    if (ts < t || (!traj.times.empty() && ts <= traj.times.back())) {
      throw InvalidArgument("rk4_sample: sample times must be increasing and >= t0");
    }
    if (ts > t) y = advance(field, y, t, ts, h, [](double, const State&) {});
    t = ts;
    traj.times.push_back(ts);
    traj.states.push_back(y);
  }
  return traj;
}

const DriftEntry& DriftReport::at(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw InvalidArgument("drift report has no invariant named '" + name + "'");
}

double DriftReport::worst() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.max_drift);
  return w;
}

DriftReport drift_report(const Trajectory& traj, const std::vector<NamedInvariant>& invariants) {
  if (traj.times.size() != traj.states.size()) {
    throw DimensionMismatchError("drift_report: times and states differ in length");
  }
  DriftReport rep;
  if (traj.states.empty()) return rep;
  for (const auto& [name, f] : invariants) {
    DriftEntry e;
    e.name = name;
    e.initial = f(traj.states.front());
    e.time_of_max = traj.times.front();
    double lo = e.initial, hi = e.initial;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const double v = f(traj.states[i]);
      const double d = std::abs(v - e.initial);
      if (d > e.max_drift) {
        e.max_drift = d;
        e.time_of_max = traj.times[i];
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    e.spread = hi - lo;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

Trajectory time_reversed(const Trajectory& traj) {
  Trajectory out;
  if (traj.times.empty()) return out;
  const double a = traj.times.front(), b = traj.times.back();
  for (std::size_t i = traj.times.size(); i-- > 0;) {
    out.times.push_back(a + b - traj.times[i]);
    out.states.push_back(traj.states[i]);
  }
  return out;
}

}  // namespace dq
