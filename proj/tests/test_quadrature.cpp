#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "doublequad/quadrature.hpp"

using namespace dq;

namespace {

// y' = i y on the flat layout [re, im].
const Field kRotation = [](double, const State& y) { return State{-y[1], y[0]}; };

double endpoint_error(double h) {
  const auto traj = rk4_integrate(kRotation, {1.0, 0.0}, 0.0, 1.0, h);
  const auto& y = traj.states.back();
  return std::hypot(y[0] - std::cos(1.0), y[1] - std::sin(1.0));
}

}  // namespace

TEST_CASE("zero field gives a constant trajectory") {
  const Field zero = [](double, const State& y) { return State(y.size(), 0.0); };
  const auto traj = rk4_integrate(zero, {1.0, 2.0}, 0.0, 1.0, 0.1);
  CHECK(traj.size() == 11);
  for (const auto& s : traj.states) CHECK(s == State{1.0, 2.0});
  const auto rep = drift_report(traj, {{"x", [](const State& y) { return y[0]; }}});
  CHECK(rep.worst() == 0.0);
}

TEST_CASE("RK4 on y' = iy") {
  CHECK(endpoint_error(1e-3) < 1e-10);
  const double ratio = endpoint_error(0.02) / endpoint_error(0.01);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("RK4 step bookkeeping") {
  const auto traj = rk4_integrate(kRotation, {1.0, 0.0}, 0.0, 1.05, 0.1);
  CHECK(traj.times.back() == 1.05);
  CHECK(traj.times.size() == 12);
  for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  const auto exact = rk4_integrate(kRotation, {1.0, 0.0}, 0.0, 1.0, 0.1);
  CHECK(exact.times.size() == 11);
  CHECK(exact.times.back() == 1.0);
}

TEST_CASE("rk4_sample agrees with rk4_integrate at common times") {
  const auto a = rk4_integrate(kRotation, {1.0, 0.0}, 0.0, 2.0, 0.01);
  const auto b = rk4_sample(kRotation, {1.0, 0.0}, 0.0, {0.0, 1.0, 2.0}, 0.01);
  CHECK(b.states[0] == State{1.0, 0.0});
  CHECK(std::abs(b.states[2][0] - a.states.back()[0]) < 1e-13);
  CHECK_THROWS_AS(rk4_sample(kRotation, {1.0, 0.0}, 0.0, {1.0, 0.5}, 0.01), InvalidArgument);
}

TEST_CASE("RK4 errors") {
  CHECK_THROWS_AS(rk4_integrate(kRotation, {1.0, 0.0}, 0.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rk4_integrate(kRotation, {1.0, 0.0}, 1.0, 1.0, 0.1), InvalidArgument);
  const Field bad = [](double, const State&) { return State{1.0}; };
  CHECK_THROWS_AS(rk4_integrate(bad, {1.0, 0.0}, 0.0, 1.0, 0.1), DimensionMismatchError);
  // y' = y^2 blows up at t = 1.
  const Field blowup = [](double, const State& y) { return State{y[0] * y[0]}; };
  try {
    rk4_integrate(blowup, {1.0}, 0.0, 2.0, 0.01);
    FAIL("expected NonFiniteStateError");
  } catch (const NonFiniteStateError& e) {
    CHECK(e.time() > 0.9);
    CHECK(e.time() <= 2.0);
  }
}

TEST_CASE("Simpson quadrature") {
  CHECK(simpson_integral([](double) { return 2.5; }, 1.0, 3.0, 2) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(simpson_integral([](double s) { return s * s; }, 0.0, 1.0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(simpson_integral([](double s) { return s * s * s - s; }, -1.0, 2.0, 4) - 2.25) < 1e-14);
  const double tp = 2.0 * std::numbers::pi;
  const auto f = [](double s) { return std::exp(std::complex<double>(0.0, -0.5 * s)); };
  const auto exact = std::complex<double>(0.0, 2.0) * (std::exp(std::complex<double>(0.0, -0.5 * tp)) - 1.0);
  // Error bound (b - a) h^4 max|f''''| / 180 is about 2e-7 at n = 64.
  const double e64 = std::abs(simpson_integral(f, 0.0, tp, 64) - exact);
  CHECK(e64 < tp * std::pow(tp / 64, 4) / 16.0 / 180.0);
  CHECK(std::abs(simpson_integral(f, 0.0, tp, 256) - exact) < 1e-9);
  CHECK_THROWS_AS(simpson_integral(f, 0.0, 1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(simpson_integral(f, 0.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("drift report") {
  Trajectory traj;
  for (int i = 0; i <= 10; ++i) {
    traj.times.push_back(0.1 * i);
    traj.states.push_back({1.0});
  }
  traj.states[6] = {1.25};
  const auto rep = drift_report(traj, {{"x", [](const State& y) { return y[0]; }}});
  CHECK(rep.at("x").max_drift == 0.25);
  CHECK(rep.at("x").time_of_max == doctest::Approx(0.6));
  CHECK(rep.at("x").spread == 0.25);
  CHECK_THROWS_AS(rep.at("y"), InvalidArgument);

  SUBCASE("time reversal keeps the drift when endpoints agree") {
    const auto rev = drift_report(time_reversed(traj), {{"x", [](const State& y) { return y[0]; }}});
    CHECK(rev.at("x").max_drift == 0.25);
    CHECK(rev.at("x").time_of_max == doctest::Approx(0.4));
  }
  SUBCASE("spread is reversal invariant in general") {
    traj.states.back() = {0.5};
    const auto fwd = drift_report(traj, {{"x", [](const State& y) { return y[0]; }}});
    const auto rev = drift_report(time_reversed(traj), {{"x", [](const State& y) { return y[0]; }}});
    CHECK(fwd.at("x").spread == rev.at("x").spread);
  }
}
