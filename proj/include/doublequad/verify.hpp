#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dq {

/// One named invariant check. Passing means residual <= tolerance, so a
/// failure always carries residual > tolerance.
struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

Check make_check(std::string name, double residual, double tolerance, std::size_t samples,
                 std::uint64_t seed);

/// Antisymmetry, reality, Jacobi, Casimir and inversion checks on every table.
std::vector<Check> bracket_checks(std::uint64_t seed, std::size_t points);

/// Both Iwasawa factorizations of random SL(2,C) elements.
std::vector<Check> decomposition_checks(std::uint64_t seed, std::size_t samples);

/// Forward map lands in su(2); quartic inverse round trips; the printed inverse does not.
std::vector<Check> legendre_checks(std::uint64_t seed, std::size_t samples);

/// Conservation along RK4, closed forms against RK4, rotator, quadrature guard, RK4 order.
std::vector<Check> flow_checks(std::uint64_t seed, std::size_t starts);

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// "brackets", "decompositions", "legendre", "flows" or "all". Throws InvalidArgument otherwise.
std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed, std::size_t samples);

/// Per-seed sample seeds, so that different checks never reuse a stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace dq
