#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "doublequad/errors.hpp"

namespace dq::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kUsageError = 2, kOracleDeviation = 3 };

/// Config problems; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parsed simulate configuration. The system block stays as JSON text and is
/// decoded by the system builder, so that error messages can name its fields.
struct RunConfig {
  std::string system;
  std::string system_params;  // JSON object
  double t1 = 0.0;
  double dt = 0.0;
  bool oracle = false;
  std::uint64_t seed = 0;
  std::string output;  // empty: stdout
  /// RK4 step for the oracle.
  double h = 1e-3;
  double max_dev = 1e-5;
};

/// Valid values of the "system" field.
const std::vector<std::string>& system_names();

/// Parses and validates a config document. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);

struct SimulationResult {
  std::string csv;
  /// Largest oracle deviation over all rows; empty without the oracle.
  std::optional<double> max_oracle_dev;
};

/// Builds the trajectory CSV. Throws ConfigError for bad system parameters.
SimulationResult simulate(const RunConfig& config);

/// Writes the CSV (atomically when config.output is set) and returns the exit code.
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Prints the JSON report to out. Returns 0 when every check passes, 1 otherwise, 2 for an unknown suite.
int run_verify(const std::string& suite, std::uint64_t seed, std::size_t samples, std::ostream& out,
               std::ostream& err);

/// Forward Legendre map at u = (r, gamma).
int run_legendre_map(double r, double gamma_re, double gamma_im, double F, std::ostream& out, std::ostream& err);
/// Inverse for the velocity -(i/2) [[s, w], [conj w, -s]].
int run_legendre_invert(double s, double w_re, double w_im, double F, bool paper_verbatim, std::ostream& out,
                        std::ostream& err);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Writes to a temporary file next to path, then renames it over path.
void write_file_atomically(const std::string& path, const std::string& contents);

/// Full command line entry point; argv[0] is the program name.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dq::cli
