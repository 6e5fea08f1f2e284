#pragma once

// JSON-driven front end shared by the command-line tool and the tests:
// configuration loading with field-precise diagnostics, artifact writing
// (solution/trace CSVs and a run record with a byte-stable payload), and the
// drivers behind the solve / norm / verify / reproduce commands.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace varex::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,          ///< solve converged / all checks passed
  kExitConfig = 1,      ///< configuration or expression parse error
  kExitMaxIters = 2,    ///< solver stopped on the iteration cap
  kExitSaturated = 3,   ///< saturated or otherwise mis-posed data
  kExitCheckFailed = 4  ///< a verify/reproduce check reported failure
};

/// Parse or validation failure in a configuration file; the message names
/// the offending field and, for expressions, the byte offset.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimizes the energy described by the JSON config and writes
/// solution.csv, trace.csv and run.json into the configured output
/// directory. Returns kExitOk / kExitMaxIters / kExitSaturated; prints
/// configuration problems to stderr and returns kExitConfig.
int cmd_solve(const std::string& config_path);

/// Computes a Luxemburg norm described by the JSON config and prints it to
/// stdout with twelve significant digits.
int cmd_norm(const std::string& config_path);

/// Runs one named check suite ("clarkson", "ucstar", "lemmas",
/// "gradientcheck", "monotonicity") with the given seed and per-check sample
/// count, writing report.json into out_dir. Returns kExitOk iff every check
/// passed, kExitCheckFailed otherwise.
int cmd_verify(const std::string& suite, std::uint64_t seed, long n_samples,
               const std::string& out_dir);

/// Re-runs one named example ("remark" with index j, "v0-example" with
/// layer k and depth s_max, "pimpliesq") at the given quadrature resolution
/// and writes report.json into out_dir. Returns kExitOk iff the example's
/// checks passed, kExitCheckFailed otherwise.
int cmd_reproduce(const std::string& example, long j, int k, int s_max,
                  int resolution, const std::string& out_dir);

}  // namespace varex::cli
