#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erc::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kIoError = 3,
  kValidationFailure = 4,
};

/// Environment variable consulted for the default master seed.
inline constexpr const char* kSeedEnvVar = "ERCONSENSUS_SEED";
inline constexpr unsigned long long kDefaultSeed = 1;

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace erc::cli
