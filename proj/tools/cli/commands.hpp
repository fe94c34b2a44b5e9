#pragma once

#include <ostream>
#include <span>
#include <string>

namespace pherm::cli {

enum ExitCode : int {
  kPseudoHermitian = 0,
  kNotPseudoHermitian = 1,
  kAnalysisError = 2,
  kUsage = 64,
  kFileError = 66,
};

/// Dispatches one invocation. `args` excludes the program name. Reports go
/// to `out` as JSON; diagnostics go to `err`.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pherm::cli
