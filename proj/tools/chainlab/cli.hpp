#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chainlab::cli {

enum ExitCode : int { kSuccess = 0, kAnalysisError = 1, kUsageError = 2 };

/// Runs the chainlab command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainlab::cli
