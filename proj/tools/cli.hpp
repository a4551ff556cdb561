#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qubus::cli {

enum ExitCode : int { ok = 0, runtime_failure = 1, usage_error = 2 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qubus::cli
