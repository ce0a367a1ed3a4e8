#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tensorange::cli {

enum ExitCode : int { ok = 0, failure = 1, not_converged = 2 };

/// Parses `args` (without the program name) and runs one subcommand.
/// Reports go to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tensorange::cli
