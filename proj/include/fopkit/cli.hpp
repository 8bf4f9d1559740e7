#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fopkit {

/// Exit codes of the command-line front-end.
enum ExitCode : int {
    kExitVerified = 0,
    kExitCounterexample = 1,
    kExitUsage = 2,
    kExitBudget = 3,
};

/// Runs one command; args exclude the program name. Reports go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fopkit
