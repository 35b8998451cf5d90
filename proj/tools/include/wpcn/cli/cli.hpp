#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wpcn::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,          // success, or the schedule is feasible
  kValidation = 1,  // bad arguments, config or input file
  kRuntime = 2,     // solver failure, I/O failure or an infeasible schedule
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wpcn::cli
