// The modalc command-line front end as a library call, so that tests can
// drive it without spawning processes.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modalc {

/// Exit codes: 0 ok, 1 negative verdict, 2 usage, parse or internal error.
enum ExitCode { kExitOk = 0, kExitFail = 1, kExitError = 2 };

/// Runs the CLI on `args` (without the program name). Inputs named "-" are
/// read from `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace modalc
