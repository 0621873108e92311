#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtpoly {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
/// A verification or classification check failed, or a computation could
/// not be completed.
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `mtpoly` command line. argv[0] is the program name. Normal output
/// goes to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtpoly
