#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace feedsim::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitIntegrity = 4;

/// Runs one command line. args[0] is the program name. Normal output goes to
/// `out`, progress and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace feedsim::cli
