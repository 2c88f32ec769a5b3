#pragma once

#include <iosfwd>

namespace tweetsense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses the command line and runs one subcommand. Returns the process exit
// code: 0 success, 1 runtime failure, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace tweetsense::cli
