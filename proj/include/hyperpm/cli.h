#pragma once

#include <iosfwd>

namespace hyperpm {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitRefused = 2;
inline constexpr int kExitContract = 3;

// Entry point of the command-line tool; writes results to `out` and
// diagnostics, stats and usage text to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperpm
