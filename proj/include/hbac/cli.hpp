#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hbac::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;    // usage, parse, config or validation error
inline constexpr int kExitRuntime = 3;  // failure while simulating or writing results

/// Runs the `hbac` command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hbac::cli
