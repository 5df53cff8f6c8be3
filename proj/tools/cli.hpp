#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace junction_hj::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     ///< verify found a violation, I/O
inline constexpr int kExitUsage = 2;       ///< unknown flag or bad syntax
inline constexpr int kExitInvalid = 3;     ///< scenario or argument invalid
inline constexpr int kExitNumerical = 4;   ///< root finding did not converge

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace junction_hj::cli
