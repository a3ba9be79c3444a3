#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyshell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Subcommands: indent, relax, sweep, table1, converge, verify.
/// CSV goes to --out (or `out` when unset); the key = value summary and
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace polyshell::cli
