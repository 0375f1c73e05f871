#pragma once

#include <iosfwd>

namespace infsl {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       ///< I/O, parse or solver error
inline constexpr int kExitNotConverged = 2;  ///< some solve hit max_iter
inline constexpr int kExitUsage = 64;        ///< bad flags; nothing written

/// Entry point of the `infsl` tool. Subcommands: gen, graph, classify,
/// bench, pde-demo, eval. Normal output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infsl
