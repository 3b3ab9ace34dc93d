#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace hpai {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;  // numeric or validation failure

/// Entry point of the `hpai` tool. `args[0]` is the program name.
/// Subcommands: r0, equilibrium, simulate, ensemble, sensitivity.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hpai
