#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vfix {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs the command line `args` (without the program name). Returns the process exit status:
/// 0 on success, 1 on validation errors, 2 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vfix
