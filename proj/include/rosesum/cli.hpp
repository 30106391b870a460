#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rosesum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitBudget = 3;

/// Runs one command line (args[0] is the program name). Reports go to `out`,
/// diagnostics and usage to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rosesum::cli
