#pragma once

#include <ostream>

namespace invevo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Runs the command line. Exit 0 on success, 1 on usage or validation
/// errors, 2 when generation or verification fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace invevo::cli
