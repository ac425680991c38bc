#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tpbvp::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_hypothesis = 2;
inline constexpr int exit_not_found = 3;
inline constexpr int exit_violation = 4;

/// Runs one command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpbvp::cli
