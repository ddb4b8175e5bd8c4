#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rmt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheck = 4;

// Runs one subcommand; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmt::cli
