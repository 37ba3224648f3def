#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlcd {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // goal not entailed, proof invalid
inline constexpr int kExitUsage = 2;     // bad arguments or unreadable input

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlcd
