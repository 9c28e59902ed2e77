#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shiftconv::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kCheckFailed = 2;

// Runs one subcommand.  args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace shiftconv::cli
