#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzylimit {

// Exit codes of the command-line front end.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int diverges = 2;
inline constexpr int no_limit = 3;
inline constexpr int undetermined = 4;
inline constexpr int domain = 5;
}  // namespace exit_code

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fuzzylimit
