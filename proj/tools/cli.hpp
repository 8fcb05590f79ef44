#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvdiscord::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kUnphysical = 2;
inline constexpr int kCheckFailed = 3;

/// Runs one command. args[0] is the program name. Result files named with
/// --output are written atomically; otherwise results go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvdiscord::cli
