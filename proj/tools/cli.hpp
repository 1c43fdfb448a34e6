#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soi::cli {

/// Exit codes.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kIndeterminate = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soi::cli
