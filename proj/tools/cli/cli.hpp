#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace evolvekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit status: 0 success, 1 verification or runtime failure, 2 usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Locale-independent decimal with 17 significant digits.
std::string format_number(double value);

/// Strict locale-independent parse; throws evolvekit::InvalidArgument.
double parse_number(const std::string& text);

}  // namespace evolvekit::cli
