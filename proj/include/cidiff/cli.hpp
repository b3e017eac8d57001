#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cidiff {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitTimeout = 3 };

/// "250ms", "30s", "10m", "2h"; a bare number means seconds. nullopt on
/// malformed or negative input.
std::optional<std::chrono::milliseconds> parse_duration(std::string_view text);

/// Runs the `cidiff` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cidiff
