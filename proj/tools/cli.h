// The racetest command-line front end. RunCli is separate from main() so the
// tests can drive it with in-memory streams.

#ifndef RACETEST_TOOLS_CLI_H_
#define RACETEST_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace racetest::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit status.
inline constexpr int kNoRace = 0;
inline constexpr int kRaceFound = 1;
inline constexpr int kUsageError = 2;

// `args` excludes the program name. "-" as --input / --output selects `in` /
// `out`.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace racetest::cli

#endif  // RACETEST_TOOLS_CLI_H_
