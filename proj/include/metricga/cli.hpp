#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metricga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitScorer = 4;

// Runs one subcommand (`rerank`, `optimize`, `mine`, `report`, `replay`).
// `args` excludes the program name. Results go to the file named by
// --output, or to `out` when it is "-"; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace metricga::cli
