#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Entry point behind the `dlbench` binary. `args` excludes the program
/// name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Golden suites and a small oracle-equivalence sweep; one PASS/FAIL line
/// per check on `out`.
int selftest(std::ostream& out);

}  // namespace dlbench::cli
