#pragma once

#include <string>
#include <vector>

namespace byztree {

// Exit statuses shared by the binary and in-process callers.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasibleGame = 3;
inline constexpr int kExitApproximationDomain = 4;

// Runs the full command line (without argv[0]); writes CSVs under --out.
// Deterministic: identical args and config produce byte-identical outputs.
int run_cli(const std::vector<std::string>& args);

}  // namespace byztree
