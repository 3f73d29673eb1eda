#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cgabor_cli/config.hpp"

namespace cgabor::cli {

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kConfigError = 2 };

struct RunResult {
  int exit_code = kSuccess;
  std::vector<std::filesystem::path> artifacts;
};

RunResult run_detect(const RunConfig& cfg, const std::filesystem::path& out);
RunResult run_frame_check(const RunConfig& cfg, const std::filesystem::path& out);
RunResult run_bargmann_verify(const RunConfig& cfg, const std::filesystem::path& out);
RunResult run_arm_demo(const RunConfig& cfg, const std::filesystem::path& out);
RunResult run_command(Command command, const RunConfig& cfg, const std::filesystem::path& out);

// Probe list: explicit points, else the configured grid, else empty.
std::vector<Vec> resolve_probes(const RunConfig& cfg);

// Full command line handling; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace cgabor::cli
