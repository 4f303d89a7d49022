#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

namespace swarmsafe::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kRuntimeFailure = 3,
};

enum class Mode { Simulate, FeasibilityMap, BaselineCompare };

struct RunManifest {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  Mode mode = Mode::Simulate;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

/// Writes records.jsonl, summary.csv and metrics.json (both modes for BaselineCompare).
int cmdSimulate(const RunManifest& manifest);

/// Writes feasibility_map.csv.
int cmdFeasibility(const RunManifest& manifest);

int dispatch(const RunManifest& manifest);

/// Parses command-line flags and dispatches.
int main(int argc, char** argv);

}  // namespace swarmsafe::cli
