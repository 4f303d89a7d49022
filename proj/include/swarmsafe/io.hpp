#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "swarmsafe/sim.hpp"

namespace swarmsafe {

inline constexpr int kSchemaVersion = 1;

struct FeasibilitySpec {
  std::vector<double> gamma1_values;
  std::vector<double> gamma2_values;
  int samples = 200;
  EncounterParams encounter;
};

/// A parsed and validated configuration file.
struct ResolvedConfig {
  ScenarioConfig scenario;
  std::optional<FeasibilitySpec> feasibility;
  nlohmann::json source;  ///< the input document, with the seed override applied
};

/**
 * Parses a configuration document.
 *
 * The document is a JSON object with `schema_version` 1. Agents come either
 * from an explicit `agents` array or from a `generator` section. A seed
 * override replaces `seed` before the generator runs. Throws ConfigError.
 */
ResolvedConfig parseConfig(const nlohmann::json& doc,
                           std::optional<std::uint64_t> seed_override = std::nullopt);

ResolvedConfig loadConfig(const std::filesystem::path& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

/// Fully resolved scenario, including generated agents, as JSON.
nlohmann::json toJson(const ScenarioConfig& config);
nlohmann::json toJson(const StepRecord& record);
nlohmann::json toJson(const RunMetrics& metrics);

/// Header line, one line per record, and a final-state line.
void writeRecordsJsonl(std::ostream& os, const ScenarioConfig& config, const RunResult& result);

/// Columns: t,min_dist,n_active_pairs,n_edges,n_dual,total_deviation,qp_fallbacks
void writeSummaryCsv(std::ostream& os, const std::vector<StepRecord>& records);

/// Columns: gamma1,gamma2,feasible_fraction
void writeFeasibilityCsv(std::ostream& os, const FeasibilityMap& map);

/// Fixed, locale-independent number formatting shared by the CSV writers.
std::string formatNumber(double x);

}  // namespace swarmsafe
