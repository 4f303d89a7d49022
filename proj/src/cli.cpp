#include "swarmsafe/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "swarmsafe/io.hpp"

namespace swarmsafe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct OutputFile {
  std::string name;
  std::string contents;
};

// Refuses to clobber unless forced; writes nothing if any target is blocked.
int writeOutputs(const RunManifest& m, const std::vector<OutputFile>& files) {
  for (const auto& f : files) {
    if (fs::exists(m.out_dir / f.name) && !m.force) {
      std::cerr << fmt::format("error: {} exists (use --force to overwrite)\n",
                               (m.out_dir / f.name).string());
      return kConfigError;
    }
  }
  std::error_code ec;
  fs::create_directories(m.out_dir, ec);
  if (ec) {
    std::cerr << fmt::format("error: cannot create {}: {}\n", m.out_dir.string(), ec.message());
    return kRuntimeFailure;
  }
  for (const auto& f : files) {
    std::ofstream out(m.out_dir / f.name, std::ios::binary | std::ios::trunc);
    out << f.contents;
    if (!out) {
      std::cerr << fmt::format("error: failed writing {}\n", (m.out_dir / f.name).string());
      return kRuntimeFailure;
    }
  }
  return kOk;
}

int checkTargets(const RunManifest& m, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    if (fs::exists(m.out_dir / n) && !m.force) {
      std::cerr << fmt::format("error: {} exists (use --force to overwrite)\n",
                               (m.out_dir / n).string());
      return kConfigError;
    }
  }
  return kOk;
}

json runSection(const RunResult& r) { return toJson(r.metrics); }

std::string modeName(Mode m) {
  switch (m) {
    case Mode::Simulate: return "simulate";
    case Mode::FeasibilityMap: return "feasibility-map";
    case Mode::BaselineCompare: return "baseline-compare";
  }
  return "?";
}

std::optional<ResolvedConfig> load(const RunManifest& m) {
  try {
    return loadConfig(m.config, m.seed);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int cmdSimulate(const RunManifest& manifest) {
  const auto cfg = load(manifest);
  if (!cfg) return kConfigError;
  if (cfg->scenario.agents.empty()) {
    std::cerr << "config error: simulate needs agents or a generator section\n";
    return kConfigError;
  }
  const bool compare = manifest.mode == Mode::BaselineCompare;
  std::vector<std::string> names = {"records.jsonl", "summary.csv", "metrics.json"};
  if (compare) names.push_back("baseline_summary.csv");
  if (int rc = checkTargets(manifest, names); rc != kOk) return rc;

  try {
    ScenarioConfig primary = cfg->scenario;
    if (compare) primary.mode = AllocationMode::Auction;
    const RunResult result = run(primary);

    json metrics = {{"schema_version", kSchemaVersion},
                    {"mode", modeName(manifest.mode)},
                    {"seed", primary.seed},
                    {"config", toJson(primary)},
                    {"source", cfg->source}};
    json summary = runSection(result);
    metrics["r_s"] = primary.hocbf.r_s;
    metrics[toString(primary.mode)] = summary;

    std::ostringstream records;
    writeRecordsJsonl(records, primary, result);
    std::ostringstream csv;
    writeSummaryCsv(csv, result.records);
    std::vector<OutputFile> files = {{"records.jsonl", records.str()}, {"summary.csv", csv.str()}};

    if (compare) {
      ScenarioConfig baseline = primary;
      baseline.mode = AllocationMode::Baseline;
      const RunResult base = run(baseline);
      metrics["baseline"] = runSection(base);
      metrics["constraint_reduction"] = {
          {"auction_total", result.metrics.total_constraints},
          {"baseline_total", base.metrics.total_constraints},
          {"auction_mean_per_tick", result.metrics.mean_constraints_per_tick},
          {"baseline_mean_per_tick", base.metrics.mean_constraints_per_tick}};
      std::ostringstream base_csv;
      writeSummaryCsv(base_csv, base.records);
      files.push_back({"baseline_summary.csv", base_csv.str()});
    }
    files.push_back({"metrics.json", metrics.dump(2) + "\n"});
    return writeOutputs(manifest, files);
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

int cmdFeasibility(const RunManifest& manifest) {
  const auto cfg = load(manifest);
  if (!cfg) return kConfigError;
  if (!cfg->feasibility) {
    std::cerr << "config error: feasibility-map needs a 'feasibility' section\n";
    return kConfigError;
  }
  if (int rc = checkTargets(manifest, {"feasibility_map.csv"}); rc != kOk) return rc;
  try {
    const FeasibilitySpec& fs = *cfg->feasibility;
    const FeasibilityMap map = feasibilityMap(fs.gamma1_values, fs.gamma2_values, fs.samples,
                                              fs.encounter, cfg->scenario.seed);
    std::ostringstream csv;
    writeFeasibilityCsv(csv, map);
    return writeOutputs(manifest, {{"feasibility_map.csv", csv.str()}});
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

int dispatch(const RunManifest& manifest) {
  switch (manifest.mode) {
    case Mode::Simulate:
    case Mode::BaselineCompare: return cmdSimulate(manifest);
    case Mode::FeasibilityMap: return cmdFeasibility(manifest);
  }
  return kUsage;
}

int main(int argc, char** argv) {
  CLI::App app{"Decentralized HOCBF safety-filter swarm simulator"};
  RunManifest manifest;
  std::string mode = "simulate";
  std::uint64_t seed = 0;
  std::string log_level = "warn";

  app.add_option("--config", manifest.config, "Scenario configuration (JSON)")->required();
  app.add_option("--out", manifest.out_dir, "Output directory")->required();
  app.add_option("--mode", mode, "simulate | feasibility-map | baseline-compare")
      ->check(CLI::IsMember({"simulate", "feasibility-map", "baseline-compare"}));
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("--force", manifest.force, "Overwrite existing output files");
  app.add_option("--log-level", log_level, "trace | debug | info | warn | error | off");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));
  if (*seed_opt) manifest.seed = seed;
  manifest.mode = mode == "feasibility-map"    ? Mode::FeasibilityMap
                  : mode == "baseline-compare" ? Mode::BaselineCompare
                                               : Mode::Simulate;
  return dispatch(manifest);
}

}  // namespace swarmsafe::cli
