#include "printers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "swarmsafe/cli.hpp"
#include "swarmsafe/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swarmsafe;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "swarmsafe_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json smallConfig() {
  return json::parse(R"({
    "schema_version": 1,
    "name": "tiny",
    "dim": 2,
    "dt": 0.01,
    "t_end": 6,
    "seed": 3,
    "generator": {"kind": "circle_swap", "count": 3, "center": [3, 3], "radius": 2.0,
                  "speed": 1.0, "angle_jitter": 0.1, "target_offset": 0.35}
  })");
}

fs::path writeJson(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int simulate(const fs::path& config, const fs::path& out, cli::Mode mode = cli::Mode::Simulate,
             bool force = false) {
  cli::RunManifest m;
  m.config = config;
  m.out_dir = out;
  m.mode = mode;
  m.force = force;
  return cli::dispatch(m);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("valid config writes the three outputs") {
  const auto dir = scratch("valid");
  REQUIRE(simulate(writeJson(dir, smallConfig()), dir / "out") == cli::kOk);
  CHECK(fs::exists(dir / "out" / "records.jsonl"));
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(fs::exists(dir / "out" / "metrics.json"));

  const json metrics = json::parse(slurp(dir / "out" / "metrics.json"));
  CHECK(metrics["seed"] == 3);
  CHECK(metrics["config"]["agents"].size() == 3);
  CHECK(metrics.contains("auction"));

  std::istringstream records(slurp(dir / "out" / "records.jsonl"));
  std::string line;
  std::getline(records, line);
  CHECK(json::parse(line).contains("config"));

  const std::string csv = slurp(dir / "out" / "summary.csv");
  CHECK(csv.rfind("t,min_dist,n_active_pairs,n_edges,n_dual,total_deviation,qp_fallbacks\n", 0) == 0);
}

TEST_CASE("malformed configs fail without partial output") {
  const auto dir = scratch("malformed");
  {
    std::ofstream(dir / "broken.json") << "{ \"schema_version\": 1, ";
  }
  CHECK(simulate(dir / "broken.json", dir / "out") == cli::kConfigError);
  CHECK_FALSE(fs::exists(dir / "out"));

  auto doc = smallConfig();
  doc["surprise"] = 1;
  CHECK(simulate(writeJson(dir, doc), dir / "out") == cli::kConfigError);
  doc = smallConfig();
  doc["schema_version"] = 2;
  CHECK(simulate(writeJson(dir, doc), dir / "out") == cli::kConfigError);
  doc = smallConfig();
  doc["hocbf"] = {{"gamma1", -1.0}};
  CHECK(simulate(writeJson(dir, doc), dir / "out") == cli::kConfigError);
  CHECK(simulate(dir / "missing.json", dir / "out") == cli::kConfigError);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("existing outputs need --force") {
  const auto dir = scratch("force");
  const auto cfg = writeJson(dir, smallConfig());
  REQUIRE(simulate(cfg, dir / "out") == cli::kOk);
  CHECK(simulate(cfg, dir / "out") == cli::kConfigError);
  CHECK(simulate(cfg, dir / "out", cli::Mode::Simulate, true) == cli::kOk);
}

TEST_CASE("baseline comparison reports both totals") {
  const auto dir = scratch("compare");
  REQUIRE(simulate(writeJson(dir, smallConfig()), dir / "out", cli::Mode::BaselineCompare) == cli::kOk);
  const json m = json::parse(slurp(dir / "out" / "metrics.json"));
  CHECK(m["constraint_reduction"].contains("auction_total"));
  CHECK(m["constraint_reduction"].contains("baseline_total"));
  CHECK(m["constraint_reduction"]["auction_total"].get<long long>() <=
        m["constraint_reduction"]["baseline_total"].get<long long>());
  CHECK(fs::exists(dir / "out" / "baseline_summary.csv"));
}

TEST_CASE("single-cell feasibility grid gives a single row") {
  const auto dir = scratch("feas");
  const json doc = {{"schema_version", 1},
                    {"seed", 4},
                    {"feasibility", {{"gamma1", {2.0}}, {"gamma2", {3.0}}, {"samples", 1}}}};
  REQUIRE(simulate(writeJson(dir, doc), dir / "out", cli::Mode::FeasibilityMap) == cli::kOk);
  std::istringstream csv(slurp(dir / "out" / "feasibility_map.csv"));
  std::string header, row, extra;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "gamma1,gamma2,feasible_fraction");
  CHECK(row.rfind("2,3,", 0) == 0);
  CHECK_FALSE(std::getline(csv, extra));
}

TEST_CASE("feasibility mode needs a feasibility section") {
  const auto dir = scratch("feas_missing");
  CHECK(simulate(writeJson(dir, smallConfig()), dir / "out", cli::Mode::FeasibilityMap) ==
        cli::kConfigError);
}

TEST_CASE("repeated runs are byte-identical; seed override changes the run") {
  const auto dir = scratch("repeat");
  const auto cfg = writeJson(dir, smallConfig());
  REQUIRE(simulate(cfg, dir / "a") == cli::kOk);
  REQUIRE(simulate(cfg, dir / "b") == cli::kOk);
  for (const char* f : {"records.jsonl", "summary.csv", "metrics.json"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  cli::RunManifest m;
  m.config = cfg;
  m.out_dir = dir / "c";
  m.seed = 99;
  REQUIRE(cli::dispatch(m) == cli::kOk);
  CHECK(slurp(dir / "a" / "summary.csv") != slurp(dir / "c" / "summary.csv"));
  CHECK(json::parse(slurp(dir / "c" / "metrics.json"))["seed"] == 99);
}

TEST_CASE("explicit agent list parses") {
  const json doc = json::parse(R"({
    "schema_version": 1,
    "agents": [
      {"id": 4, "p0": [0, 0], "v0": [0, 0], "target": [1, 1]},
      {"id": 9, "p0": [2, 0], "target": [1, 2]}
    ]
  })");
  const auto cfg = parseConfig(doc);
  REQUIRE(cfg.scenario.agents.size() == 2);
  CHECK(cfg.scenario.agents[1].id == 9);
  CHECK(cfg.scenario.agents[1].v0.norm() == 0.0);
}

TEST_CASE("command line parsing") {
  const auto dir = scratch("argv");
  const auto cfg = writeJson(dir, smallConfig()).string();
  const auto out = (dir / "out").string();
  std::vector<std::string> args = {"swarmsafe", "--config", cfg, "--out", out, "--seed", "5"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(argv.size()), argv.data()) == cli::kOk);

  std::vector<std::string> bad = {"swarmsafe", "--config", cfg, "--out", out, "--mode", "nope"};
  std::vector<char*> bargv;
  for (auto& a : bad) bargv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(bargv.size()), bargv.data()) == cli::kUsage);
}

}
