// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "swarmsafe/cli.hpp"
#include "swarmsafe/io.hpp"
#include "swarmsafe/sim.hpp"

namespace fs = std::filesystem;
using namespace swarmsafe;

namespace {

const fs::path kScenarios = SWARMSAFE_SCENARIO_DIR;
constexpr double kRs = 0.4;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %-26s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

ScenarioConfig scenario(const std::string& file) { return loadConfig(kScenarios / file).scenario; }

void safety() {
  bool ok = true;
  std::string detail;
  for (const char* file : {"three_agents.json", "eight_agents.json", "twenty_agents.json"}) {
    const ScenarioConfig cfg = scenario(file);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool good = cfg.hocbf.r_s == kRs && r.metrics.min_distance >= kRs - 1e-6 && secs < 30.0;
    ok = ok && good;
    detail += fmt::format("{}: N={} min={:.4f} t={:.2f}s; ", cfg.name, cfg.agents.size(),
                          r.metrics.min_distance, secs);
  }
  report("safety-invariance", ok, detail);
}

void projection() {
  oracle::Rng rng(1001);
  double worst_arg = 0.0, worst_cost = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const int dim = n % 2 == 0 ? 2 : 3;
    const VecD a = rng.vec(dim, -3, 3);
    const VecD nrm = rng.vecAway(dim, -3, 3, 0.2);
    const double rhs = rng.uniform(-4.0, 4.0) * oracle::norm(nrm);
    const auto pr = projectSingle(a, nrm, rhs);
    const double excess = std::max(0.0, rhs - oracle::dot(nrm, a));
    worst_cost = std::max(worst_cost, std::abs(pr.cost - excess * excess / oracle::dot(nrm, nrm)));
    worst_arg = std::max(worst_arg, oracle::distance(oracle::gridProjection(a, nrm, rhs), pr.a_star));
  }
  report("projection-oracle", worst_arg <= 2e-3 && worst_cost <= 1e-10,
         fmt::format("1000 instances, max |a - grid|={:.2e}, max cost err={:.2e}", worst_arg, worst_cost));
}

void qpCorrectness() {
  oracle::Rng rng(1002);
  double worst_single = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const int dim = n % 2 == 0 ? 2 : 3;
    auto p = QpProblem::withSymmetricBox(rng.vec(dim, -5, 5), 1e3);
    p.halfspaces.push_back({rng.vecAway(dim, -3, 3, 0.05), rng.uniform(-10, 10)});
    const auto sol = solve(p);
    const auto pr = projectSingle(p.a_nom, p.halfspaces[0].normal, p.halfspaces[0].rhs);
    worst_single = sol.status == QpStatus::Optimal
                       ? std::max(worst_single, (sol.a_star - pr.a_star).maxAbs())
                       : std::numeric_limits<double>::infinity();
  }

  double worst_kkt = 0.0;
  int optimal = 0, infeasible = 0, unconfirmed = 0;
  while (optimal < 1000) {
    const auto p = oracle::randomQp(rng, rng.coin() ? 2 : 3, rng.integer(2, 6));
    const auto sol = solve(p);
    if (sol.status == QpStatus::Optimal) {
      ++optimal;
      worst_kkt = std::max(worst_kkt, kktResiduals(p, sol).worst());
    } else {
      ++infeasible;
      if (oracle::hasFeasibleVertex(p)) ++unconfirmed;
    }
  }
  report("qp-correctness",
         worst_single <= 1e-8 && worst_kkt < 1e-7 && unconfirmed == 0 && infeasible > 0,
         fmt::format("single-constraint max err={:.2e}; {} multi-constraint KKT max={:.2e}; "
                     "{} infeasible, {} contradicted by enumeration",
                     worst_single, optimal, worst_kkt, infeasible, unconfirmed));
}

void recursionConsistency() {
  oracle::Rng rng(1003);
  int mismatches = 0;
  for (int n = 0; n < 1000; ++n) {
    const HocbfParams p{rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0), kRs};
    const int dim = n % 2 == 0 ? 2 : 3;
    AgentState i, j;
    i.id = 1;
    j.id = 2;
    i.p = rng.vec(dim, 0, 3);
    j.p = rng.vec(dim, 0, 3);
    i.v = rng.vec(dim, -2, 2);
    j.v = rng.vec(dim, -2, 2);
    i.target = i.p;
    j.target = j.p;
    const VecD ai = rng.vec(dim, -5, 5);
    const int model = n % 3;
    PairConstraint pc;
    VecD aj(dim);
    if (model == 0) {
      pc = buildConstraint(i, j, p, true);
      aj = -ai;
    } else if (model == 1) {
      pc = buildConstraint(i, j, p, false);
    } else {
      aj = rng.vec(dim, -5, 5);
      pc = buildEstimatedConstraint(i, j, aj, p);
    }
    // psi0 = h, psi1 = h_dot + g1 h, psi2 = (h_ddot + g1 h_dot) + g2 psi1
    const VecD r = i.p - j.p, v = i.v - j.v;
    const double h = oracle::dot(r, r) - kRs * kRs;
    const double h_dot = 2.0 * oracle::dot(r, v);
    const double h_ddot = 2.0 * oracle::dot(v, v) + 2.0 * oracle::dot(r, ai - aj);
    const double psi2 = h_ddot + p.gamma1 * h_dot + p.gamma2 * (h_dot + p.gamma1 * h);
    if ((psi2 >= 0.0) != (pc.margin(ai) >= 0.0)) ++mismatches;
  }
  report("constraint-recursion", mismatches == 0,
         fmt::format("1000 samples (cooperative, non-adversarial, estimated), {} sign mismatches",
                     mismatches));
}

void auctionFuzz() {
  oracle::Rng rng(1004);
  int uncovered = 0, below_oracle = 0, disjoint = 0, disjoint_gap = 0, cross_checked = 0,
      oracle_disagree = 0;
  for (int n = 0; n < 1000; ++n) {
    const bool pair_disjoint = n % 4 == 0;
    const auto inst = oracle::randomAuction(rng, 20, pair_disjoint);
    const auto g = runAuction(inst.active, inst.bids, inst.caps, inst.forced);
    if (!oracle::coveredWithinCapacity(inst, g)) ++uncovered;
    const double greedy = assignmentCost(g, inst.bids);
    const double best = centralizedAssign(inst.active, inst.bids, inst.caps, inst.forced).total_cost;
    if (!(greedy >= best - 1e-12)) ++below_oracle;
    if (oracle::auctionedPairs(inst) <= 9) {
      ++cross_checked;
      const double brute = oracle::enumerateMinCost(inst.active, inst.bids, inst.caps, inst.forced, 4);
      const bool same = std::isinf(brute) ? std::isinf(best) : std::abs(brute - best) <= 1e-9;
      if (!same) ++oracle_disagree;
    }
    if (pair_disjoint) {
      ++disjoint;
      const bool equal = std::isinf(best) ? std::isinf(greedy) : std::abs(greedy - best) <= 1e-9;
      if (!equal) ++disjoint_gap;
    }
  }
  report("auction-coverage-capacity",
         uncovered == 0 && below_oracle == 0 && disjoint_gap == 0 && oracle_disagree == 0,
         fmt::format("1000 patterns: {} uncovered/over capacity, {} below oracle; {} pair-disjoint "
                     "with {} gaps; oracle vs enumeration on {}: {} disagreements",
                     uncovered, below_oracle, disjoint, disjoint_gap, cross_checked, oracle_disagree));
}

void reduction() {
  bool ok = true;
  std::string detail;
  for (const char* file : {"eight_agents.json", "twenty_agents.json"}) {
    ScenarioConfig cfg = scenario(file);
    cfg.mode = AllocationMode::Auction;
    const RunResult a = run(cfg);
    cfg.mode = AllocationMode::Baseline;
    const RunResult b = run(cfg);
    const double auction = a.metrics.mean_constraints_per_tick;
    const bool good = auction < b.metrics.mean_constraints_per_tick &&
                      auction < a.metrics.mean_both_enforce_per_tick;
    ok = ok && good;
    detail += fmt::format("{}: auction {:.2f} vs baseline run {:.2f}, both-enforce same run {:.2f}; ",
                          cfg.name, auction, b.metrics.mean_constraints_per_tick,
                          a.metrics.mean_both_enforce_per_tick);
  }
  report("constraint-reduction", ok, detail);
}

void zemOracle() {
  oracle::Rng rng(1005);
  double worst = 0.0;
  int count = 0, flagged = 0;
  while (count < 1000) {
    const int dim = count % 2 == 0 ? 2 : 3;
    const VecD r = rng.vecAway(dim, -2, 2, 0.05);
    const VecD v = rng.vecAway(dim, -3, 3, 0.05);
    if (oracle::dot(r, v) >= 0.0) continue;
    const auto z = zem({r, v});
    if (!z.converging) ++flagged;
    worst = std::max(worst, std::abs(z.zem - oracle::sampledMiss(r, v).miss));
    ++count;
  }
  report("zem-oracle", worst <= 1e-6 && flagged == 0,
         fmt::format("1000 converging instances, max err={:.2e}", worst));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / "swarmsafe_acceptance";
  fs::remove_all(base);
  bool ok = true;
  std::string detail;
  for (const char* file : {"three_agents.json", "eight_agents.json"}) {
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
      cli::RunManifest m;
      m.config = kScenarios / file;
      m.out_dir = base / fmt::format("{}_{}", file, k);
      ok = ok && cli::dispatch(m) == cli::kOk;
      outs[k] = slurp(m.out_dir / "summary.csv");
    }
    const bool same = !outs[0].empty() && outs[0] == outs[1];
    ok = ok && same;
    detail += fmt::format("{}: {} bytes {}; ", file, outs[0].size(), same ? "identical" : "differ");
  }
  fs::remove_all(base);
  report("determinism", ok, detail);
}

void feasibility() {
  const ResolvedConfig cfg = loadConfig(kScenarios / "feasibility.json");
  const FeasibilitySpec& fs = cfg.feasibility.value();
  const auto t0 = std::chrono::steady_clock::now();
  const auto m1 = feasibilityMap(fs.gamma1_values, fs.gamma2_values, fs.samples, fs.encounter,
                                 cfg.scenario.seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto m2 = feasibilityMap(fs.gamma1_values, fs.gamma2_values, fs.samples, fs.encounter,
                                 cfg.scenario.seed);
  bool in_range = true, same = m1.cells.size() == m2.cells.size();
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < m1.cells.size(); ++k) {
    const double f = m1.cells[k].feasible_fraction;
    in_range = in_range && f >= 0.0 && f <= 1.0;
    same = same && f == m2.cells[k].feasible_fraction;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  const bool grid = fs.gamma1_values.size() == 10 && fs.gamma2_values.size() == 10 && fs.samples == 200;
  report("feasibility-harness", grid && in_range && same && m1.cells.size() == 100,
         fmt::format("{}x{} grid, {} samples/cell, {:.3f}s, fractions in [{:.3f}, {:.3f}], {}",
                     fs.gamma1_values.size(), fs.gamma2_values.size(), fs.samples, secs, lo, hi,
                     same ? "repeatable" : "NOT repeatable"));
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  safety();
  projection();
  qpCorrectness();
  recursionConsistency();
  auctionFuzz();
  reduction();
  zemOracle();
  determinism();
  feasibility();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
