#include "swarmsafe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace swarmsafe {

const char* toString(AllocationMode m) {
  return m == AllocationMode::Auction ? "auction" : "baseline";
}

const char* toString(SingleEnforcerModel m) {
  return m == SingleEnforcerModel::Cooperative ? "cooperative" : "estimated";
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (dim != 2 && dim != 3) fail(fmt::format("dim must be 2 or 3, got {}", dim));
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(t_end >= 0.0)) fail("t_end must be non-negative");
  if (!(a_max > 0.0) || !(v_max > 0.0)) fail("a_max and v_max must be positive");
  if (capacity < 1) fail("capacity must be at least 1");
  if (!(forced_margin >= 0.0)) fail("forced_margin must be non-negative");
  if (!(guidance.nav_constant > 0.0)) fail("nav_constant must be positive");
  if (!(guidance.epsilon_range > 0.0)) fail("epsilon_range must be positive");
  try {
    hocbf.validate();
    neighborhood.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (agents.empty()) fail("scenario has no agents");

  std::set<AgentId> ids;
  for (const auto& a : agents) {
    if (!ids.insert(a.id).second) fail(fmt::format("duplicate agent id {}", a.id));
    if (a.p0.dim() != dim || a.v0.dim() != dim || a.target.dim() != dim) {
      fail(fmt::format("agent {}: vectors must have dimension {}", a.id, dim));
    }
    if (!a.p0.allFinite() || !a.v0.allFinite() || !a.target.allFinite()) {
      fail(fmt::format("agent {}: non-finite initial state", a.id));
    }
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      const double d = (agents[i].p0 - agents[j].p0).norm();
      if (!(d > hocbf.r_s)) {
        fail(fmt::format("agents {} and {} start {:.4f} m apart, inside r_s={}", agents[i].id,
                         agents[j].id, d, hocbf.r_s));
      }
    }
  }
}

std::vector<AgentSpec> circleSwap(int count, int dim, const VecD& center, double radius,
                                  double speed, double angle_jitter, double target_offset,
                                  std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("circle_swap needs at least one agent");
  if (center.dim() != dim) throw DimensionError("circle_swap center dimension mismatch");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-angle_jitter, angle_jitter);

  std::vector<AgentSpec> out;
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count + (angle_jitter > 0 ? jitter(rng) : 0.0);
    const double phi = theta + std::numbers::pi + target_offset;
    VecD start(dim);
    VecD goal(dim);
    start[0] = radius * std::cos(theta);
    start[1] = radius * std::sin(theta);
    goal[0] = radius * std::cos(phi);
    goal[1] = radius * std::sin(phi);
    AgentSpec spec{k, center + start, VecD(dim), center + goal};
    const VecD dir = spec.target - spec.p0;
    if (dir.norm() > 0.0) spec.v0 = (speed / dir.norm()) * dir;
    out.push_back(spec);
  }
  return out;
}

World makeWorld(const ScenarioConfig& config) {
  World w;
  for (const auto& spec : config.agents) {
    AgentState s{spec.id, spec.p0, spec.v0, spec.target, config.a_max, config.v_max};
    validate(s);
    w.agents.push_back(s);
  }
  std::sort(w.agents.begin(), w.agents.end(),
            [](const AgentState& a, const AgentState& b) { return a.id < b.id; });
  w.captured.assign(w.agents.size(), false);
  w.capture_time.assign(w.agents.size(), std::nullopt);
  return w;
}

double minPairwiseDistance(const std::vector<AgentState>& agents) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      best = std::min(best, (agents[i].p - agents[j].p).norm());
    }
  }
  return best;
}

namespace {

struct PairInfo {
  double dist = 0.0;
  bool comm = false;
};

}  // namespace

TickResult tick(const World& world, const ScenarioConfig& config) {
  const auto& agents = world.agents;
  const std::size_t n = agents.size();
  std::map<AgentId, std::size_t> index;
  for (std::size_t k = 0; k < n; ++k) index[agents[k].id] = k;

  World next = world;
  StepRecord rec;
  rec.t = world.t;
  rec.min_dist = minPairwiseDistance(agents);

  // Nominal guidance; capture latches.
  std::vector<VecD> a_nom(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!next.captured[k] && isCaptured(agents[k], config.guidance)) {
      next.captured[k] = true;
      next.capture_time[k] = world.t;
    }
    a_nom[k] = next.captured[k] ? holdCommand(agents[k], config.guidance)
                                : pngAccel(agents[k], config.guidance).accel;
  }

  // Neighborhoods and event-triggered activation.
  std::set<PairKey> active;
  std::set<PairKey> forced;
  std::map<PairKey, PairInfo> info;
  const double forced_radius = config.hocbf.r_s + config.forced_margin;
  for (const auto& self : agents) {
    const IdSet geometric = geometricNeighbors(self, agents, config.neighborhood);
    const IdSet act = activeNeighbors(self, geometric, agents, config.neighborhood);
    for (AgentId j : geometric) {
      const PairKey key = PairKey::of(self.id, j);
      if (info.contains(key)) continue;
      const double d = (self.p - agents[index[j]].p).norm();
      info[key] = {d, d <= config.neighborhood.r_comm};
      if (d <= forced_radius) forced.insert(key);
    }
    for (AgentId j : act) active.insert(PairKey::of(self.id, j));
  }

  auto singleEnforcerConstraint = [&](std::size_t i, std::size_t j) {
    if (config.single_enforcer == SingleEnforcerModel::Estimated) {
      return buildEstimatedConstraint(agents[i], agents[j], a_nom[j], config.hocbf);
    }
    return buildConstraint(agents[i], agents[j], config.hocbf, true);
  };

  // Bids for every communicating active pair outside the forced zone.
  BidBook book;
  if (config.mode == AllocationMode::Auction) {
    for (const auto& pair : active) {
      if (forced.contains(pair) || !info[pair].comm) continue;
      const std::size_t lo = index[pair.lo];
      const std::size_t hi = index[pair.hi];
      PairBids pb;
      pb.lo = computeBid(a_nom[lo], singleEnforcerConstraint(lo, hi), config.a_max);
      pb.hi = computeBid(a_nom[hi], singleEnforcerConstraint(hi, lo), config.a_max);
      rec.bids.push_back(*pb.lo);
      rec.bids.push_back(*pb.hi);
      book[pair] = pb;
    }
  }

  ResponsibilityGraph graph;
  if (config.mode == AllocationMode::Auction) {
    graph = runAuction(active, book, {}, forced, config.capacity);
    if (config.compare_with_oracle) {
      std::size_t assignable = 0;
      for (const auto& [pair, pb] : book) assignable += pb.complete() ? 1 : 0;
      if (assignable > 0 && assignable <= kMaxOraclePairs) {
        rec.greedy_cost = assignmentCost(graph, book);
        rec.oracle_cost = centralizedAssign(active, book, {}, forced, config.capacity).total_cost;
      }
    }
  } else {
    for (const auto& pair : active) {
      graph.forced.insert({pair.lo, pair.hi});
      graph.forced.insert({pair.hi, pair.lo});
    }
    for (const auto& pair : forced) {
      graph.forced.insert({pair.lo, pair.hi});
      graph.forced.insert({pair.hi, pair.lo});
    }
  }

  // Per-agent safety filter over A_i^Sigma.
  std::vector<IdSet> enforced(n);
  for (std::size_t k = 0; k < n; ++k) {
    const AgentState& self = agents[k];
    enforced[k] = finalConstraintSet(self.id, graph);

    QpProblem problem = QpProblem::withSymmetricBox(a_nom[k], config.a_max);
    for (AgentId j : enforced[k]) {
      const PairKey key = PairKey::of(self.id, j);
      const std::size_t jk = index[j];
      const bool mutual = config.mode == AllocationMode::Baseline || forced.contains(key) ||
                          graph.dual_enforced.contains(key) || !info[key].comm;
      try {
        const PairConstraint pc = mutual
                                      ? buildConstraint(self, agents[jk], config.hocbf, info[key].comm)
                                      : singleEnforcerConstraint(k, jk);
        problem.halfspaces.push_back({pc.normal, pc.rhs});
      } catch (const std::invalid_argument& e) {
        spdlog::warn("t={:.3f}: skipping constraint {}->{}: {}", world.t, self.id, j, e.what());
      }
    }

    AgentRecord ar;
    ar.id = self.id;
    ar.p = self.p;
    ar.v = self.v;
    ar.a_nom = a_nom[k];
    ar.n_constraints = static_cast<int>(enforced[k].size());
    ar.captured = next.captured[k];

    const QpSolution sol = solve(problem, config.qp_tol);
    ar.qp_status = sol.status;
    if (sol.status == QpStatus::Optimal) {
      ar.a_cmd = sol.a_star;
    } else {
      const MinMaxResult relaxed = solveMinMaxViolation(problem, config.fallback_violation_weight,
                                                        config.qp_tol);
      ar.a_cmd = relaxed.a;
      ar.fallback = true;
      ++rec.qp_fallbacks;
      spdlog::warn("t={:.3f}: agent {} safety QP infeasible ({} constraints), relaxed violation {:.3g}",
                   world.t, self.id, problem.halfspaces.size(), relaxed.max_violation);
    }
    ar.deviation = (ar.a_cmd - a_nom[k]).squaredNorm();
    rec.total_deviation += ar.deviation;
    rec.total_constraints += ar.n_constraints;
    rec.agents.push_back(ar);
  }

  // Coverage, re-derived from the per-agent sets rather than from the graph.
  for (const auto& pair : active) {
    const bool covered = enforced[index[pair.lo]].contains(pair.hi) ||
                         enforced[index[pair.hi]].contains(pair.lo);
    if (!covered) {
      rec.coverage_ok = false;
      spdlog::error("t={:.3f}: active pair ({}, {}) has no enforcer", world.t, pair.lo, pair.hi);
    }
  }
  std::set<PairKey> relevant = active;
  relevant.insert(forced.begin(), forced.end());
  rec.both_enforce_count = 2 * static_cast<int>(relevant.size());

  for (std::size_t k = 0; k < n; ++k) {
    next.agents[k] = integrate(agents[k], rec.agents[k].a_cmd, config.dt).state;
  }
  next.tick = world.tick + 1;
  next.t = static_cast<double>(next.tick) * config.dt;

  rec.active_pairs.assign(active.begin(), active.end());
  rec.forced_pairs.assign(forced.begin(), forced.end());
  rec.edges.assign(graph.edges.begin(), graph.edges.end());
  rec.dual_pairs.assign(graph.dual_enforced.begin(), graph.dual_enforced.end());
  rec.decisions = graph.trace;
  return {std::move(next), std::move(rec)};
}

RunResult run(const ScenarioConfig& config) {
  config.validate();
  RunResult result;
  World world = makeWorld(config);

  const auto n_ticks = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
  double min_dist = world.agents.size() > 1 ? minPairwiseDistance(world.agents)
                                            : std::numeric_limits<double>::infinity();
  RunMetrics& m = result.metrics;
  for (std::size_t k = 0; k < n_ticks; ++k) {
    if (std::all_of(world.captured.begin(), world.captured.end(), [](bool c) { return c; })) break;
    TickResult tr = tick(world, config);
    world = std::move(tr.world);
    const StepRecord& rec = tr.record;
    if (world.agents.size() > 1) min_dist = std::min(min_dist, minPairwiseDistance(world.agents));

    m.total_constraints += rec.total_constraints;
    m.total_both_enforce += rec.both_enforce_count;
    m.qp_fallbacks += rec.qp_fallbacks;
    m.coverage_failures += rec.coverage_ok ? 0 : 1;
    m.dual_pairs += static_cast<long long>(rec.dual_pairs.size());
    if (rec.greedy_cost && rec.oracle_cost) {
      ++m.oracle_ticks;
      m.greedy_cost_sum += *rec.greedy_cost;
      m.oracle_cost_sum += *rec.oracle_cost;
      if (*rec.oracle_cost > 0.0 && std::isfinite(*rec.oracle_cost)) {
        m.max_greedy_oracle_ratio =
            std::max(m.max_greedy_oracle_ratio, *rec.greedy_cost / *rec.oracle_cost);
      }
    }
    result.records.push_back(std::move(tr.record));
  }

  if (min_dist < config.hocbf.r_s) {
    spdlog::warn("{}: minimum separation {:.6f} m below r_s={} m", config.name, min_dist,
                 config.hocbf.r_s);
  }
  m.ticks = result.records.size();
  m.min_distance = min_dist;
  m.final_time = world.t;
  m.capture_times = world.capture_time;
  m.all_captured = std::all_of(world.captured.begin(), world.captured.end(), [](bool c) { return c; });
  if (m.ticks > 0) {
    m.mean_constraints_per_tick = static_cast<double>(m.total_constraints) / m.ticks;
    m.mean_both_enforce_per_tick = static_cast<double>(m.total_both_enforce) / m.ticks;
  }
  result.final_world = std::move(world);
  return result;
}

FeasibilityMap feasibilityMap(const std::vector<double>& gamma1_values,
                              const std::vector<double>& gamma2_values, int n_samples,
                              const EncounterParams& encounter, std::uint64_t seed) {
  if (gamma1_values.empty() || gamma2_values.empty()) {
    throw std::invalid_argument("feasibility grid must be non-empty");
  }
  if (n_samples < 1) throw std::invalid_argument("feasibility map needs at least one sample");
  if (encounter.dim != 2 && encounter.dim != 3) throw DimensionError("encounter dim must be 2 or 3");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Sample {
    AgentState i;
    AgentState j;
  };
  std::vector<Sample> samples;
  for (int s = 0; s < n_samples; ++s) {
    VecD dir(encounter.dim);
    do {
      for (int k = 0; k < encounter.dim; ++k) dir[k] = gauss(rng);
    } while (dir.norm() < 1e-9);
    dir = dir / dir.norm();
    const double speed = encounter.speed_max * unit(rng);
    const VecD zero(encounter.dim);
    AgentState i{0, zero, zero, zero, encounter.a_max, 1.0};
    AgentState j{1, encounter.radius * dir, -speed * dir, zero, encounter.a_max, 1.0};
    samples.push_back({i, j});
  }

  FeasibilityMap map{gamma1_values, gamma2_values, {}};
  const bool comm = encounter.model == NeighborModel::Cooperative;
  for (double g1 : gamma1_values) {
    for (double g2 : gamma2_values) {
      const HocbfParams params{g1, g2, encounter.r_s};
      params.validate();
      int feasible = 0;
      for (const auto& s : samples) {
        const PairConstraint pc = buildConstraint(s.i, s.j, params, comm);
        QpProblem problem = QpProblem::withSymmetricBox(VecD(encounter.dim), encounter.a_max);
        problem.halfspaces.push_back({pc.normal, pc.rhs});
        if (solve(problem).status == QpStatus::Optimal) ++feasible;
      }
      map.cells.push_back({g1, g2, static_cast<double>(feasible) / n_samples});
    }
  }
  return map;
}

}  // namespace swarmsafe
