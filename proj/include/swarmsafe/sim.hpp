#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmsafe/auction.hpp"
#include "swarmsafe/guidance.hpp"
#include "swarmsafe/hocbf.hpp"
#include "swarmsafe/neighborhood.hpp"
#include "swarmsafe/qp.hpp"

namespace swarmsafe {

/// How responsibility for active pairs is distributed.
enum class AllocationMode {
  Auction,   ///< greedy auction, one enforcer per pair where possible
  Baseline,  ///< both agents enforce every active pair
};

/// Neighbor model a single (auction-selected) enforcer uses.
enum class SingleEnforcerModel {
  Cooperative,  ///< a_j = -a_i, as for mutual enforcement
  Estimated,    ///< a_j = the neighbor's communicated nominal command
};

const char* toString(AllocationMode m);
const char* toString(SingleEnforcerModel m);

struct AgentSpec {
  AgentId id = 0;
  VecD p0;
  VecD v0;
  VecD target;
};

struct ScenarioConfig {
  std::string name = "scenario";
  int dim = 2;
  std::vector<AgentSpec> agents;
  double dt = 0.01;
  double t_end = 30.0;
  double a_max = 5.0;
  double v_max = 2.0;
  HocbfParams hocbf;
  NeighborhoodParams neighborhood;
  PngParams guidance;
  int capacity = 4;
  double forced_margin = 0.1;
  std::uint64_t seed = 1;
  AllocationMode mode = AllocationMode::Auction;
  SingleEnforcerModel single_enforcer = SingleEnforcerModel::Estimated;
  QpTolerances qp_tol;
  double fallback_violation_weight = 1e6;
  bool compare_with_oracle = true;  ///< run the centralized oracle on small ticks

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Places `count` agents on a circle and sends each to the antipodal point,
 * rotated by `target_offset` [rad]. Initial velocities point at the target
 * with magnitude `speed`. Angular jitter is drawn from `seed`.
 */
std::vector<AgentSpec> circleSwap(int count, int dim, const VecD& center, double radius,
                                  double speed, double angle_jitter, double target_offset,
                                  std::uint64_t seed);

struct AgentRecord {
  AgentId id = 0;
  VecD p;
  VecD v;
  VecD a_nom;
  VecD a_cmd;
  QpStatus qp_status = QpStatus::Optimal;
  bool fallback = false;
  double deviation = 0.0;
  int n_constraints = 0;
  bool captured = false;
};

/// One tick: the snapshot at time t and the commands applied over [t, t + dt].
struct StepRecord {
  double t = 0.0;
  std::vector<AgentRecord> agents;
  std::vector<PairKey> active_pairs;
  std::vector<PairKey> forced_pairs;
  std::vector<Bid> bids;
  std::vector<Edge> edges;
  std::vector<PairKey> dual_pairs;
  std::vector<AuctionDecision> decisions;
  double min_dist = 0.0;
  int total_constraints = 0;     ///< sum_i |A_i^Sigma|
  int both_enforce_count = 0;    ///< constraints if both agents enforced every pair
  int qp_fallbacks = 0;
  double total_deviation = 0.0;
  bool coverage_ok = true;
  std::optional<double> greedy_cost;
  std::optional<double> oracle_cost;
};

struct World {
  double t = 0.0;
  std::size_t tick = 0;  ///< ticks taken; t = tick * dt
  std::vector<AgentState> agents;
  std::vector<bool> captured;
  std::vector<std::optional<double>> capture_time;
};

World makeWorld(const ScenarioConfig& config);

double minPairwiseDistance(const std::vector<AgentState>& agents);

struct TickResult {
  World world;
  StepRecord record;
};

/// Advances every agent one step from the same snapshot.
TickResult tick(const World& world, const ScenarioConfig& config);

struct RunMetrics {
  std::size_t ticks = 0;
  double min_distance = 0.0;
  double final_time = 0.0;
  bool all_captured = false;
  std::vector<std::optional<double>> capture_times;
  long long total_constraints = 0;
  long long total_both_enforce = 0;
  double mean_constraints_per_tick = 0.0;
  double mean_both_enforce_per_tick = 0.0;
  long long qp_fallbacks = 0;
  long long coverage_failures = 0;
  long long dual_pairs = 0;
  double greedy_cost_sum = 0.0;
  double oracle_cost_sum = 0.0;
  std::size_t oracle_ticks = 0;
  double max_greedy_oracle_ratio = 1.0;
};

struct RunResult {
  std::vector<StepRecord> records;
  World final_world;
  RunMetrics metrics;
};

/// Runs until t_end or until every agent has been captured.
RunResult run(const ScenarioConfig& config);

struct EncounterParams {
  int dim = 2;
  double radius = 1.3;      ///< distance at which the intruder is placed [m]
  double speed_max = 4.0;   ///< closing speeds drawn from [0, speed_max] [m/s]
  double a_max = 5.0;
  double r_s = 0.4;
  NeighborModel model = NeighborModel::NonAdversarial;
};

struct FeasibilityCell {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double feasible_fraction = 0.0;
};

struct FeasibilityMap {
  std::vector<double> gamma1_values;
  std::vector<double> gamma2_values;
  std::vector<FeasibilityCell> cells;  ///< gamma1-major order
};

/**
 * Monte Carlo feasibility of the single-pair safety QP over a (gamma1, gamma2)
 * grid. Agent i sits at the origin at rest with zero nominal command; the
 * intruder starts on the encounter circle (sphere in 3D) heading straight at
 * i. Every cell sees the same sampled geometries.
 */
FeasibilityMap feasibilityMap(const std::vector<double>& gamma1_values,
                              const std::vector<double>& gamma2_values, int n_samples,
                              const EncounterParams& encounter, std::uint64_t seed);

}  // namespace swarmsafe
