#pragma once

#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "swarmsafe/hocbf.hpp"
#include "swarmsafe/neighborhood.hpp"

namespace swarmsafe {

inline constexpr double kInfiniteBid = std::numeric_limits<double>::infinity();

/// Unordered agent pair, stored with lo < hi.
struct PairKey {
  AgentId lo = 0;
  AgentId hi = 0;

  static PairKey of(AgentId a, AgentId b);
  AgentId other(AgentId k) const { return k == lo ? hi : lo; }
  auto operator<=>(const PairKey&) const = default;
};

/// Directed responsibility edge: `from` enforces the constraint with `to`.
struct Edge {
  AgentId from = 0;
  AgentId to = 0;
  auto operator<=>(const Edge&) const = default;
};

struct Bid {
  PairKey pair;
  AgentId bidder = 0;
  double cost = 0.0;  ///< projection deviation, or +inf when the projection leaves the input box
};

/// The two bids for one pair. A missing side means no communication link.
struct PairBids {
  std::optional<Bid> lo;
  std::optional<Bid> hi;

  bool complete() const { return lo.has_value() && hi.has_value(); }
  double costOf(AgentId k) const;
};

using BidBook = std::map<PairKey, PairBids>;

enum class AuctionOutcome {
  Won,               ///< argmin bidder had spare capacity
  CapacityFallback,  ///< argmin bidder was full, the other bidder took it
  DualInfeasible,    ///< both bids infinite
  DualCapacity,      ///< no finite bidder with spare capacity
  DualNoComm,        ///< no bid exchange possible
  Forced,            ///< forced-zone pair, both enforce
};

const char* toString(AuctionOutcome o);

struct AuctionDecision {
  PairKey pair;
  AuctionOutcome outcome = AuctionOutcome::Won;
  std::optional<AgentId> enforcer;  ///< set for single-enforcer outcomes
};

/**
 * Output of one auction round.
 *
 * `edges` holds auction-won edges only and is the set bounded by capacity.
 * `forced` holds unconditional edges: forced-zone pairs and every pair that
 * fell back to dual enforcement (both directions). `dual_enforced` lists the
 * fallback pairs.
 */
struct ResponsibilityGraph {
  std::set<Edge> edges;
  std::map<AgentId, int> capacity;
  std::set<Edge> forced;
  std::set<PairKey> dual_enforced;
  std::vector<AuctionDecision> trace;

  bool covers(const PairKey& pair) const;
  int wonCount(AgentId k) const;
  /// Every directed edge that leads to an enforced constraint.
  std::set<Edge> enforcing() const;
};

using CapacityMap = std::map<AgentId, int>;

/// Capacity lookup with a default for agents missing from the map.
int capacityOf(const CapacityMap& caps, AgentId k, int fallback);

/// Bid of agent `constraint.i` for its pair: the single-constraint projection cost.
Bid computeBid(const VecD& a_nom_i, const PairConstraint& constraint, double a_max);

/**
 * Greedy auction. Pairs are processed by ascending minimum bid, ties broken by
 * (lo, hi); equal bids go to the lower id. A pair goes to the cheaper bidder
 * with spare capacity, else to the other finite bidder with spare capacity,
 * else to both agents.
 */
ResponsibilityGraph runAuction(const std::set<PairKey>& active_pairs, const BidBook& bids,
                               const CapacityMap& capacities, const std::set<PairKey>& forced_pairs,
                               int default_capacity = 4);

/// Sum of bids over auction-won edges plus both bids of dual pairs. Forced-zone
/// and no-communication pairs carry no cost.
double assignmentCost(const ResponsibilityGraph& graph, const BidBook& bids);

enum class Direction { LoToHi, HiToLo, Both };

struct CentralAssignment {
  std::map<PairKey, Direction> choice;
  double total_cost = 0.0;
};

inline constexpr std::size_t kMaxOraclePairs = 20;

/**
 * Exhaustive minimum-cost covering assignment over the pairs that have both
 * bids and are not forced. Single directions consume capacity; Both does not
 * and costs both bids. Branch-and-bound over 3^pairs; throws
 * std::length_error above kMaxOraclePairs.
 */
CentralAssignment centralizedAssign(const std::set<PairKey>& active_pairs, const BidBook& bids,
                                    const CapacityMap& capacities,
                                    const std::set<PairKey>& forced_pairs = {},
                                    int default_capacity = 4);

/// {j : (i -> j) in edges or forced} united with `extra_forced`.
IdSet finalConstraintSet(AgentId i, const ResponsibilityGraph& graph,
                         const IdSet& extra_forced = {});

}  // namespace swarmsafe
