#include "swarmsafe/auction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "swarmsafe/qp.hpp"

namespace swarmsafe {

PairKey PairKey::of(AgentId a, AgentId b) {
  if (a == b) throw std::invalid_argument("pair needs two distinct agents");
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

double PairBids::costOf(AgentId k) const {
  const auto& side = (lo && lo->bidder == k) ? lo : hi;
  if (!side || side->bidder != k) throw std::out_of_range(fmt::format("no bid from agent {}", k));
  return side->cost;
}

const char* toString(AuctionOutcome o) {
  switch (o) {
    case AuctionOutcome::Won: return "won";
    case AuctionOutcome::CapacityFallback: return "capacity_fallback";
    case AuctionOutcome::DualInfeasible: return "dual_infeasible";
    case AuctionOutcome::DualCapacity: return "dual_capacity";
    case AuctionOutcome::DualNoComm: return "dual_no_comm";
    case AuctionOutcome::Forced: return "forced";
  }
  return "?";
}

bool ResponsibilityGraph::covers(const PairKey& pair) const {
  const Edge a{pair.lo, pair.hi};
  const Edge b{pair.hi, pair.lo};
  return edges.contains(a) || edges.contains(b) || forced.contains(a) || forced.contains(b);
}

int ResponsibilityGraph::wonCount(AgentId k) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) {
    return e.from == k && !forced.contains(e);
  }));
}

std::set<Edge> ResponsibilityGraph::enforcing() const {
  std::set<Edge> all = edges;
  all.insert(forced.begin(), forced.end());
  return all;
}

int capacityOf(const CapacityMap& caps, AgentId k, int fallback) {
  auto it = caps.find(k);
  return it == caps.end() ? fallback : it->second;
}

Bid computeBid(const VecD& a_nom_i, const PairConstraint& constraint, double a_max) {
  const Projection proj = projectSingle(a_nom_i, constraint.normal, constraint.rhs);
  Bid bid{PairKey::of(constraint.i, constraint.j), constraint.i, proj.cost};
  if (proj.a_star.maxAbs() > a_max) bid.cost = kInfiniteBid;
  return bid;
}

namespace {

void addBoth(std::set<Edge>& set, const PairKey& pair) {
  set.insert({pair.lo, pair.hi});
  set.insert({pair.hi, pair.lo});
}

}  // namespace

ResponsibilityGraph runAuction(const std::set<PairKey>& active_pairs, const BidBook& bids,
                               const CapacityMap& capacities, const std::set<PairKey>& forced_pairs,
                               int default_capacity) {
  ResponsibilityGraph g;
  auto capacity = [&](AgentId k) {
    auto it = g.capacity.find(k);
    if (it == g.capacity.end()) it = g.capacity.emplace(k, capacityOf(capacities, k, default_capacity)).first;
    return it->second;
  };

  for (const auto& pair : forced_pairs) {
    capacity(pair.lo);
    capacity(pair.hi);
    addBoth(g.forced, pair);
    g.trace.push_back({pair, AuctionOutcome::Forced, std::nullopt});
  }

  struct Pending {
    double min_bid;
    PairKey pair;
    const PairBids* bids;
  };
  std::vector<Pending> queue;
  for (const auto& pair : active_pairs) {
    if (forced_pairs.contains(pair)) continue;
    capacity(pair.lo);
    capacity(pair.hi);
    auto it = bids.find(pair);
    if (it == bids.end() || !it->second.complete()) {
      addBoth(g.forced, pair);
      g.dual_enforced.insert(pair);
      g.trace.push_back({pair, AuctionOutcome::DualNoComm, std::nullopt});
      continue;
    }
    const PairBids& pb = it->second;
    queue.push_back({std::min(pb.costOf(pair.lo), pb.costOf(pair.hi)), pair, &pb});
  }
  std::sort(queue.begin(), queue.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.min_bid, a.pair) < std::tie(b.min_bid, b.pair);
  });

  std::map<AgentId, int> won;
  for (const auto& item : queue) {
    const PairKey& pair = item.pair;
    const double j_lo = item.bids->costOf(pair.lo);
    const double j_hi = item.bids->costOf(pair.hi);
    const AgentId first = (j_hi < j_lo) ? pair.hi : pair.lo;
    const AgentId second = pair.other(first);

    auto canTake = [&](AgentId k) {
      return std::isfinite(item.bids->costOf(k)) && won[k] < capacity(k);
    };
    std::optional<AgentId> enforcer;
    AuctionOutcome outcome = AuctionOutcome::Won;
    if (canTake(first)) {
      enforcer = first;
    } else if (canTake(second)) {
      enforcer = second;
      outcome = AuctionOutcome::CapacityFallback;
    } else {
      outcome = std::isfinite(j_lo) || std::isfinite(j_hi) ? AuctionOutcome::DualCapacity
                                                           : AuctionOutcome::DualInfeasible;
    }

    if (enforcer) {
      ++won[*enforcer];
      g.edges.insert({*enforcer, pair.other(*enforcer)});
    } else {
      addBoth(g.forced, pair);
      g.dual_enforced.insert(pair);
    }
    g.trace.push_back({pair, outcome, enforcer});
  }
  return g;
}

double assignmentCost(const ResponsibilityGraph& graph, const BidBook& bids) {
  double total = 0.0;
  for (const auto& e : graph.edges) {
    total += bids.at(PairKey::of(e.from, e.to)).costOf(e.from);
  }
  for (const auto& pair : graph.dual_enforced) {
    auto it = bids.find(pair);
    if (it == bids.end() || !it->second.complete()) continue;
    total += it->second.costOf(pair.lo) + it->second.costOf(pair.hi);
  }
  return total;
}

namespace {

struct OracleItem {
  PairKey pair;
  double cost_lo;
  double cost_hi;
};

class BranchAndBound {
 public:
  BranchAndBound(std::vector<OracleItem> items, std::map<AgentId, int> caps)
      : items_(std::move(items)), remaining_caps_(std::move(caps)), current_(items_.size()) {
    suffix_bound_.assign(items_.size() + 1, 0.0);
    for (std::size_t k = items_.size(); k-- > 0;) {
      suffix_bound_[k] = suffix_bound_[k + 1] + std::min(items_[k].cost_lo, items_[k].cost_hi);
    }
  }

  CentralAssignment run() {
    recurse(0, 0.0);
    CentralAssignment out;
    out.total_cost = best_cost_;
    for (std::size_t k = 0; k < items_.size(); ++k) out.choice[items_[k].pair] = best_[k];
    return out;
  }

 private:
  void recurse(std::size_t k, double cost) {
    const double bound = cost + suffix_bound_[k];
    if (found_ && !(bound < best_cost_)) return;
    if (k == items_.size()) {
      best_cost_ = cost;
      best_ = current_;
      found_ = true;
      return;
    }
    const OracleItem& it = items_[k];
    const bool lo_first = it.cost_lo <= it.cost_hi;
    const Direction order[2] = {lo_first ? Direction::LoToHi : Direction::HiToLo,
                                lo_first ? Direction::HiToLo : Direction::LoToHi};
    for (Direction d : order) {
      const AgentId who = d == Direction::LoToHi ? it.pair.lo : it.pair.hi;
      int& cap = remaining_caps_[who];
      if (cap <= 0) continue;
      --cap;
      current_[k] = d;
      recurse(k + 1, cost + (d == Direction::LoToHi ? it.cost_lo : it.cost_hi));
      ++cap;
    }
    current_[k] = Direction::Both;
    recurse(k + 1, cost + it.cost_lo + it.cost_hi);
  }

  std::vector<OracleItem> items_;
  std::map<AgentId, int> remaining_caps_;
  std::vector<Direction> current_;
  std::vector<Direction> best_;
  std::vector<double> suffix_bound_;
  double best_cost_ = kInfiniteBid;
  bool found_ = false;
};

}  // namespace

CentralAssignment centralizedAssign(const std::set<PairKey>& active_pairs, const BidBook& bids,
                                    const CapacityMap& capacities,
                                    const std::set<PairKey>& forced_pairs, int default_capacity) {
  std::vector<OracleItem> items;
  std::map<AgentId, int> caps;
  for (const auto& pair : active_pairs) {
    if (forced_pairs.contains(pair)) continue;
    auto it = bids.find(pair);
    if (it == bids.end() || !it->second.complete()) continue;
    items.push_back({pair, it->second.costOf(pair.lo), it->second.costOf(pair.hi)});
    caps.emplace(pair.lo, capacityOf(capacities, pair.lo, default_capacity));
    caps.emplace(pair.hi, capacityOf(capacities, pair.hi, default_capacity));
  }
  if (items.size() > kMaxOraclePairs) {
    throw std::length_error(
        fmt::format("oracle limited to {} pairs, got {}", kMaxOraclePairs, items.size()));
  }
  return BranchAndBound(std::move(items), std::move(caps)).run();
}

IdSet finalConstraintSet(AgentId i, const ResponsibilityGraph& graph, const IdSet& extra_forced) {
  IdSet out = extra_forced;
  for (const auto& e : graph.edges) {
    if (e.from == i) out.insert(e.to);
  }
  for (const auto& e : graph.forced) {
    if (e.from == i) out.insert(e.to);
  }
  return out;
}

}  // namespace swarmsafe
