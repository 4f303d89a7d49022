#pragma once

#include <set>
#include <span>

#include "swarmsafe/dynamics.hpp"

namespace swarmsafe {

struct NeighborhoodParams {
  double r_neigh = 1.6;  ///< geometric neighborhood radius [m]
  double r_crit = 1.3;   ///< critical activation radius [m], 0 < r_crit <= r_neigh
  double eta = 0.9;      ///< ZEM activation fraction, in (0, 1)
  double r_comm = 1.6;   ///< communication radius [m]

  /// Throws std::invalid_argument when the radii or eta are out of range.
  void validate() const;
};

struct ZemResult {
  double t_zem = 0.0;  ///< time of closest approach [s]
  double zem = 0.0;    ///< predicted minimum separation [m]
  bool converging = false;
};

using IdSet = std::set<AgentId>;

/// Ids within r_neigh of `self` (boundary inclusive), excluding `self`.
IdSet geometricNeighbors(const AgentState& self, std::span<const AgentState> all,
                         const NeighborhoodParams& params);

/// Zero-effort miss under constant relative velocity.
ZemResult zem(const RelativeState& rel);

/// Both activation predicates for one ordered pair.
bool isActivated(const RelativeState& rel, const NeighborhoodParams& params);

/// Event-triggered subset of `geometric` satisfying proximity and ZEM predicates.
IdSet activeNeighbors(const AgentState& self, const IdSet& geometric,
                      std::span<const AgentState> all, const NeighborhoodParams& params);

}  // namespace swarmsafe
