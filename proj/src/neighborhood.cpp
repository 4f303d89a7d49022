#include "swarmsafe/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarmsafe {

namespace {

constexpr double kMinRelSpeedSq = 1e-12;

const AgentState& findAgent(std::span<const AgentState> all, AgentId id) {
  auto it = std::find_if(all.begin(), all.end(), [id](const AgentState& a) { return a.id == id; });
  if (it == all.end()) throw std::out_of_range("unknown agent id");
  return *it;
}

}  // namespace

void NeighborhoodParams::validate() const {
  if (!(r_crit > 0.0) || !(r_crit <= r_neigh)) {
    throw std::invalid_argument("neighborhood radii must satisfy 0 < r_crit <= r_neigh");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (!(r_comm > 0.0)) throw std::invalid_argument("r_comm must be positive");
}

IdSet geometricNeighbors(const AgentState& self, std::span<const AgentState> all,
                         const NeighborhoodParams& params) {
  IdSet out;
  for (const auto& other : all) {
    if (other.id == self.id) continue;
    if ((self.p - other.p).norm() <= params.r_neigh) out.insert(other.id);
  }
  return out;
}

ZemResult zem(const RelativeState& rel) {
  const double range = rel.r.norm();
  const double speed_sq = rel.v.squaredNorm();
  if (speed_sq < kMinRelSpeedSq) return {0.0, range, false};
  const double t = -rel.r.dot(rel.v) / speed_sq;
  if (!(t > 0.0)) return {0.0, range, false};
  return {t, (rel.r + t * rel.v).norm(), true};
}

bool isActivated(const RelativeState& rel, const NeighborhoodParams& params) {
  return rel.r.norm() <= params.r_crit && zem(rel).zem <= params.eta * params.r_crit;
}

IdSet activeNeighbors(const AgentState& self, const IdSet& geometric,
                      std::span<const AgentState> all, const NeighborhoodParams& params) {
  IdSet out;
  for (AgentId j : geometric) {
    if (isActivated(relative(self, findAgent(all, j)), params)) out.insert(j);
  }
  return out;
}

}  // namespace swarmsafe
