#include "swarmsafe/guidance.hpp"

#include <stdexcept>

namespace swarmsafe {

VecD pngLaw(const VecD& los, const VecD& v_rel, double nav_constant) {
  if (!(nav_constant > 0.0)) throw std::invalid_argument("navigation constant must be positive");
  const double range_sq = los.squaredNorm();
  if (range_sq == 0.0) return VecD::zero(3);
  const VecD lambda_dot = crossPlanar(los, v_rel) / range_sq;
  const VecD los_hat = los.padded3() / std::sqrt(range_sq);
  return nav_constant * v_rel.norm() * crossPlanar(lambda_dot, los_hat);
}

GuidanceCommand pngAccel(const AgentState& agent, const PngParams& params) {
  // Static target: LOS runs agent -> target and the target's relative velocity is -v.
  const VecD los = agent.target - agent.p;
  if (los.norm() < params.epsilon_range) {
    return {VecD::zero(agent.dim()), true};
  }
  const VecD v_rel = -agent.v;
  return {pngLaw(los, v_rel, params.nav_constant).truncated(agent.dim()), false};
}

bool isCaptured(const AgentState& agent, const PngParams& params) {
  return (agent.target - agent.p).norm() <= params.capture_radius;
}

VecD holdCommand(const AgentState& agent, const PngParams& params) {
  return -params.damping * agent.v;
}

}  // namespace swarmsafe
