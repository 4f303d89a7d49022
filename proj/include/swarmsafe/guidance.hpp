#pragma once

#include "swarmsafe/dynamics.hpp"

namespace swarmsafe {

struct PngParams {
  double nav_constant = 3.0;
  double epsilon_range = 1e-3;   ///< LOS range floor [m]
  double capture_radius = 0.05;  ///< target considered reached [m]
  double damping = 2.0;          ///< post-capture velocity damping gain [1/s]
};

struct GuidanceCommand {
  VecD accel;
  bool at_target = false;  ///< range below epsilon_range; accel is zero
};

/**
 * Pure proportional navigation law N * |v_rel| * (lambda_dot x los_hat) with
 * lambda_dot = (los x v_rel) / |los|^2.
 *
 * `los` points from the pursuer to the target and `v_rel` is the target's
 * velocity relative to the pursuer. Returns a 3D vector; 2D inputs are
 * zero-padded.
 */
VecD pngLaw(const VecD& los, const VecD& v_rel, double nav_constant);

/// Nominal PNG acceleration of an agent towards its static target, in the agent's dimension.
GuidanceCommand pngAccel(const AgentState& agent, const PngParams& params);

bool isCaptured(const AgentState& agent, const PngParams& params);

/// Nominal command for an agent that already reached its target.
VecD holdCommand(const AgentState& agent, const PngParams& params);

}  // namespace swarmsafe
