#pragma once

#include "swarmsafe/geometry.hpp"

namespace swarmsafe {

using AgentId = int;

/// Double-integrator agent with a fixed goal and norm bounds on input and speed.
struct AgentState {
  AgentId id = 0;
  VecD p;
  VecD v;
  VecD target;
  double a_max = 5.0;
  double v_max = 2.0;

  int dim() const { return p.dim(); }
};

struct RelativeState {
  VecD r;  ///< p_i - p_j
  VecD v;  ///< v_i - v_j
};

/// Throws std::invalid_argument on non-positive limits, mixed dims or non-finite values.
void validate(const AgentState& s);

RelativeState relative(const AgentState& i, const AgentState& j);

/// Result of one integration step. `velocity_clamped` is set when the speed bound was active.
struct StepResult {
  AgentState state;
  VecD applied_accel;
  bool velocity_clamped = false;
};

/**
 * Semi-implicit Euler step: v' = v + dt*sat(a), p' = p + dt*v'.
 *
 * The command is radially clamped to a_max, then the new velocity radially
 * clamped to v_max.
 */
StepResult integrate(const AgentState& state, const VecD& a_cmd, double dt);

/// Convenience wrapper around integrate() returning only the new state.
AgentState step(const AgentState& state, const VecD& a_cmd, double dt);

}  // namespace swarmsafe
