#include "swarmsafe/dynamics.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace swarmsafe {

void validate(const AgentState& s) {
  requireSameDim(s.p, s.v);
  requireSameDim(s.p, s.target);
  if (!(s.a_max > 0.0) || !(s.v_max > 0.0)) {
    throw std::invalid_argument(fmt::format("agent {}: a_max and v_max must be positive", s.id));
  }
  if (!s.p.allFinite() || !s.v.allFinite() || !s.target.allFinite()) {
    throw std::invalid_argument(fmt::format("agent {}: non-finite state", s.id));
  }
}

RelativeState relative(const AgentState& i, const AgentState& j) {
  return {i.p - j.p, i.v - j.v};
}

StepResult integrate(const AgentState& state, const VecD& a_cmd, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument(fmt::format("time step must be positive, got {}", dt));
  }
  if (!a_cmd.allFinite() || !state.p.allFinite() || !state.v.allFinite()) {
    throw std::invalid_argument(fmt::format("agent {}: non-finite input to integrate", state.id));
  }
  if (!(state.a_max > 0.0) || !(state.v_max > 0.0)) {
    throw std::invalid_argument(fmt::format("agent {}: a_max and v_max must be positive", state.id));
  }
  requireSameDim(state.v, a_cmd);

  StepResult out{state, clampNorm(a_cmd, state.a_max), false};
  VecD v_next = state.v + dt * out.applied_accel;
  if (v_next.norm() > state.v_max) {
    v_next = clampNorm(v_next, state.v_max);
    out.velocity_clamped = true;
    spdlog::debug("agent {}: speed clamped to v_max={}", state.id, state.v_max);
  }
  out.state.v = v_next;
  out.state.p = state.p + dt * v_next;
  return out;
}

AgentState step(const AgentState& state, const VecD& a_cmd, double dt) {
  return integrate(state, a_cmd, dt).state;
}

}  // namespace swarmsafe
