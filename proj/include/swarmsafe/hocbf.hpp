#pragma once

#include "swarmsafe/dynamics.hpp"

namespace swarmsafe {

struct HocbfParams {
  double gamma1 = 3.0;  ///< first class-K gain [1/s]
  double gamma2 = 3.0;  ///< second class-K gain [1/s]
  double r_s = 0.4;     ///< minimum center-to-center separation [m]

  void validate() const;
};

/// Assumption about the neighbor's acceleration a_j when agent i builds its constraint.
enum class NeighborModel {
  Cooperative,     ///< a_j = -a_i (communication available, both avoid)
  NonAdversarial,  ///< a_j = 0 (no communication)
  Estimated,       ///< a_j = a communicated estimate (single-enforcer pairs)
};

const char* toString(NeighborModel m);

/**
 * One pairwise HOCBF constraint seen from agent i, reduced to a single
 * halfspace normal' * a_i >= rhs.
 */
struct PairConstraint {
  AgentId i = 0;
  AgentId j = 0;
  VecD r_ij;
  VecD normal;
  double c_ij = 0.0;
  double rhs = 0.0;
  NeighborModel model = NeighborModel::NonAdversarial;

  /// normal' * a - rhs; non-negative means the constraint holds.
  double margin(const VecD& a_i) const { return normal.dot(a_i) - rhs; }
};

struct PsiValues {
  double psi0 = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
};

/// h_ij = |r_ij|^2 - r_s^2
double barrier(const RelativeState& rel, const HocbfParams& params);

/**
 * Right-hand side c_ij of (2 r_ij)'(a_i - a_j) >= c_ij.
 *
 * Expanded from psi2 = psi1_dot + gamma2 * psi1, which puts gamma1 * gamma2 on
 * the barrier term.
 */
double cOffset(const RelativeState& rel, const HocbfParams& params);

/// Recursion psi0 = h, psi1 = h_dot + g1 h, psi2 = psi1_dot + g2 psi1, given both accelerations.
PsiValues psiValues(const RelativeState& rel, const VecD& a_i, const VecD& a_j,
                    const HocbfParams& params);

/// Throws std::invalid_argument for coincident agents.
PairConstraint buildConstraint(const AgentState& i, const AgentState& j, const HocbfParams& params,
                               bool has_comm_link);

/// Halfspace (2 r_ij)' a_i >= c_ij + (2 r_ij)' a_j_est.
PairConstraint buildEstimatedConstraint(const AgentState& i, const AgentState& j,
                                        const VecD& a_j_est, const HocbfParams& params);

}  // namespace swarmsafe
