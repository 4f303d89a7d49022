#include "swarmsafe/hocbf.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace swarmsafe {

void HocbfParams::validate() const {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(r_s > 0.0)) {
    throw std::invalid_argument("gamma1, gamma2 and r_s must be positive");
  }
}

const char* toString(NeighborModel m) {
  switch (m) {
    case NeighborModel::Cooperative: return "cooperative";
    case NeighborModel::NonAdversarial: return "non_adversarial";
    case NeighborModel::Estimated: return "estimated";
  }
  return "?";
}

double barrier(const RelativeState& rel, const HocbfParams& params) {
  return rel.r.squaredNorm() - params.r_s * params.r_s;
}

double cOffset(const RelativeState& rel, const HocbfParams& params) {
  const double g1 = params.gamma1;
  const double g2 = params.gamma2;
  return -2.0 * rel.v.squaredNorm() - 2.0 * (g1 + g2) * rel.r.dot(rel.v) -
         g1 * g2 * barrier(rel, params);
}

PsiValues psiValues(const RelativeState& rel, const VecD& a_i, const VecD& a_j,
                    const HocbfParams& params) {
  const double h = barrier(rel, params);
  const double h_dot = 2.0 * rel.r.dot(rel.v);
  const double h_ddot = 2.0 * rel.v.squaredNorm() + 2.0 * rel.r.dot(a_i - a_j);

  PsiValues out;
  out.psi0 = h;
  out.psi1 = h_dot + params.gamma1 * h;
  const double psi1_dot = h_ddot + params.gamma1 * h_dot;
  out.psi2 = psi1_dot + params.gamma2 * out.psi1;
  return out;
}

namespace {

RelativeState checkedRelative(const AgentState& i, const AgentState& j) {
  if (i.id == j.id) throw std::invalid_argument("pair constraint needs two distinct agents");
  RelativeState rel = relative(i, j);
  if (rel.r.squaredNorm() == 0.0) {
    throw std::invalid_argument(fmt::format("agents {} and {} are coincident", i.id, j.id));
  }
  return rel;
}

}  // namespace

PairConstraint buildConstraint(const AgentState& i, const AgentState& j, const HocbfParams& params,
                               bool has_comm_link) {
  const RelativeState rel = checkedRelative(i, j);
  PairConstraint pc;
  pc.i = i.id;
  pc.j = j.id;
  pc.r_ij = rel.r;
  pc.c_ij = cOffset(rel, params);
  pc.rhs = pc.c_ij;
  if (has_comm_link) {
    // a_j = -a_i doubles the effect of a_i.
    pc.model = NeighborModel::Cooperative;
    pc.normal = 4.0 * rel.r;
  } else {
    pc.model = NeighborModel::NonAdversarial;
    pc.normal = 2.0 * rel.r;
  }
  return pc;
}

PairConstraint buildEstimatedConstraint(const AgentState& i, const AgentState& j,
                                        const VecD& a_j_est, const HocbfParams& params) {
  const RelativeState rel = checkedRelative(i, j);
  PairConstraint pc;
  pc.i = i.id;
  pc.j = j.id;
  pc.r_ij = rel.r;
  pc.c_ij = cOffset(rel, params);
  pc.model = NeighborModel::Estimated;
  pc.normal = 2.0 * rel.r;
  pc.rhs = pc.c_ij + pc.normal.dot(a_j_est);
  return pc;
}

}  // namespace swarmsafe
