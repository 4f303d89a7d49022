#include "swarmsafe/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace swarmsafe {

namespace {

constexpr int kMaxVars = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxVars, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxVars, kMaxVars>;

// min sum_k w_k (x_k - x0_k)^2  s.t.  G x >= h
struct DenseQp {
  Vec x0;
  Vec weights;
  std::vector<Vec> rows;
  std::vector<double> rhs;
};

struct DenseResult {
  bool feasible = false;
  Vec x;
  std::vector<int> active;
  std::vector<double> lambda;
};

bool nextCombination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  int pos = k - 1;
  while (pos >= 0 && idx[pos] == m - k + pos) --pos;
  if (pos < 0) return false;
  ++idx[pos];
  for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  return true;
}

bool primalFeasible(const DenseQp& qp, const Vec& x, double tol) {
  for (std::size_t k = 0; k < qp.rows.size(); ++k) {
    const double slack = qp.rows[k].dot(x) - qp.rhs[k];
    if (slack < -tol * std::max(1.0, std::abs(qp.rhs[k]))) return false;
  }
  return true;
}

DenseResult solveDense(const DenseQp& qp, double feas_tol) {
  const int n = static_cast<int>(qp.x0.size());
  const int m = static_cast<int>(qp.rows.size());
  const Vec w_inv = qp.weights.cwiseInverse();

  for (int k = 0; k <= std::min(n, m); ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q) idx[q] = q;
    do {
      Vec lambda_s(k);
      Vec x = qp.x0;
      if (k > 0) {
        Mat gs(k, n);
        Vec hs(k);
        for (int q = 0; q < k; ++q) {
          gs.row(q) = qp.rows[idx[q]].transpose();
          hs(q) = qp.rhs[idx[q]];
        }
        const Mat m_s = gs * w_inv.asDiagonal() * gs.transpose();
        Eigen::FullPivLU<Mat> lu(m_s);
        lu.setThreshold(1e-12);
        if (lu.rank() < k) continue;
        lambda_s = 2.0 * lu.solve(hs - gs * qp.x0);
        const double scale = 1.0 + lambda_s.cwiseAbs().maxCoeff();
        if (lambda_s.minCoeff() < -1e-10 * scale) continue;
        x = qp.x0 + 0.5 * w_inv.asDiagonal() * (gs.transpose() * lambda_s);
      }
      if (!primalFeasible(qp, x, feas_tol)) continue;

      DenseResult out;
      out.feasible = true;
      out.x = x;
      out.lambda.assign(static_cast<std::size_t>(m), 0.0);
      for (int q = 0; q < k; ++q) {
        out.active.push_back(idx[q]);
        out.lambda[idx[q]] = std::max(0.0, lambda_s(q));
      }
      return out;
    } while (k > 0 && nextCombination(idx, m));
  }
  return {};
}

Vec toEigen(const VecD& v) {
  Vec out(v.dim());
  for (int k = 0; k < v.dim(); ++k) out(k) = v[k];
  return out;
}

VecD fromEigen(const Vec& v, int dim) {
  VecD out(dim);
  for (int k = 0; k < dim; ++k) out[k] = v(k);
  return out;
}

// Halfspaces first, then (lower, upper) bound rows per axis.
void appendConstraints(const QpProblem& problem, int n, DenseQp& qp,
                       const std::vector<double>* row_scale) {
  const int dim = problem.a_nom.dim();
  for (std::size_t k = 0; k < problem.halfspaces.size(); ++k) {
    const auto& hs = problem.halfspaces[k];
    const double s = row_scale ? (*row_scale)[k] : 1.0;
    Vec row = Vec::Zero(n);
    for (int d = 0; d < dim; ++d) row(d) = hs.normal[d] * s;
    if (n > dim) row(dim) = 1.0;
    qp.rows.push_back(row);
    qp.rhs.push_back(hs.rhs * s);
  }
  for (int d = 0; d < dim; ++d) {
    Vec lo = Vec::Zero(n);
    lo(d) = 1.0;
    qp.rows.push_back(lo);
    qp.rhs.push_back(problem.box_lo[d]);
    Vec hi = Vec::Zero(n);
    hi(d) = -1.0;
    qp.rows.push_back(hi);
    qp.rhs.push_back(-problem.box_hi[d]);
  }
}

double gradientNorm(const VecD& g) {
  const double n = g.norm();
  if (!(n > 0.0)) throw std::invalid_argument("halfspace normal must be non-zero");
  return n;
}

}  // namespace

const char* toString(QpStatus s) {
  return s == QpStatus::Optimal ? "optimal" : "infeasible";
}

QpProblem QpProblem::withSymmetricBox(const VecD& a_nom, double limit) {
  QpProblem p;
  p.a_nom = a_nom;
  p.box_lo = VecD(a_nom.dim());
  p.box_hi = VecD(a_nom.dim());
  for (int k = 0; k < a_nom.dim(); ++k) {
    p.box_lo[k] = -limit;
    p.box_hi[k] = limit;
  }
  return p;
}

void QpProblem::validate() const {
  requireSameDim(a_nom, box_lo);
  requireSameDim(a_nom, box_hi);
  if (!a_nom.allFinite() || !box_lo.allFinite() || !box_hi.allFinite()) {
    throw std::invalid_argument("QP data must be finite");
  }
  for (int k = 0; k < a_nom.dim(); ++k) {
    if (box_lo[k] > box_hi[k]) {
      throw std::invalid_argument(fmt::format("inverted box on axis {}", k));
    }
  }
  for (const auto& hs : halfspaces) {
    requireSameDim(a_nom, hs.normal);
    if (!hs.normal.allFinite() || !std::isfinite(hs.rhs)) {
      throw std::invalid_argument("QP halfspace must be finite");
    }
    gradientNorm(hs.normal);
  }
}

Projection projectSingle(const VecD& a_nom, const VecD& normal, double rhs) {
  requireSameDim(a_nom, normal);
  const double nn = normal.squaredNorm();
  if (!(nn > 0.0)) throw std::invalid_argument("projection needs a non-zero normal");
  const double gap = std::max(rhs - normal.dot(a_nom), 0.0);
  return {a_nom + (gap / nn) * normal, gap * gap / nn};
}

QpSolution solve(const QpProblem& problem, const QpTolerances& tol) {
  problem.validate();
  const int dim = problem.a_nom.dim();

  DenseQp qp;
  qp.x0 = toEigen(problem.a_nom);
  qp.weights = Vec::Ones(dim);
  appendConstraints(problem, dim, qp, nullptr);

  const DenseResult r = solveDense(qp, tol.feasibility);
  QpSolution sol;
  if (!r.feasible) {
    sol.a_star = problem.a_nom;
    sol.status = QpStatus::Infeasible;
    sol.multipliers.assign(static_cast<std::size_t>(problem.numConstraints()), 0.0);
    return sol;
  }
  sol.status = QpStatus::Optimal;
  sol.a_star = fromEigen(r.x, dim);
  sol.active_set = r.active;
  sol.multipliers = r.lambda;
  sol.deviation = (sol.a_star - problem.a_nom).squaredNorm();
  return sol;
}

double KktReport::worst() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktReport kktResiduals(const QpProblem& problem, const QpSolution& sol) {
  const int dim = problem.a_nom.dim();
  const int m = static_cast<int>(problem.halfspaces.size());
  if (static_cast<int>(sol.multipliers.size()) != problem.numConstraints()) {
    throw std::invalid_argument("multiplier count does not match constraint count");
  }

  auto normalOf = [&](int k) {
    if (k < m) return problem.halfspaces[k].normal;
    VecD e(dim);
    e[(k - m) / 2] = ((k - m) % 2 == 0) ? 1.0 : -1.0;
    return e;
  };
  auto rhsOf = [&](int k) {
    if (k < m) return problem.halfspaces[k].rhs;
    const int axis = (k - m) / 2;
    return ((k - m) % 2 == 0) ? problem.box_lo[axis] : -problem.box_hi[axis];
  };

  KktReport rep;
  VecD residual = sol.a_star - problem.a_nom;
  for (int k = 0; k < problem.numConstraints(); ++k) {
    const double lambda = sol.multipliers[k];
    const VecD g = normalOf(k);
    const double slack = g.dot(sol.a_star) - rhsOf(k);
    residual -= 0.5 * lambda * g;
    rep.primal = std::max(rep.primal, -slack);
    rep.dual = std::max(rep.dual, -lambda);
    rep.complementarity = std::max(rep.complementarity, std::abs(lambda * slack));
  }
  rep.stationarity = residual.maxAbs();
  return rep;
}

MinMaxResult solveMinMaxViolation(const QpProblem& problem, double violation_weight,
                                  const QpTolerances& tol) {
  problem.validate();
  const int dim = problem.a_nom.dim();
  const int n = dim + 1;

  std::vector<double> scale;
  for (const auto& hs : problem.halfspaces) scale.push_back(1.0 / gradientNorm(hs.normal));

  DenseQp qp;
  qp.x0 = Vec::Zero(n);
  qp.x0.head(dim) = toEigen(problem.a_nom);
  qp.weights = Vec::Ones(n);
  qp.weights(dim) = violation_weight;
  appendConstraints(problem, n, qp, &scale);
  Vec t_row = Vec::Zero(n);
  t_row(dim) = 1.0;
  qp.rows.push_back(t_row);
  qp.rhs.push_back(0.0);

  const DenseResult r = solveDense(qp, tol.feasibility);
  if (!r.feasible) {
    // Only reachable when the box itself is empty, which validate() rules out.
    throw std::runtime_error("min-max relaxation failed");
  }
  MinMaxResult out;
  out.a = fromEigen(r.x, dim);
  for (std::size_t k = 0; k < problem.halfspaces.size(); ++k) {
    const auto& hs = problem.halfspaces[k];
    out.max_violation = std::max(out.max_violation, (hs.rhs - hs.normal.dot(out.a)) * scale[k]);
  }
  return out;
}

}  // namespace swarmsafe
