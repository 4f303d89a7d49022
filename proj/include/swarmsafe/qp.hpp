#pragma once

#include <vector>

#include "swarmsafe/geometry.hpp"

namespace swarmsafe {

/// Halfspace normal' * a >= rhs.
struct Halfspace {
  VecD normal;
  double rhs = 0.0;
};

struct QpTolerances {
  double feasibility = 1e-8;
  double kkt = 1e-7;
};

/// min |a - a_nom|^2  s.t.  halfspaces, box_lo <= a <= box_hi
struct QpProblem {
  VecD a_nom;
  std::vector<Halfspace> halfspaces;
  VecD box_lo;
  VecD box_hi;

  /// Symmetric box [-limit, limit]^dim.
  static QpProblem withSymmetricBox(const VecD& a_nom, double limit);

  /// Throws std::invalid_argument for mixed dims, non-finite data or an inverted box.
  void validate() const;

  int numConstraints() const { return static_cast<int>(halfspaces.size()) + 2 * a_nom.dim(); }
};

enum class QpStatus { Optimal, Infeasible };

const char* toString(QpStatus s);

/**
 * Solution of a QpProblem.
 *
 * Constraint indices run over halfspaces first, then for each axis k the lower
 * bound (m + 2k) and the upper bound (m + 2k + 1). `multipliers` satisfy
 * a_star - a_nom = sum_k multipliers[k] * normal_k / 2 at optimality.
 */
struct QpSolution {
  VecD a_star;
  QpStatus status = QpStatus::Infeasible;
  std::vector<int> active_set;
  std::vector<double> multipliers;
  double deviation = 0.0;
};

struct Projection {
  VecD a_star;
  double cost = 0.0;
};

/// Closed-form Euclidean projection of a_nom onto {a : normal' a >= rhs}.
Projection projectSingle(const VecD& a_nom, const VecD& normal, double rhs);

/**
 * Exact solver for small strictly convex QPs.
 *
 * Enumerates active sets of at most dim linearly independent constraints in
 * lexicographic order and returns the first KKT point. When none exists the
 * feasible set is empty and the status is Infeasible.
 */
QpSolution solve(const QpProblem& problem, const QpTolerances& tol = {});

struct KktReport {
  double stationarity = 0.0;     ///< |a - a_nom - sum lambda g / 2|_inf
  double primal = 0.0;           ///< largest constraint violation
  double dual = 0.0;             ///< largest negative multiplier magnitude
  double complementarity = 0.0;  ///< max |lambda_k * slack_k|

  double worst() const;
};

/// KKT residuals of `sol` for `problem`; expects one multiplier per constraint.
KktReport kktResiduals(const QpProblem& problem, const QpSolution& sol);

struct MinMaxResult {
  VecD a;
  double max_violation = 0.0;  ///< largest normalized halfspace violation [m/s^2]
};

/**
 * Relaxation used when solve() reports Infeasible: keeps the box hard and
 * minimizes the largest normalized halfspace violation t through the epigraph
 * problem min |a - a_nom|^2 + w t^2, g_k' a / |g_k| + t >= h_k / |g_k|, t >= 0.
 */
MinMaxResult solveMinMaxViolation(const QpProblem& problem, double violation_weight = 1e6,
                                  const QpTolerances& tol = {});

}  // namespace swarmsafe
