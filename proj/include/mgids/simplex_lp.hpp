#pragma once

#include <vector>

namespace mgids {

enum class Relation { LessEq, GreaterEq, Eq };

struct LpConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
};

// Maximizes objective . x over x >= 0 subject to the given constraints.
// Dense two-phase simplex with Bland's rule, so pivoting is deterministic
// (lowest eligible index) and never cycles. Intended for the tiny LPs arising
// from stage games and equilibrium constraints.
LpResult solve_lp_max(const std::vector<double>& objective,
                      const std::vector<LpConstraint>& constraints);

}  // namespace mgids
