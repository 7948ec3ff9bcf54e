#pragma once

#include <vector>

namespace mgids {

// Zero-sum stage game; rows maximize, columns minimize.
struct MatrixGame {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<double> payoff;  // [row][col]

  double at(int a, int b) const { return payoff[static_cast<std::size_t>(a) * num_cols + b]; }
};

struct MinimaxSolution {
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double value = 0.0;
};

// Solves the matrix game by linear programming (one LP per side, both with
// deterministic pivoting). The returned strategies satisfy
//   min_b x'U(.,b) >= value - tol  and  max_a U(a,.)y <= value + tol.
MinimaxSolution minimax_solve(const MatrixGame& game);

// Finite N-player normal-form game. Joint profiles are flattened row-major
// with player 0 as the leading index.
struct NormalFormGame {
  std::vector<int> strategy_counts;           // one entry per player
  std::vector<std::vector<double>> payoffs;   // payoffs[i][profile]

  int num_players() const { return static_cast<int>(strategy_counts.size()); }
  std::size_t num_profiles() const;
  std::size_t profile_index(const std::vector<int>& choice) const;
  void decode_profile(std::size_t index, std::vector<int>& choice) const;
  void validate() const;
};

// Distribution over joint pure profiles (the CCE object).
struct JointDistribution {
  std::vector<int> strategy_counts;
  std::vector<double> prob;  // per joint profile, flattened as in NormalFormGame

  void validate() const;
};

// Independent per-player mixtures (the NE object).
struct ProductDistribution {
  std::vector<std::vector<double>> marginals;  // marginals[i][strategy]

  JointDistribution to_joint(const std::vector<int>& strategy_counts) const;
};

// Expected payoff of player i under a joint distribution.
double expected_payoff(const NormalFormGame& game, const JointDistribution& dist, int player);

// Best gain available to `player` by deviating to a fixed pure strategy while
// the others keep playing their marginal of `dist`.
double best_deviation_gain(const NormalFormGame& game, const JointDistribution& dist, int player);

// Coarse correlated equilibrium via one LP: feasibility of the deviation
// constraints with total expected payoff as the objective, so ties go to the
// welfare-maximizing CCE.
JointDistribution cce_solve(const NormalFormGame& game);

// Nash equilibrium: support enumeration for two players, best-response
// iteration with restarts for three. Throws ConvergenceFailure (carrying the
// best gap found) when the tolerance cannot be met.
ProductDistribution ne_solve(const NormalFormGame& game, double tolerance = 1e-6);

}  // namespace mgids
