#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mgids/rng.hpp"

namespace mgids {

enum class PlayerSide { Max, Min };

// Tabular two-player zero-sum Markov game with a fixed initial state,
// deterministic rewards in [0,1] and unknown transition kernels. All indices
// are dense and 0-based; step h runs over 0..horizon-1.
struct ZeroSumGame {
  int horizon = 0;
  int num_states = 0;
  int num_actions_max = 0;  // max-player action count
  int num_actions_min = 0;  // min-player action count
  int initial_state = 0;
  // kernel[row_index(h,s,a,b)*S + s'] = P_h(s' | s, a, b)
  std::vector<double> kernel;
  // reward[row_index(h,s,a,b)] = r_h(s, a, b)
  std::vector<double> reward;

  static ZeroSumGame zeros(int horizon, int num_states, int actions_max, int actions_min,
                           int initial_state = 0);

  std::size_t num_rows() const {
    return static_cast<std::size_t>(horizon) * num_states * num_actions_max * num_actions_min;
  }
  std::size_t row_index(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states + s) * num_actions_max + a) *
               num_actions_min +
           b;
  }
  std::span<const double> kernel_row(int h, int s, int a, int b) const {
    return {kernel.data() + row_index(h, s, a, b) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  std::span<double> kernel_row(int h, int s, int a, int b) {
    return {kernel.data() + row_index(h, s, a, b) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  double reward_at(int h, int s, int a, int b) const { return reward[row_index(h, s, a, b)]; }
  double& reward_at(int h, int s, int a, int b) { return reward[row_index(h, s, a, b)]; }

  bool same_shape(const ZeroSumGame& other) const {
    return horizon == other.horizon && num_states == other.num_states &&
           num_actions_max == other.num_actions_max &&
           num_actions_min == other.num_actions_min && initial_state == other.initial_state;
  }

  // Full invariant check: shapes, kernel rows normalized, rewards in [0,1].
  void validate() const;
  // Kernel-only check; mean environments carry shifted rewards outside [0,1].
  void validate_dynamics() const;
};

// Per-step per-state action distribution for one side.
struct MarkovPolicy {
  PlayerSide side = PlayerSide::Max;
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> dist;  // [h][s][action]

  std::size_t row_offset(int h, int s) const {
    return (static_cast<std::size_t>(h) * num_states + s) * num_actions;
  }
  std::span<const double> row(int h, int s) const {
    return {dist.data() + row_offset(h, s), static_cast<std::size_t>(num_actions)};
  }
  std::span<double> row(int h, int s) {
    return {dist.data() + row_offset(h, s), static_cast<std::size_t>(num_actions)};
  }

  static MarkovPolicy uniform(PlayerSide side, int horizon, int num_states, int num_actions);
  // actions[h*num_states + s] gives the action played at (h, s).
  static MarkovPolicy deterministic(PlayerSide side, int horizon, int num_states, int num_actions,
                                    const std::vector<int>& actions);
  void validate() const;
  bool matches(const ZeroSumGame& env) const;
};

// Value and action-value tables from backward induction. v has horizon+1
// slices with the terminal slice identically zero.
struct ValueTables {
  int horizon = 0;
  int num_states = 0;
  int num_actions_max = 0;
  int num_actions_min = 0;
  std::vector<double> v;  // [h][s], h in 0..horizon (terminal slice included)
  std::vector<double> q;  // [h][s][a][b]

  double value(int h, int s) const { return v[static_cast<std::size_t>(h) * num_states + s]; }
  double q_value(int h, int s, int a, int b) const {
    return q[((static_cast<std::size_t>(h) * num_states + s) * num_actions_max + a) *
                 num_actions_min +
             b];
  }
  double initial_value(const ZeroSumGame& env) const { return value(0, env.initial_state); }
};

// One simulated episode: H steps plus the terminal state.
struct Trajectory {
  struct Step {
    int state = 0;
    int action_max = 0;
    int action_min = 0;
    double reward = 0.0;
  };
  std::vector<Step> steps;
  int final_state = 0;
};

using History = std::vector<Trajectory>;

// d[h][s][a][b] = P(s_h = s, a_h = a, b_h = b) under a policy pair.
struct OccupancyTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions_max = 0;
  int num_actions_min = 0;
  std::vector<double> d;

  double at(int h, int s, int a, int b) const {
    return d[((static_cast<std::size_t>(h) * num_states + s) * num_actions_max + a) *
                 num_actions_min +
             b];
  }
};

struct BestResponse {
  MarkovPolicy policy;
  ValueTables values;
};

struct NashSolution {
  MarkovPolicy mu;
  MarkovPolicy nu;
  ValueTables values;
};

struct ValueGapDecomposition {
  double gap = 0.0;                   // V^e - V^e2 at the initial state
  std::vector<double> per_step;       // one term per step; sums to gap
};

// Exact policy evaluation via the Bellman recursion.
ValueTables evaluate_values(const ZeroSumGame& env, const MarkovPolicy& mu,
                            const MarkovPolicy& nu);

// Deterministic best response of the min player to a fixed max policy
// (backward induction on the induced MDP, ties to the lowest action index).
BestResponse best_response_min(const ZeroSumGame& env, const MarkovPolicy& mu);
BestResponse best_response_max(const ZeroSumGame& env, const MarkovPolicy& nu);

// Nash equilibrium by backward induction with a stage matrix-game solve at
// every (h, s). The returned values satisfy the minimax equation.
NashSolution solve_nash(const ZeroSumGame& env);

OccupancyTable occupancy(const ZeroSumGame& env, const MarkovPolicy& mu, const MarkovPolicy& nu);

Trajectory simulate_episode(const ZeroSumGame& env, const MarkovPolicy& mu,
                            const MarkovPolicy& nu, std::uint64_t rng_seed);

// Splits V^e - V^e2 into per-step terms: the step-h term weighs the kernel
// difference at h (applied to V^e at h+1) by the occupancy of e2. Requires
// equal rewards in e and e2.
ValueGapDecomposition value_gap_decomposition(const ZeroSumGame& e, const ZeroSumGame& e2,
                                              const MarkovPolicy& mu, const MarkovPolicy& nu);

// Product of two sub-games: states, actions and kernels multiply, rewards
// add. Composite indices are row-major with the first factor leading, e.g.
// s = s1 * m2.num_states + s2. Throws if any summed reward exceeds 1.
ZeroSumGame build_product_mg(const ZeroSumGame& m1, const ZeroSumGame& m2);

// Lifts a policy on factor 1 (resp. 2) of a product game built by
// build_product_mg to the product action space, playing uniformly on the
// other factor.
MarkovPolicy lift_policy_first_factor(const MarkovPolicy& p, int other_states, int other_actions);

}  // namespace mgids
