#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mgids/matrix_games.hpp"
#include "mgids/rng.hpp"
#include "mgids/zero_sum.hpp"

namespace mgids {

// Tabular N-player general-sum Markov game. Joint actions are flattened with
// player 0 as the leading index; rewards are per player in [0,1].
struct GeneralSumGame {
  int num_players = 0;
  int horizon = 0;
  int num_states = 0;
  int initial_state = 0;
  std::vector<int> action_counts;            // per player
  std::vector<double> kernel;                // [h][s][joint][s']
  std::vector<std::vector<double>> rewards;  // rewards[i][h][s][joint]

  int num_joint_actions() const {
    int n = 1;
    for (int c : action_counts) n *= c;
    return n;
  }
  std::size_t num_rows() const {
    return static_cast<std::size_t>(horizon) * num_states * num_joint_actions();
  }
  std::size_t row_index(int h, int s, int joint) const {
    return (static_cast<std::size_t>(h) * num_states + s) * num_joint_actions() + joint;
  }
  std::span<const double> kernel_row(int h, int s, int joint) const {
    return {kernel.data() + row_index(h, s, joint) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  int encode_action(const std::vector<int>& per_player) const;
  void decode_action(int joint, std::vector<int>& per_player) const;

  bool same_shape(const GeneralSumGame& other) const;
  void validate() const;
  void validate_dynamics() const;
};

// Deterministic Markov policy of one player: one action per (h, s).
struct PurePolicy {
  std::vector<int> actions;  // [h][s]

  int action_at(int h, int s, int num_states) const {
    return actions[static_cast<std::size_t>(h) * num_states + s];
  }
};

// Explicit finite pure-policy sets, one list per player.
struct PurePolicyProfileSet {
  std::vector<std::vector<PurePolicy>> per_player;

  std::size_t num_profiles() const;
  void validate(const GeneralSumGame& env, std::size_t guard = 10000) const;
  // Every deterministic Markov policy for every player (guarded per player).
  static PurePolicyProfileSet all_deterministic(const GeneralSumGame& env,
                                                std::size_t guard_per_player = 100000);
};

// Mixture over pure profiles: correlated (joint) or independent per player
// (product). Profiles index into a PurePolicyProfileSet.
struct MixedJointPolicy {
  enum class Kind { Joint, Product };
  Kind kind = Kind::Joint;
  PurePolicyProfileSet support;
  std::vector<double> joint_prob;                 // Joint: per profile combo
  std::vector<std::vector<double>> marginals;     // Product: per player

  void validate(const GeneralSumGame& env) const;
  // Probability of each profile combo, flattened like NormalFormGame profiles.
  std::vector<double> profile_distribution() const;
  // One pure profile per episode: a single correlated draw for Joint, one
  // independent draw per player for Product.
  std::vector<PurePolicy> realize(std::uint64_t rng_seed) const;

  static MixedJointPolicy point_mass(PurePolicyProfileSet support_one_each);
};

struct GsTrajectory {
  struct Step {
    int state = 0;
    int joint_action = 0;
  };
  std::vector<Step> steps;
  int final_state = 0;
};

// Per-player value of a pure deterministic profile by backward induction.
std::vector<double> evaluate_profile_gs(const GeneralSumGame& env,
                                        const std::vector<PurePolicy>& profile);

// Per-player initial-state values of a mixed policy (exact mixture over
// profile DPs).
std::vector<double> evaluate_values_gs(const GeneralSumGame& env, const MixedJointPolicy& pi);

struct GsBestResponse {
  int index = 0;  // into pure_set_i
  PurePolicy policy;
  double value = 0.0;
};

// Best response of player i over an explicit pure set against the rest of
// the mixed policy (the optimum over mixtures of the set is attained at one
// of its elements).
GsBestResponse best_response_gs(const GeneralSumGame& env, const MixedJointPolicy& pi, int player,
                                const std::vector<PurePolicy>& pure_set_i);

// Finite-support and Dirichlet posteriors over general-sum kernels,
// mirroring the zero-sum belief module (joint-action indexed, independent
// across steps for the exact identities).
struct GsFiniteSupportBelief {
  std::vector<GeneralSumGame> candidates;
  std::vector<double> log_weights;

  void validate() const;
  std::vector<double> weights() const;
};

struct GsDirichletBelief {
  GeneralSumGame base;
  std::vector<double> alpha;

  void validate() const;
};

using GsBelief = std::variant<GsFiniteSupportBelief, GsDirichletBelief>;

const GeneralSumGame& gs_belief_base(const GsBelief& belief);

// Cartesian-product support over per-step kernel choices (see the zero-sum
// random_product_support); likelihood updates preserve the product structure
// the exact information identities rely on.
GsFiniteSupportBelief gs_random_product_support(const GeneralSumGame& shape_and_rewards,
                                                const std::vector<int>& per_step_choices,
                                                std::uint64_t rng_seed);

GsBelief gs_posterior_update(const GsBelief& belief, const GsTrajectory& trajectory);
GeneralSumGame gs_sample_env(const GsBelief& belief, std::uint64_t rng_seed);
std::vector<double> gs_mean_kernel(const GsBelief& belief);
std::vector<double> gs_expected_kl_table(const GsBelief& belief);

// Mean environment: posterior-mean kernel, every player's reward shifted up
// by lambda times the expected KL to the mean row.
GeneralSumGame build_mean_env_gs(const GsBelief& belief, double lambda);

// I_k(environment; trajectory) under the mixed policy, occupancy form.
double mutual_info_trajectory_gs(const GsBelief& belief, const MixedJointPolicy& pi);
// Exhaustive-enumeration oracle (finite support, guarded).
double mutual_info_trajectory_enum_gs(const GsFiniteSupportBelief& belief,
                                      const MixedJointPolicy& pi);

GsTrajectory simulate_episode_gs(const GeneralSumGame& env,
                                 const std::vector<PurePolicy>& profile,
                                 std::uint64_t rng_seed);

enum class EquilibriumTarget { NE, CCE };

// Normal-form reduction: tabulate per-player values of every pure profile in
// the mean environment, then solve that game for an NE (product output) or a
// CCE (joint output).
MixedJointPolicy reg_maids_gs_select(const GsBelief& belief, double lambda,
                                     const PurePolicyProfileSet& pure_sets,
                                     EquilibriumTarget target);

// Per-player deviation gaps of `pi` in `env` over the given pure sets;
// max_i gap_i <= eps certifies an eps-NE (product) or eps-CCE (joint).
std::vector<double> equilibrium_gap(const GeneralSumGame& env, const MixedJointPolicy& pi,
                                    const PurePolicyProfileSet& pure_sets);

// Embeds a zero-sum game as a two-player general-sum game with
// r2 = 1 - r1 (affine constant-sum embedding).
GeneralSumGame embed_zero_sum(const ZeroSumGame& env);

}  // namespace mgids
