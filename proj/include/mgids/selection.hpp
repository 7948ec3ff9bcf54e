#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mgids/belief.hpp"
#include "mgids/compression.hpp"
#include "mgids/info_ratio.hpp"

namespace mgids {

enum class Algorithm { MAIDS, RegMAIDS, CompressedMAIDS, ThompsonSampling, UniformRandom };

enum class LearningTarget { FullEnvironment, Compressed };

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::RegMAIDS;
  double lambda = 0.0;        // regularizer weight of the max player
  double lambda_tilde = 0.0;  // regularizer weight of the min player
  int candidate_count = 4;    // posterior samples feeding the candidate sets (MAIDS)
  int mixture_grid = 2;       // simplex grid resolution per side (MAIDS)
  double epsilon = 0.0;       // compression tolerance (CompressedMAIDS)
  int mc_samples = 0;         // Monte Carlo draws for Dirichlet expectations
  LearningTarget learning_target = LearningTarget::FullEnvironment;

  void validate() const;
  // Schedule from the zero-sum regret analysis: sqrt(2KH^2 / (S ln(SKH))).
  static double zero_sum_lambda(int S, int H, int K);
  // General-sum schedule: sqrt(HK^2 / (S ln(SKH))).
  static double general_sum_lambda(int S, int H, int K);
};

struct SelectionDiagnostics {
  std::string rule;  // "info-ratio", "numerator-fallback", "mean-env-nash", ...
  double mu_objective = 0.0;
  double nu_objective = 0.0;
  double mu_numerator = 0.0;
  double nu_numerator = 0.0;
  double mi_selected = 0.0;   // information term of the realized pair
  double lambda = 0.0;
  double lambda_tilde = 0.0;
  int mu_component = -1;      // realized mixture components, -1 if pure
  int nu_component = -1;
};

struct EpisodePolicyPair {
  MarkovPolicy mu;  // realized component for this episode
  MarkovPolicy nu;
  SelectionDiagnostics diagnostics;
  // Full mixtures behind the realization, when the algorithm selects one.
  std::optional<PolicyMixture> mu_mixture;
  std::optional<PolicyMixture> nu_mixture;
};

// Thompson-sampling proxies: draw an environment, play its Nash max policy /
// the best response to `mu` in it.
MarkovPolicy ts_select_max(const Belief& belief, std::uint64_t rng_seed);
MarkovPolicy ts_select_min(const Belief& belief, const MarkovPolicy& mu, std::uint64_t rng_seed);

// Exact best response of the min player to a seed-drawn mixture of max
// policies: deterministic choices on all but the last step are enumerated
// (guarded), the last step is optimized greedily per state, which is exact
// because the minimum over Markov policies is attained at a vertex.
struct MixtureBestResponse {
  MarkovPolicy policy;
  double value = 0.0;
};
MixtureBestResponse best_response_min_to_mixture(const ZeroSumGame& env, const PolicyMixture& mu,
                                                 std::size_t guard = 200000);

// Two-step information-ratio selection over mixtures of candidate policies:
// the max player minimizes the worst-case joint ratio on a simplex grid, the
// min player then minimizes the marginal ratio. Falls back to the numerator
// minimax when every ratio is flagged infinite.
EpisodePolicyPair maids_select(const Belief& belief, const AlgorithmConfig& cfg,
                               std::uint64_t rng_seed);

// Regularized variant: Nash of the bonus mean environment for the max
// player, best response in the penalty mean environment for the min player.
// Deterministic given the belief.
EpisodePolicyPair reg_maids_select(const Belief& belief, const AlgorithmConfig& cfg);

// Information-ratio selection against a compressed learning target.
EpisodePolicyPair compressed_maids_select(const Belief& belief, const AlgorithmConfig& cfg,
                                          const Partition& partition, std::uint64_t rng_seed);

EpisodePolicyPair uniform_baseline(const ZeroSumGame& dims, std::uint64_t rng_seed);

}  // namespace mgids
