#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mgids/zero_sum.hpp"

namespace mgids {

// Posterior over environments with finite support. Candidates share shape
// and rewards; only kernels differ. Weights live in log space so thousands of
// episodes cannot underflow them.
//
// The exact information identities computed downstream assume the prior is
// independent across steps; random_product_support below builds supports with
// that structure, and likelihood updates preserve it.
struct FiniteSupportBelief {
  std::vector<ZeroSumGame> candidates;
  std::vector<double> log_weights;

  void validate() const;
  std::vector<double> weights() const;  // normalized, linear scale
};

// Independent Dirichlet posterior per (h, s, a, b) kernel row. `base`
// supplies shape, rewards and the initial state; its kernel is ignored.
struct DirichletBelief {
  ZeroSumGame base;
  std::vector<double> alpha;  // same layout as base.kernel

  void validate() const;
  std::span<const double> alpha_row(int h, int s, int a, int b) const {
    return {alpha.data() + base.row_index(h, s, a, b) * base.num_states,
            static_cast<std::size_t>(base.num_states)};
  }
  static DirichletBelief uniform_prior(const ZeroSumGame& base, double concentration = 1.0);
};

using Belief = std::variant<FiniteSupportBelief, DirichletBelief>;

enum class RewardShift { Bonus, Penalty };

// Environment with the posterior-mean kernel and rewards shifted by
// lambda times the expected KL from the posterior kernel to its mean.
// Bonus rewards may exceed 1; evaluation does not clamp.
struct MeanEnvironment {
  ZeroSumGame env;
  double lambda = 0.0;
  RewardShift shift = RewardShift::Bonus;
};

// Dimension info shared by both families.
const ZeroSumGame& belief_base(const Belief& belief);

// Bayes update from one episode. Finite support: log-likelihood reweighting.
// Dirichlet: conjugate count increments. Throws DegeneratePosterior when the
// trajectory is impossible under every candidate.
Belief posterior_update(const Belief& belief, const Trajectory& trajectory);
Belief posterior_update(const Belief& belief, const History& history);

// Posterior sampling oracle; independent draws under distinct seeds.
ZeroSumGame sample_env(const Belief& belief, std::uint64_t rng_seed);

// Posterior-mean kernel, laid out like ZeroSumGame::kernel.
std::vector<double> mean_kernel(const Belief& belief);

// E[ KL(P_h(.|s,a,b) || mean row) ] under the posterior; closed form for
// both families.
double expected_kl_to_mean(const Belief& belief, int h, int s, int a, int b);

// All expected KLs at once, laid out like ZeroSumGame::reward.
std::vector<double> expected_kl_table(const Belief& belief);

// Uniform-weight finite support of posterior draws; the Monte Carlo stand-in
// for operations that need an enumerable candidate set.
FiniteSupportBelief empirical_support(const DirichletBelief& belief, int samples,
                                      std::uint64_t rng_seed);

MeanEnvironment build_mean_env(const Belief& belief, double lambda, RewardShift shift);

struct ExpectedValue {
  double value = 0.0;
  std::optional<double> stderr_estimate;
};

// Posterior expectation of the initial-state value of (mu, nu): exact for
// finite support, Monte Carlo (with stderr) for Dirichlet.
ExpectedValue expected_value(const Belief& belief, const MarkovPolicy& mu, const MarkovPolicy& nu,
                             std::optional<int> num_samples = std::nullopt,
                             std::uint64_t rng_seed = 0);

// Support generator for priors that are independent across steps: per step a
// small set of kernel choices is drawn and the candidate list is their
// cartesian product with product weights. `per_step_choices[h]` gives the
// number of kernel alternatives at step h (product capped by the caller).
FiniteSupportBelief random_product_support(const ZeroSumGame& shape_and_rewards,
                                           const std::vector<int>& per_step_choices,
                                           std::uint64_t rng_seed);

}  // namespace mgids
