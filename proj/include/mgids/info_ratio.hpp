#pragma once

#include <cstdint>
#include <optional>

#include "mgids/belief.hpp"
#include "mgids/compression.hpp"

namespace mgids {

// Denominators at or below this are treated as "no information": the ratio
// is 0 when the numerator also vanishes and flagged infinite otherwise.
constexpr double kMiFloor = 1e-12;

struct InfoRatioReport {
  double numerator_regret = 0.0;   // the expectation inside the square
  double denominator_mi = 0.0;
  double ratio = 0.0;
  bool infinite = false;
  std::optional<double> estimation_stderr;
};

// Optional Monte Carlo controls for Dirichlet beliefs. Finite-support
// beliefs are always evaluated exactly and ignore these.
struct McOptions {
  int num_samples = 0;
  std::uint64_t seed = 0;
};

// Mixture of Markov policies for one side, realized by drawing a component
// per episode and playing it for the whole episode. A pure policy is the
// one-component case. Values, occupancies and the trajectory law are linear
// in the weights, which the evaluators below exploit.
struct PolicyMixture {
  std::vector<MarkovPolicy> components;
  std::vector<double> weights;

  static PolicyMixture pure(MarkovPolicy policy);
  void validate() const;
  MarkovPolicy realize(std::uint64_t rng_seed) const;
};

// I_k(environment; episode trajectory) for policies (mu, nu) via the
// occupancy form: occupancy in the reward-free mean environment weighted by
// the expected per-row KL to the mean kernel. Exact for both families when
// the prior is independent across steps.
double mutual_info_trajectory(const Belief& belief, const MarkovPolicy& mu,
                              const MarkovPolicy& nu);
double mutual_info_trajectory(const Belief& belief, const PolicyMixture& mu,
                              const PolicyMixture& nu);

// Direct I(environment; trajectory) by exhaustive trajectory enumeration;
// the oracle for the occupancy form. Guarded by (S*A*B)^H <= 10^6.
double mutual_info_trajectory_enum(const FiniteSupportBelief& belief, const MarkovPolicy& mu,
                                   const MarkovPolicy& nu);

// I_k(compressed environment; trajectory): the joint law of (cell id,
// trajectory) by enumeration for finite support. Dirichlet beliefs go
// through an empirical finite support of mc.num_samples posterior draws.
double mutual_info_compressed(const Belief& belief, const Partition& partition,
                              const MarkovPolicy& mu, const MarkovPolicy& nu,
                              const McOptions& mc = {});

// Joint information ratio: squared expected shortfall of mu against the
// per-environment Nash max policy (with nu fixed), over the information the
// pair acquires about the environment.
InfoRatioReport joint_info_ratio(const Belief& belief, const PolicyMixture& mu,
                                 const PolicyMixture& nu, const McOptions& mc = {});

// Marginal information ratio: squared expected excess of nu over the exact
// best response to mu, over the same information term.
InfoRatioReport marginal_info_ratio(const Belief& belief, const MarkovPolicy& mu,
                                    const PolicyMixture& nu, const McOptions& mc = {});

// Compressed counterparts: values are taken in each candidate's cell
// reference environment and the denominator is the compressed mutual
// information. The marginal variant keeps the best response computed in the
// true candidate, evaluated in the reference.
InfoRatioReport compressed_joint_ratio(const Belief& belief, const Partition& partition,
                                       const PolicyMixture& mu, const PolicyMixture& nu,
                                       const McOptions& mc = {});
InfoRatioReport compressed_marginal_ratio(const Belief& belief, const Partition& partition,
                                          const MarkovPolicy& mu, const PolicyMixture& nu,
                                          const McOptions& mc = {});

// Assembles a report from its two halves under the floor rule.
InfoRatioReport make_ratio_report(double numerator, double mi,
                                  std::optional<double> stderr_estimate = std::nullopt);

}  // namespace mgids
