#include <doctest.h>

#include <cmath>

#include "mgids/info_ratio.hpp"
#include "mgids/stats.hpp"
#include "support/oracles.hpp"

using namespace mgids;
namespace oracle = mgids::testing;

namespace {

// Step-product finite support over random dims; the exact identities assume
// independence across steps.
FiniteSupportBelief random_belief(Rng& rng, int H, int S, int A, int B, int max_candidates) {
  ZeroSumGame base = oracle::random_env(rng, H, S, A, B);
  std::vector<int> per_step(H, 1);
  int total = 1;
  for (int h = 0; h < H && total < max_candidates; ++h) {
    int m = 1 + rng.next_int(2);
    while (total * m > max_candidates) --m;
    per_step[h] = std::max(1, m);
    total *= per_step[h];
  }
  if (total == 1) per_step[0] = std::min(2, max_candidates);
  return random_product_support(base, per_step, rng.next_u64());
}

FiniteSupportBelief point_mass_belief(Rng& rng) {
  ZeroSumGame env = oracle::random_env(rng, 2, 2, 2, 2);
  FiniteSupportBelief b;
  b.candidates = {env};
  b.log_weights = {0.0};
  return b;
}

}  // namespace

TEST_SUITE("info_ratio") {

TEST_CASE("mutual information vanishes without uncertainty") {
  Rng rng(1);
  FiniteSupportBelief b = point_mass_belief(rng);
  MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
  MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
  CHECK(mutual_info_trajectory(Belief{b}, mu, nu) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mutual_info_trajectory_enum(b, mu, nu) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("identical kernels with different labels carry no information") {
  Rng rng(2);
  ZeroSumGame env = oracle::random_env(rng, 2, 2, 2, 2);
  FiniteSupportBelief b;
  b.candidates = {env, env, env};
  b.log_weights = {std::log(0.2), std::log(0.5), std::log(0.3)};
  MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
  MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
  CHECK(mutual_info_trajectory(Belief{b}, mu, nu) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mutual_info_trajectory_enum(b, mu, nu) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("perfect one-step identification yields the weight entropy") {
  // Two candidates with disjoint next-state supports, H = 1.
  ZeroSumGame e1 = ZeroSumGame::zeros(1, 2, 1, 1, 0);
  e1.kernel_row(0, 0, 0, 0)[0] = 1.0;
  e1.kernel_row(0, 1, 0, 0)[0] = 1.0;
  ZeroSumGame e2 = e1;
  e2.kernel_row(0, 0, 0, 0)[0] = 0.0;
  e2.kernel_row(0, 0, 0, 0)[1] = 1.0;
  for (double w0 : {0.5, 0.2, 0.9}) {
    FiniteSupportBelief b;
    b.candidates = {e1, e2};
    b.log_weights = {std::log(w0), std::log(1.0 - w0)};
    MarkovPolicy mu = MarkovPolicy::uniform(PlayerSide::Max, 1, 2, 1);
    MarkovPolicy nu = MarkovPolicy::uniform(PlayerSide::Min, 1, 2, 1);
    double expected = -(w0 * std::log(w0) + (1 - w0) * std::log(1 - w0));
    CHECK(mutual_info_trajectory_enum(b, mu, nu) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mutual_info_trajectory(Belief{b}, mu, nu) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("occupancy form matches enumeration on random product beliefs") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(2),
        B = 1 + rng.next_int(2);
    FiniteSupportBelief b = random_belief(rng, H, S, A, B, 4);
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, H, S, B);
    double occ_form = mutual_info_trajectory(Belief{b}, mu, nu);
    double enum_form = mutual_info_trajectory_enum(b, mu, nu);
    CHECK(occ_form == doctest::Approx(enum_form).epsilon(1e-9));
    CHECK(occ_form >= 0.0);
  }
}

TEST_CASE("posterior updates preserve the occupancy identity") {
  Rng rng(5);
  FiniteSupportBelief prior = random_belief(rng, 2, 2, 2, 2, 4);
  Belief belief = prior;
  MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
  MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
  for (int k = 0; k < 5; ++k) {
    Trajectory traj = simulate_episode(prior.candidates[0], mu, nu,
                                       derive_seed(7, {static_cast<std::uint64_t>(k)}));
    belief = posterior_update(belief, traj);
    const auto& fs = std::get<FiniteSupportBelief>(belief);
    CHECK(mutual_info_trajectory(belief, mu, nu) ==
          doctest::Approx(mutual_info_trajectory_enum(fs, mu, nu)).epsilon(1e-9));
  }
}

TEST_CASE("mean-environment value identity") {
  // Expected value plus lambda times information equals the value in the
  // bonus mean environment, for any policies and lambda.
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(2) + 1, A = 1 + rng.next_int(2),
        B = 1 + rng.next_int(2);
    FiniteSupportBelief b = random_belief(rng, H, S, A, B, 4);
    Belief belief = b;
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, H, S, B);
    double lambda = 3.0 * rng.next_double();

    double lhs = expected_value(belief, mu, nu).value +
                 lambda * mutual_info_trajectory(belief, mu, nu);
    MeanEnvironment mean = build_mean_env(belief, lambda, RewardShift::Bonus);
    double rhs = evaluate_values(mean.env, mu, nu).initial_value(mean.env);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));

    // Penalty side: expected value minus lambda~ times information.
    double lhs2 = expected_value(belief, mu, nu).value -
                  lambda * mutual_info_trajectory(belief, mu, nu);
    MeanEnvironment pen = build_mean_env(belief, lambda, RewardShift::Penalty);
    double rhs2 = evaluate_values(pen.env, mu, nu).initial_value(pen.env);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-8));
  }
}

TEST_CASE("joint ratio basics") {
  Rng rng(13);
  SUBCASE("point mass with the Nash policy gives zero ratio") {
    FiniteSupportBelief b = point_mass_belief(rng);
    NashSolution nash = solve_nash(b.candidates[0]);
    PolicyMixture mu = PolicyMixture::pure(nash.mu);
    PolicyMixture nu = PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2));
    InfoRatioReport r = joint_info_ratio(Belief{b}, mu, nu);
    CHECK(r.denominator_mi <= kMiFloor);
    CHECK(!r.infinite);
    CHECK(r.ratio == doctest::Approx(0.0));
  }
  SUBCASE("ratio is nonnegative even when the numerator is negative") {
    int negatives = 0;
    for (int trial = 0; trial < 40; ++trial) {
      FiniteSupportBelief b = random_belief(rng, 2, 2, 2, 2, 4);
      PolicyMixture mu = PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2));
      PolicyMixture nu = PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2));
      InfoRatioReport r = joint_info_ratio(Belief{b}, mu, nu);
      if (r.numerator_regret < 0.0) ++negatives;
      if (!r.infinite) CHECK(r.ratio >= 0.0);
    }
    CHECK(negatives > 0);  // the numerator really can go negative
  }
}

TEST_CASE("thompson proxy ratios respect the 4 H^3 S A B cap") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(3),
        B = 1 + rng.next_int(3);
    FiniteSupportBelief b = random_belief(rng, H, S, A, B, 4);
    std::vector<double> w = b.weights();
    const double cap = 4.0 * H * H * H * S * A * B;

    PolicyMixture ts_mu;
    for (std::size_t i = 0; i < b.candidates.size(); ++i) {
      ts_mu.components.push_back(solve_nash(b.candidates[i]).mu);
      ts_mu.weights.push_back(w[i]);
    }
    for (int probe = 0; probe < 3; ++probe) {
      PolicyMixture nu = PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Min, H, S, B));
      InfoRatioReport joint = joint_info_ratio(Belief{b}, ts_mu, nu);
      if (joint.infinite)
        CHECK(std::abs(joint.numerator_regret) <= 1e-9);
      else
        CHECK(joint.ratio <= cap + 1e-6);
    }

    // Min-player proxy: per-candidate best responses to a fixed max policy.
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    PolicyMixture ts_nu;
    for (std::size_t i = 0; i < b.candidates.size(); ++i) {
      ts_nu.components.push_back(best_response_min(b.candidates[i], mu).policy);
      ts_nu.weights.push_back(w[i]);
    }
    InfoRatioReport marginal = marginal_info_ratio(Belief{b}, mu, ts_nu);
    CHECK(marginal.numerator_regret >= -1e-12);
    if (marginal.infinite)
      CHECK(std::abs(marginal.numerator_regret) <= 1e-9);
    else
      CHECK(marginal.ratio <= cap + 1e-6);
  }
}

TEST_CASE("marginal ratio basics") {
  Rng rng(19);
  SUBCASE("point mass with the best response gives zero numerator") {
    FiniteSupportBelief b = point_mass_belief(rng);
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
    PolicyMixture nu = PolicyMixture::pure(best_response_min(b.candidates[0], mu).policy);
    InfoRatioReport r = marginal_info_ratio(Belief{b}, mu, nu);
    CHECK(r.numerator_regret == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("numerator is always nonnegative") {
    for (int trial = 0; trial < 30; ++trial) {
      FiniteSupportBelief b = random_belief(rng, 2, 2, 2, 2, 4);
      MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
      PolicyMixture nu = PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2));
      InfoRatioReport r = marginal_info_ratio(Belief{b}, mu, nu);
      CHECK(r.numerator_regret >= -1e-12);
    }
  }
}

TEST_CASE("compressed information and ratios") {
  Rng rng(23);
  FiniteSupportBelief b = random_belief(rng, 2, 2, 2, 2, 4);
  MarkovPolicy mu_p = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
  MarkovPolicy nu_p = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
  PolicyMixture mu = PolicyMixture::pure(mu_p);
  PolicyMixture nu = PolicyMixture::pure(nu_p);

  SUBCASE("one cell carries zero information and flags the ratio infinite") {
    Partition single = Partition::single_cell(b);
    CHECK(mutual_info_compressed(Belief{b}, single, mu_p, nu_p) ==
          doctest::Approx(0.0).epsilon(1e-14));
    InfoRatioReport r = compressed_joint_ratio(Belief{b}, single, mu, nu);
    if (std::abs(r.numerator_regret) > 1e-12) CHECK(r.infinite);
  }

  SUBCASE("singleton cells recover the full-environment quantities") {
    Partition identity = Partition::identity(b);
    CHECK(mutual_info_compressed(Belief{b}, identity, mu_p, nu_p) ==
          doctest::Approx(mutual_info_trajectory_enum(b, mu_p, nu_p)).epsilon(1e-9));
    InfoRatioReport cj = compressed_joint_ratio(Belief{b}, identity, mu, nu);
    InfoRatioReport j = joint_info_ratio(Belief{b}, mu, nu);
    CHECK(cj.numerator_regret == doctest::Approx(j.numerator_regret).epsilon(1e-9));
    CHECK(cj.denominator_mi == doctest::Approx(j.denominator_mi).epsilon(1e-9));
    InfoRatioReport cm = compressed_marginal_ratio(Belief{b}, identity, mu_p, nu);
    InfoRatioReport m = marginal_info_ratio(Belief{b}, mu_p, nu);
    CHECK(cm.numerator_regret == doctest::Approx(m.numerator_regret).epsilon(1e-9));
    CHECK(cm.denominator_mi == doctest::Approx(m.denominator_mi).epsilon(1e-9));
  }

  SUBCASE("data processing: coarser targets never gain information") {
    for (int trial = 0; trial < 30; ++trial) {
      FiniteSupportBelief belief = random_belief(rng, 2, 2, 2, 2, 4);
      std::vector<int> labels(belief.candidates.size());
      for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = rng.next_int(2);
      Partition grouped = Partition::group_by(belief, labels);
      MarkovPolicy mu2 = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
      MarkovPolicy nu2 = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
      double compressed = mutual_info_compressed(Belief{belief}, grouped, mu2, nu2);
      double full = mutual_info_trajectory_enum(belief, mu2, nu2);
      CHECK(compressed >= -1e-12);
      CHECK(compressed <= full + 1e-9);
      CHECK(compressed <= compressed_entropy(belief, grouped) + 1e-9);
    }
  }

  SUBCASE("hard partitions keep compressed numerators within 2 epsilon") {
    const double epsilon = 0.6;
    HardPartition hard = build_hard_partition(b.candidates[0], epsilon);
    Partition part = Partition::from_hard(hard, b);
    InfoRatioReport cj = compressed_joint_ratio(Belief{b}, part, mu, nu);
    InfoRatioReport j = joint_info_ratio(Belief{b}, mu, nu);
    CHECK(std::abs(cj.numerator_regret - j.numerator_regret) <= 2.0 * epsilon + 1e-9);
    InfoRatioReport cm = compressed_marginal_ratio(Belief{b}, part, mu_p, nu);
    InfoRatioReport m = marginal_info_ratio(Belief{b}, mu_p, nu);
    CHECK(std::abs(cm.numerator_regret - m.numerator_regret) <= 2.0 * epsilon + 1e-9);
  }
}

TEST_CASE("mixture information is bilinear in the weights") {
  Rng rng(29);
  FiniteSupportBelief b = random_belief(rng, 2, 2, 2, 2, 4);
  PolicyMixture mu;
  mu.components = {oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2),
                   oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2)};
  mu.weights = {0.3, 0.7};
  PolicyMixture nu;
  nu.components = {oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2),
                   oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2)};
  nu.weights = {0.6, 0.4};

  double mixture_mi = mutual_info_trajectory(Belief{b}, mu, nu);
  double expected = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      expected += mu.weights[i] * nu.weights[j] *
                  mutual_info_trajectory(Belief{b}, mu.components[i], nu.components[j]);
  CHECK(mixture_mi == doctest::Approx(expected).epsilon(1e-12));

  // The same bilinearity drives the compressed computation; identity cells
  // must then agree with the pairwise full-environment enumeration.
  Partition identity = Partition::identity(b);
  InfoRatioReport cj = compressed_joint_ratio(Belief{b}, identity, mu, nu);
  double enum_expected = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      enum_expected += mu.weights[i] * nu.weights[j] *
                       mutual_info_trajectory_enum(b, mu.components[i], nu.components[j]);
  CHECK(cj.denominator_mi == doctest::Approx(enum_expected).epsilon(1e-9));
}

TEST_CASE("dirichlet beliefs reach compressed quantities through empirical supports") {
  Rng rng(31);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  DirichletBelief d = DirichletBelief::uniform_prior(base, 1.0);
  MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
  MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);

  // The direct call refuses continuous beliefs and points at the sampler.
  FiniteSupportBelief dummy;
  dummy.candidates = {base};
  dummy.log_weights = {0.0};
  Partition single = Partition::single_cell(dummy);
  CHECK_THROWS_AS(mutual_info_compressed(Belief{d}, single, mu, nu, {32, 1}),
                  std::invalid_argument);

  // Declared sample count: empirical support + hard classification.
  FiniteSupportBelief empirical = empirical_support(d, 64, 99);
  HardPartition hard = build_hard_partition(base, 0.8);
  Partition part = Partition::from_hard(hard, empirical);
  double mi = mutual_info_compressed(Belief{empirical}, part, mu, nu);
  CHECK(mi >= 0.0);
  CHECK(mi <= compressed_entropy(empirical, part) + 1e-9);
  CHECK(mi <= mutual_info_trajectory_enum(empirical, mu, nu) + 1e-9);
}

TEST_CASE("episode information adds up over a run (chain rule)") {
  // Two-episode check on an enumerable instance: the expected sum of
  // per-episode information equals the information carried by the pair of
  // trajectories about the environment.
  ZeroSumGame e1 = ZeroSumGame::zeros(1, 2, 1, 1, 0);
  e1.kernel_row(0, 0, 0, 0)[0] = 0.8;
  e1.kernel_row(0, 0, 0, 0)[1] = 0.2;
  e1.kernel_row(0, 1, 0, 0)[0] = 1.0;
  ZeroSumGame e2 = e1;
  e2.kernel_row(0, 0, 0, 0)[0] = 0.3;
  e2.kernel_row(0, 0, 0, 0)[1] = 0.7;
  FiniteSupportBelief prior;
  prior.candidates = {e1, e2};
  prior.log_weights = {std::log(0.4), std::log(0.6)};
  MarkovPolicy mu = MarkovPolicy::uniform(PlayerSide::Max, 1, 2, 1);
  MarkovPolicy nu = MarkovPolicy::uniform(PlayerSide::Min, 1, 2, 1);

  std::vector<double> w = prior.weights();
  // Episode 1 information at the prior.
  double total = mutual_info_trajectory_enum(prior, mu, nu);
  // Episode 2: weight each next-state outcome by its marginal likelihood.
  double direct = 0.0;  // I(env; T1, T2) by enumeration over outcome pairs
  for (int s1 = 0; s1 < 2; ++s1) {
    double p1_mix = w[0] * e1.kernel_row(0, 0, 0, 0)[s1] + w[1] * e2.kernel_row(0, 0, 0, 0)[s1];
    Trajectory traj;
    traj.steps.push_back({0, 0, 0, e1.reward_at(0, 0, 0, 0)});
    traj.final_state = s1;
    Belief posterior = posterior_update(Belief{prior}, traj);
    total += p1_mix *
             mutual_info_trajectory_enum(std::get<FiniteSupportBelief>(posterior), mu, nu);
    for (int s2 = 0; s2 < 2; ++s2) {
      double joint1 = w[0] * e1.kernel_row(0, 0, 0, 0)[s1] * e1.kernel_row(0, 0, 0, 0)[s2];
      double joint2 = w[1] * e2.kernel_row(0, 0, 0, 0)[s1] * e2.kernel_row(0, 0, 0, 0)[s2];
      double mix = joint1 + joint2;
      if (joint1 > 0.0) direct += joint1 * std::log((joint1 / w[0]) / mix);
      if (joint2 > 0.0) direct += joint2 * std::log((joint2 / w[1]) / mix);
    }
  }
  CHECK(total == doctest::Approx(direct).epsilon(1e-6));
}

}  // TEST_SUITE
