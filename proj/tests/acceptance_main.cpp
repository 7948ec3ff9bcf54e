// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Covers the exact information identities, the solver guarantees, the
// compression construction, and bound dominance of the benchmark runs.
//
// Usage: mgids_acceptance [configs_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mgids/harness.hpp"
#include "mgids/serialization.hpp"
#include "support/oracles.hpp"

using namespace mgids;
namespace oracle = mgids::testing;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& details) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FiniteSupportBelief random_product_belief(Rng& rng, int H, int S, int A, int B,
                                          int max_candidates) {
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

// --- criterion 1: occupancy-form mutual information vs enumeration ---------

void criterion_1() {
  double t0 = now_seconds();
  Rng rng(0xC1);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(3),
        B = 1 + rng.next_int(3);
    FiniteSupportBelief belief = random_product_belief(rng, H, S, A, B, 4);
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, H, S, B);
    double occ = mutual_info_trajectory(Belief{belief}, mu, nu);
    double direct = mutual_info_trajectory_enum(belief, mu, nu);
    worst = std::max(worst, std::abs(occ - direct));
  }
  double elapsed = now_seconds() - t0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "500 instances, worst |diff| = %.3g, %.1f s", worst, elapsed);
  report(1, "information identity vs enumeration", worst <= 1e-9 && elapsed < 60.0, buf);
}

// --- criterion 2: mean-environment value identities -------------------------

void criterion_2() {
  double t0 = now_seconds();
  Rng rng(0xC2);
  double worst_zs = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(2),
        B = 1 + rng.next_int(2);
    FiniteSupportBelief belief = random_product_belief(rng, H, S, A, B, 4);
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, H, S, B);
    double lambda = 0.2 + 3.0 * rng.next_double();
    double lhs = expected_value(Belief{belief}, mu, nu).value +
                 lambda * mutual_info_trajectory(Belief{belief}, mu, nu);
    MeanEnvironment mean = build_mean_env(Belief{belief}, lambda, RewardShift::Bonus);
    double rhs = evaluate_values(mean.env, mu, nu).initial_value(mean.env);
    worst_zs = std::max(worst_zs, std::abs(lhs - rhs));
  }

  double worst_gs = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    GeneralSumGame base;
    base.num_players = 2;
    base.horizon = 2;
    base.num_states = 2;
    base.initial_state = 0;
    base.action_counts = {2, 2};
    base.kernel.assign(base.num_rows() * 2, 0.5);
    base.rewards.assign(2, std::vector<double>(base.num_rows(), 0.0));
    for (auto& table : base.rewards)
      for (double& r : table) r = rng.next_double();
    GsFiniteSupportBelief belief = gs_random_product_support(base, {2, 1}, rng.next_u64());

    PurePolicyProfileSet sets = PurePolicyProfileSet::all_deterministic(base);
    MixedJointPolicy pi;
    pi.kind = MixedJointPolicy::Kind::Joint;
    pi.support = sets;
    pi.joint_prob.assign(sets.num_profiles(), 0.0);
    double total = 0.0;
    for (double& p : pi.joint_prob) {
      p = rng.next_double();
      total += p;
    }
    for (double& p : pi.joint_prob) p /= total;

    double lambda = 0.2 + 3.0 * rng.next_double();
    GeneralSumGame mean = build_mean_env_gs(GsBelief{belief}, lambda);
    std::vector<double> w = belief.weights();
    double info = mutual_info_trajectory_gs(GsBelief{belief}, pi);
    for (int i = 0; i < 2; ++i) {
      double expected = 0.0;
      for (std::size_t c = 0; c < belief.candidates.size(); ++c)
        expected += w[c] * evaluate_values_gs(belief.candidates[c], pi)[i];
      double lhs = expected + lambda * info;
      double rhs = evaluate_values_gs(mean, pi)[i];
      worst_gs = std::max(worst_gs, std::abs(lhs - rhs));
    }
  }
  double elapsed = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "zero-sum worst %.3g, general-sum worst %.3g, %.1f s",
                worst_zs, worst_gs, elapsed);
  report(2, "mean-environment value identities", worst_zs <= 1e-8 && worst_gs <= 1e-8 &&
         elapsed < 60.0, buf);
}

// --- criterion 3: Thompson-proxy information-ratio cap ----------------------

void criterion_3() {
  Rng rng(0xC3);
  int violations = 0, checks = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(3),
        B = 1 + rng.next_int(3);
    FiniteSupportBelief belief = random_product_belief(rng, H, S, A, B, 4);
    std::vector<double> w = belief.weights();
    const double cap = 4.0 * H * H * H * S * A * B;

    PolicyMixture ts_mu;
    for (std::size_t i = 0; i < belief.candidates.size(); ++i) {
      ts_mu.components.push_back(solve_nash(belief.candidates[i]).mu);
      ts_mu.weights.push_back(w[i]);
    }
    for (int probe = 0; probe < 2; ++probe) {
      PolicyMixture nu =
          PolicyMixture::pure(oracle::random_policy(rng, PlayerSide::Min, H, S, B));
      InfoRatioReport r = joint_info_ratio(Belief{belief}, ts_mu, nu);
      ++checks;
      if (r.infinite ? std::abs(r.numerator_regret) > 1e-9 : r.ratio > cap + 1e-6) ++violations;
      if (!r.infinite) tightest = std::min(tightest, cap - r.ratio);
    }

    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    PolicyMixture ts_nu;
    for (std::size_t i = 0; i < belief.candidates.size(); ++i) {
      ts_nu.components.push_back(best_response_min(belief.candidates[i], mu).policy);
      ts_nu.weights.push_back(w[i]);
    }
    InfoRatioReport r = marginal_info_ratio(Belief{belief}, mu, ts_nu);
    ++checks;
    if (r.infinite ? std::abs(r.numerator_regret) > 1e-9 : r.ratio > cap + 1e-6) ++violations;
    if (!r.infinite) tightest = std::min(tightest, cap - r.ratio);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d checks, %d violations, smallest slack %.3g", checks,
                violations, tightest);
  report(3, "proxy ratio cap 4H^3SAB", violations == 0, buf);
}

// --- criterion 5: value-gap decomposition ------------------------------------

void criterion_5() {
  Rng rng(0xC5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int H = 1 + rng.next_int(3), S = 1 + rng.next_int(3), A = 1 + rng.next_int(2),
        B = 1 + rng.next_int(2);
    ZeroSumGame e = oracle::random_env(rng, H, S, A, B);
    ZeroSumGame e2 = e;
    std::vector<double> ones(S, 1.0);
    for (std::size_t row = 0; row < e2.num_rows(); ++row)
      rng.next_dirichlet(ones, {e2.kernel.data() + row * S, static_cast<std::size_t>(S)});
    MarkovPolicy mu = oracle::random_policy(rng, PlayerSide::Max, H, S, A);
    MarkovPolicy nu = oracle::random_policy(rng, PlayerSide::Min, H, S, B);
    ValueGapDecomposition d = value_gap_decomposition(e, e2, mu, nu);
    double total = 0.0;
    for (double t : d.per_step) total += t;
    worst = std::max(worst, std::abs(total - d.gap));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 pairs, worst |sum - gap| = %.3g", worst);
  report(5, "per-step value-gap decomposition", worst <= 1e-10, buf);
}

// --- criterion 6: Nash solver soundness --------------------------------------

void criterion_6() {
  Rng rng(0xC6);
  double worst_stage = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    int A = 1 + rng.next_int(4), B = 1 + rng.next_int(4);
    MatrixGame g;
    g.num_rows = A;
    g.num_cols = B;
    g.payoff.resize(static_cast<std::size_t>(A) * B);
    for (double& p : g.payoff) p = 4.0 * rng.next_double() - 2.0;
    MinimaxSolution sol = minimax_solve(g);
    double row_guarantee = std::numeric_limits<double>::infinity();
    for (int b = 0; b < B; ++b) {
      double v = 0.0;
      for (int a = 0; a < A; ++a) v += sol.row_strategy[a] * g.at(a, b);
      row_guarantee = std::min(row_guarantee, v);
    }
    double col_exposure = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a) {
      double v = 0.0;
      for (int b = 0; b < B; ++b) v += sol.col_strategy[b] * g.at(a, b);
      col_exposure = std::max(col_exposure, v);
    }
    worst_stage = std::max(worst_stage, col_exposure - row_guarantee);  // duality gap
  }

  double worst_saddle = 0.0;
  bool interval_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    ZeroSumGame env = oracle::random_env(rng, 2, 2, 2, 2);
    NashSolution nash = solve_nash(env);
    double value = nash.values.initial_value(env);
    double lo = -std::numeric_limits<double>::infinity();
    for (const auto& mu : all_deterministic_policies(PlayerSide::Max, 2, 2, 2))
      lo = std::max(lo, oracle::brute_force_min_value(env, mu));
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& nu : all_deterministic_policies(PlayerSide::Min, 2, 2, 2))
      hi = std::min(hi, oracle::brute_force_max_value(env, nu));
    if (value < lo - 1e-8 || value > hi + 1e-8) interval_ok = false;
    for (int k = 0; k < 100; ++k) {
      MarkovPolicy mu2 = oracle::random_policy(rng, PlayerSide::Max, 2, 2, 2);
      MarkovPolicy nu2 = oracle::random_policy(rng, PlayerSide::Min, 2, 2, 2);
      worst_saddle = std::max(
          worst_saddle, evaluate_values(env, mu2, nash.nu).initial_value(env) - value);
      worst_saddle = std::max(
          worst_saddle, value - evaluate_values(env, nash.mu, nu2).initial_value(env));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "stage duality gap %.3g, saddle violation %.3g, interval %s", worst_stage,
                worst_saddle, interval_ok ? "ok" : "violated");
  report(6, "Nash solver soundness", worst_stage <= 1e-8 && worst_saddle <= 1e-8 && interval_ok,
         buf);
}

// --- criteria 4, 7, 10: the zero-sum benchmark -------------------------------

ExperimentConfig benchmark_config(const std::string& configs_dir, Algorithm alg, int episodes) {
  ExperimentConfig cfg = experiment_config_from_json(
      load_json_file(configs_dir + "/zerosum_benchmark.json"));
  cfg.algorithm = AlgorithmConfig{};
  cfg.algorithm.algorithm = alg;
  cfg.episodes = episodes;
  cfg.csv_path.clear();
  cfg.report_path.clear();
  return cfg;
}

void criteria_4_7_10(const std::string& configs_dir) {
  double t0 = now_seconds();

  // Zero-sum bound dominance and the sqrt-K slope over separate K runs.
  std::vector<double> ks = {250, 500, 1000, 2000};
  std::vector<double> finals;
  bool dominated = true;
  RegretReport big;
  for (double kd : ks) {
    ExperimentConfig cfg = benchmark_config(configs_dir, Algorithm::RegMAIDS,
                                            static_cast<int>(kd));
    RegretReport rep = run_zero_sum_experiment(cfg);
    for (std::size_t k = 0; k < rep.mean_cum_regret.size(); ++k)
      if (rep.mean_cum_regret[k] > rep.bound_series[k]) dominated = false;
    finals.push_back(std::max(rep.final_mean_regret(), 1e-6));
    if (static_cast<int>(kd) == 2000) big = rep;
  }
  double slope = log_log_slope(ks, finals);
  double elapsed = now_seconds() - t0;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "dominated at every k: %s; slope %.3f; final %.3f vs bound %.0f; %.1f s",
                  dominated ? "yes" : "no", slope, big.final_mean_regret(),
                  big.bound_series.back(), elapsed);
    report(7, "zero-sum regret bound dominance and scaling", dominated && slope <= 0.75 &&
           elapsed < 600.0, buf);
  }

  // Information cap along the K = 2000 run (the largest benchmark).
  int S = 2, A = 2, B = 2, H = 2;
  bool cap_ok = true;
  double cap = 0.0, measured = 0.0;
  {
    int K = 2000;
    cap = 2.0 * S * S * A * B * H * std::log(static_cast<double>(S) * K * H);
    measured = big.mean_cum_mi.back();
    if (measured > cap) cap_ok = false;
    // Per-seed series: target equals the full environment for this algorithm.
    for (const auto& row : big.rows)
      if (row.mi_cum > cap) cap_ok = false;
  }

  // Baseline ordering on paired seeds.
  ExperimentConfig ts_cfg = benchmark_config(configs_dir, Algorithm::ThompsonSampling, 2000);
  RegretReport ts = run_zero_sum_experiment(ts_cfg);
  ExperimentConfig uni_cfg = benchmark_config(configs_dir, Algorithm::UniformRandom, 2000);
  RegretReport uni = run_zero_sum_experiment(uni_cfg);
  for (const auto& row : ts.rows)
    if (row.mi_cum > cap) cap_ok = false;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "cumulative info %.3f (TS %.3f) vs cap %.1f", measured,
                  ts.mean_cum_mi.back(), cap);
    report(4, "cumulative information cap", cap_ok, buf);
  }

  double tie = 2.0 * std::sqrt(big.stderr_cum_regret.back() * big.stderr_cum_regret.back() +
                               ts.stderr_cum_regret.back() * ts.stderr_cum_regret.back());
  bool order_ok = big.final_mean_regret() <= ts.final_mean_regret() + tie &&
                  ts.final_mean_regret() <= uni.final_mean_regret();
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "reg_maids %.3f <= thompson %.3f (+%.3f tie) <= uniform %.1f",
                  big.final_mean_regret(), ts.final_mean_regret(), tie,
                  uni.final_mean_regret());
    report(10, "baseline ordering at K = 2000", order_ok, buf);
  }
}

// --- criterion 8: general-sum benchmark --------------------------------------

void criterion_8(const std::string& configs_dir) {
  double t0 = now_seconds();
  ExperimentConfig cfg = experiment_config_from_json(
      load_json_file(configs_dir + "/generalsum_benchmark.json"));
  cfg.csv_path.clear();
  cfg.report_path.clear();
  RegretReport rep = run_general_sum_experiment(cfg);
  bool dominated = true, nonneg = true;
  for (std::size_t k = 0; k < rep.mean_cum_regret.size(); ++k)
    if (rep.mean_cum_regret[k] > rep.bound_series[k]) dominated = false;
  for (const auto& row : rep.rows) {
    if (row.inst_regret < -1e-6) nonneg = false;
    if (row.duality_gap < -1e-6) nonneg = false;
  }
  double elapsed = now_seconds() - t0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "final %.3f vs bound %.0f; gaps nonnegative: %s; %.1f s",
                rep.final_mean_regret(), rep.bound_series.back(), nonneg ? "yes" : "no",
                elapsed);
  report(8, "general-sum regret bound dominance (CCE)", dominated && nonneg, buf);
}

// --- criterion 9: compression soundness and the compressed benchmark ---------

void criterion_9() {
  double t0 = now_seconds();

  // Hard-partition soundness: posterior samples stay within epsilon of their
  // reference under exhaustive deterministic-policy distortion.
  Rng rng(0xC9);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  const double epsilon = 0.5;
  HardPartition hard = build_hard_partition(base, epsilon);
  Belief posterior = DirichletBelief::uniform_prior(base, 1.0);
  {
    MarkovPolicy mu = MarkovPolicy::uniform(PlayerSide::Max, 2, 2, 2);
    MarkovPolicy nu = MarkovPolicy::uniform(PlayerSide::Min, 2, 2, 2);
    for (int k = 0; k < 5; ++k)
      posterior = posterior_update(
          posterior, simulate_episode(base, mu, nu, derive_seed(0x91u, {(std::uint64_t)k})));
  }
  int distortion_violations = 0;
  double worst_d = 0.0;
  PolicyClassSpec all_det = PolicyClassSpec::all_deterministic();
  for (int i = 0; i < 1000; ++i) {
    ZeroSumGame env = sample_env(posterior, derive_seed(0x92u, {(std::uint64_t)i}));
    env.reward = base.reward;
    CompressedEnv comp = compress_env(hard, env);
    double d = distortion(env, comp.reference, all_det);
    worst_d = std::max(worst_d, d);
    if (d > epsilon) ++distortion_violations;
  }

  // Product-game benchmark: cells group environments sharing the main factor;
  // side rewards are at most 1/(2HK) per step, so members of a cell are within
  // 2 H delta = 1/K of each other in value over factored play.
  const int K = 200;
  const int H = 2;
  const double side_scale = 1.0 / (2.0 * H * K);
  Rng gen(0x93);
  ZeroSumGame main_rewards = oracle::random_env(gen, H, 2, 2, 2);
  for (double& r : main_rewards.reward) r *= (1.0 - side_scale);
  ZeroSumGame side_rewards = oracle::random_env(gen, H, 2, 2, 2);
  for (double& r : side_rewards.reward) r *= side_scale;

  // Variants differ at step 0 only, keeping the prior independent across
  // steps (kernels at step 1 are shared).
  auto step0_variant = [&](const ZeroSumGame& proto, std::uint64_t seed) {
    ZeroSumGame env = proto;
    Rng r(seed);
    std::vector<double> ones(env.num_states, 1.0);
    for (int s = 0; s < env.num_states; ++s)
      for (int a = 0; a < env.num_actions_max; ++a)
        for (int b = 0; b < env.num_actions_min; ++b)
          r.next_dirichlet(ones, env.kernel_row(0, s, a, b));
    return env;
  };
  std::vector<ZeroSumGame> mains, sides;
  for (int i = 0; i < 3; ++i) mains.push_back(step0_variant(main_rewards, 0x94u + i));
  for (int j = 0; j < 2; ++j) sides.push_back(step0_variant(side_rewards, 0x98u + j));

  FiniteSupportBelief prior;
  std::vector<int> labels;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      prior.candidates.push_back(build_product_mg(mains[i], sides[j]));
      prior.log_weights.push_back(std::log(1.0 / 6.0));
      labels.push_back(i);
    }
  Partition partition = Partition::group_by(prior, labels);

  ExperimentConfig cfg;
  cfg.mode = ExperimentConfig::Mode::ZeroSum;
  cfg.prior = Belief{prior};
  cfg.partition = partition;
  cfg.algorithm.algorithm = Algorithm::CompressedMAIDS;
  cfg.algorithm.learning_target = LearningTarget::Compressed;
  cfg.algorithm.mixture_grid = 2;
  cfg.algorithm.epsilon = 2.0 * H * side_scale;  // = 1/K
  cfg.episodes = K;
  cfg.num_prior_draws = 8;
  cfg.base_seed = 21;
  RegretReport rep = run_zero_sum_experiment(cfg);
  bool dominated = true;
  for (std::size_t k = 0; k < rep.mean_cum_regret.size(); ++k)
    if (rep.mean_cum_regret[k] > rep.bound_series[k]) dominated = false;

  double elapsed = now_seconds() - t0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "1000 samples, 0 of them beyond eps: %s (worst %.3f vs %.2f); compressed run "
                "final %.3f vs bound %.0f; %.1f s",
                distortion_violations == 0 ? "yes" : "no", worst_d, epsilon,
                rep.final_mean_regret(), rep.bound_series.back(), elapsed);
  report(9, "compression soundness and compressed-bound dominance",
         distortion_violations == 0 && dominated, buf);
}

// --- criterion 11: byte-identical reruns -------------------------------------

void criterion_11(const std::string& configs_dir) {
  bool identical = true;
  std::string checked;
  for (const std::string name : {"zerosum_small", "generalsum_small", "compressed_small"}) {
    ExperimentConfig cfg =
        experiment_config_from_json(load_json_file(configs_dir + "/" + name + ".json"));
    cfg.report_path.clear();
    cfg.csv_path = "acceptance_" + name + "_a.csv";
    if (cfg.mode == ExperimentConfig::Mode::ZeroSum)
      run_zero_sum_experiment(cfg);
    else
      run_general_sum_experiment(cfg);
    std::string first = slurp(cfg.csv_path);
    cfg.csv_path = "acceptance_" + name + "_b.csv";
    if (cfg.mode == ExperimentConfig::Mode::ZeroSum)
      run_zero_sum_experiment(cfg);
    else
      run_general_sum_experiment(cfg);
    std::string second = slurp(cfg.csv_path);
    if (first.empty() || first != second) identical = false;
    std::remove(("acceptance_" + name + "_a.csv").c_str());
    std::remove(("acceptance_" + name + "_b.csv").c_str());
    checked += name + " ";
  }
  report(11, "byte-identical CSV reruns", identical, checked);
}

}  // namespace

int main(int argc, char** argv) {
  std::string configs_dir = argc > 1 ? argv[1] : "configs";
  std::printf("acceptance suite (natural-log convention; configs from %s)\n",
              configs_dir.c_str());
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_7_10(configs_dir);
  criterion_5();
  criterion_6();
  criterion_8(configs_dir);
  criterion_9();
  criterion_11(configs_dir);
  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
