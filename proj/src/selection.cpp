#include "mgids/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/stats.hpp"

namespace mgids {

void AlgorithmConfig::validate() const {
  if (lambda < 0.0 || lambda_tilde < 0.0)
    throw std::invalid_argument("regularizer weights must be nonnegative");
  if (candidate_count <= 0) throw std::invalid_argument("candidate_count must be positive");
  if (mixture_grid <= 0) throw std::invalid_argument("mixture_grid must be positive");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  if (learning_target == LearningTarget::Compressed &&
      algorithm != Algorithm::CompressedMAIDS)
    throw std::invalid_argument("compressed learning target requires CompressedMAIDS");
}

double AlgorithmConfig::zero_sum_lambda(int S, int H, int K) {
  return std::sqrt(2.0 * K * H * H / (S * std::log(static_cast<double>(S) * K * H)));
}

double AlgorithmConfig::general_sum_lambda(int S, int H, int K) {
  return std::sqrt(static_cast<double>(H) * K * K /
                   (S * std::log(static_cast<double>(S) * K * H)));
}

MarkovPolicy ts_select_max(const Belief& belief, std::uint64_t rng_seed) {
  return solve_nash(sample_env(belief, rng_seed)).mu;
}

MarkovPolicy ts_select_min(const Belief& belief, const MarkovPolicy& mu,
                           std::uint64_t rng_seed) {
  return best_response_min(sample_env(belief, rng_seed), mu).policy;
}

MixtureBestResponse best_response_min_to_mixture(const ZeroSumGame& env, const PolicyMixture& mu,
                                                 std::size_t guard) {
  mu.validate();
  if (mu.components.size() == 1) {
    BestResponse br = best_response_min(env, mu.components.front());
    return {br.policy, br.values.initial_value(env)};
  }
  const int H = env.horizon, S = env.num_states, A = env.num_actions_max,
            B = env.num_actions_min;
  const int nc = static_cast<int>(mu.components.size());
  const std::size_t prefix_cells = static_cast<std::size_t>(std::max(0, H - 1)) * S;
  double count = std::pow(static_cast<double>(B), static_cast<double>(prefix_cells));
  if (count > static_cast<double>(guard))
    throw EnumerationTooLarge("mixture best response exceeds enumeration guard");

  std::vector<int> prefix(prefix_cells, 0);
  std::vector<int> best_actions;
  double best_value = std::numeric_limits<double>::infinity();

  // occ[c][s]: mass of (component, state) pairs; propagated under the prefix.
  std::vector<double> occ(static_cast<std::size_t>(nc) * S), next(occ.size());
  for (;;) {
    std::fill(occ.begin(), occ.end(), 0.0);
    for (int c = 0; c < nc; ++c) occ[c * S + env.initial_state] = mu.weights[c];
    double reward_so_far = 0.0;
    for (int h = 0; h + 1 < H; ++h) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int c = 0; c < nc; ++c) {
        for (int s = 0; s < S; ++s) {
          double mass = occ[c * S + s];
          if (mass == 0.0) continue;
          int b = prefix[static_cast<std::size_t>(h) * S + s];
          auto mu_row = mu.components[c].row(h, s);
          for (int a = 0; a < A; ++a) {
            double m = mass * mu_row[a];
            if (m == 0.0) continue;
            reward_so_far += m * env.reward_at(h, s, a, b);
            auto p = env.kernel_row(h, s, a, b);
            for (int s2 = 0; s2 < S; ++s2) next[c * S + s2] += m * p[s2];
          }
        }
      }
      std::swap(occ, next);
    }
    // Greedy last step: each state independently picks the cheapest action.
    double last = 0.0;
    std::vector<int> last_actions(S, 0);
    for (int s = 0; s < S; ++s) {
      double best_b = std::numeric_limits<double>::infinity();
      int chosen = 0;
      for (int b = 0; b < B; ++b) {
        double val = 0.0;
        for (int c = 0; c < nc; ++c) {
          double mass = occ[c * S + s];
          if (mass == 0.0) continue;
          auto mu_row = mu.components[c].row(H - 1, s);
          for (int a = 0; a < A; ++a)
            if (mu_row[a] > 0.0) val += mass * mu_row[a] * env.reward_at(H - 1, s, a, b);
        }
        if (val < best_b - 1e-15) {
          best_b = val;
          chosen = b;
        }
      }
      if (!std::isfinite(best_b)) best_b = 0.0;
      last += best_b;
      last_actions[s] = chosen;
    }
    double total = reward_so_far + last;
    if (total < best_value - 1e-15) {
      best_value = total;
      best_actions.assign(prefix.begin(), prefix.end());
      best_actions.insert(best_actions.end(), last_actions.begin(), last_actions.end());
    }

    std::size_t i = 0;
    while (i < prefix_cells && ++prefix[i] == B) prefix[i++] = 0;
    if (prefix_cells == 0 || i == prefix_cells) break;
  }
  MixtureBestResponse out;
  out.policy = MarkovPolicy::deterministic(PlayerSide::Min, H, S, B, best_actions);
  out.value = best_value;
  return out;
}

namespace {

bool policies_equal(const MarkovPolicy& a, const MarkovPolicy& b) {
  if (a.dist.size() != b.dist.size()) return false;
  for (std::size_t i = 0; i < a.dist.size(); ++i)
    if (std::abs(a.dist[i] - b.dist[i]) > 1e-12) return false;
  return true;
}

void push_unique(std::vector<MarkovPolicy>& set, MarkovPolicy policy) {
  for (const auto& p : set)
    if (policies_equal(p, policy)) return;
  set.push_back(std::move(policy));
}

// All weight vectors with entries k/G summing to 1, in lexicographic order.
std::vector<std::vector<double>> simplex_grid(int components, int resolution) {
  std::vector<std::vector<double>> grid;
  std::vector<int> comp(components, 0);
  comp[0] = resolution;
  auto emit = [&](const std::vector<int>& c) {
    std::vector<double> w(components);
    for (int i = 0; i < components; ++i) w[i] = static_cast<double>(c[i]) / resolution;
    grid.push_back(std::move(w));
  };
  std::vector<int> cur(components, 0);
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == components - 1) {
      cur[idx] = left;
      emit(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[idx] = k;
      self(self, idx + 1, left - k);
    }
  };
  rec(rec, 0, resolution);
  return grid;
}

struct CandidateData {
  std::vector<MarkovPolicy> mus;
  std::vector<MarkovPolicy> nus;
  // Bilinear coefficient matrices over (mu component, nu component):
  std::vector<double> joint_num;     // numerator of the joint ratio
  std::vector<double> pair_value;    // expected value of the pair (target env)
  std::vector<double> mi;            // information term of the pair
  double marginal_const = 0.0;       // expected best-response value, mixture-specific
};

struct GridChoice {
  std::vector<double> weights;
  double objective = 0.0;
  double numerator = 0.0;
  bool fallback = false;
};

double bilinear(const std::vector<double>& m, const std::vector<double>& qa,
                const std::vector<double>& qb) {
  const std::size_t nb = qb.size();
  double total = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    if (qa[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < nb; ++j) row += m[i * nb + j] * qb[j];
    total += qa[i] * row;
  }
  return total;
}

// Step 1: minimize over the max-side grid the worst-case joint ratio over the
// min-side grid. Infinite ratios dominate; if every choice is infinite the
// numerator minimax decides.
GridChoice choose_max_mixture(const CandidateData& data, int resolution) {
  const int na = static_cast<int>(data.mus.size());
  const int nb = static_cast<int>(data.nus.size());
  auto grid_a = simplex_grid(na, resolution);
  auto grid_b = simplex_grid(nb, resolution);

  GridChoice best;
  bool have_best = false;
  bool best_infinite = true;
  double best_worst_num = std::numeric_limits<double>::infinity();
  for (const auto& qa : grid_a) {
    double worst_ratio = 0.0;
    bool infinite = false;
    double worst_num = 0.0;
    for (const auto& qb : grid_b) {
      double num = bilinear(data.joint_num, qa, qb);
      double mi = bilinear(data.mi, qa, qb);
      InfoRatioReport r = make_ratio_report(num, mi);
      worst_num = std::max(worst_num, std::abs(num));
      if (r.infinite) {
        infinite = true;
      } else {
        worst_ratio = std::max(worst_ratio, r.ratio);
      }
    }
    bool better;
    if (!have_best) {
      better = true;
    } else if (infinite != best_infinite) {
      better = !infinite;
    } else if (infinite) {
      better = worst_num < best_worst_num - 1e-15;
    } else {
      better = worst_ratio < best.objective - 1e-15 ||
               (worst_ratio < best.objective + 1e-15 && worst_num < best_worst_num - 1e-15);
    }
    if (better) {
      have_best = true;
      best.weights = qa;
      best.objective = worst_ratio;
      best.numerator = worst_num;
      best_infinite = infinite;
      best_worst_num = worst_num;
    }
  }
  best.fallback = best_infinite;
  if (best.fallback) best.objective = std::numeric_limits<double>::infinity();
  return best;
}

// Step 2: minimize the marginal ratio over the min-side grid with the chosen
// max mixture fixed.
GridChoice choose_min_mixture(const CandidateData& data, const std::vector<double>& qa,
                              int resolution) {
  const int nb = static_cast<int>(data.nus.size());
  auto grid_b = simplex_grid(nb, resolution);

  GridChoice best;
  bool have_best = false;
  bool best_infinite = true;
  double best_abs_num = std::numeric_limits<double>::infinity();
  for (const auto& qb : grid_b) {
    double num = bilinear(data.pair_value, qa, qb) - data.marginal_const;
    double mi = bilinear(data.mi, qa, qb);
    InfoRatioReport r = make_ratio_report(num, mi);
    bool better;
    if (!have_best) {
      better = true;
    } else if (r.infinite != best_infinite) {
      better = !r.infinite;
    } else if (r.infinite) {
      better = std::abs(num) < best_abs_num - 1e-15;
    } else {
      better = r.ratio < best.objective - 1e-15 ||
               (r.ratio < best.objective + 1e-15 && std::abs(num) < best_abs_num - 1e-15);
    }
    if (better) {
      have_best = true;
      best.weights = qb;
      best.objective = r.infinite ? std::numeric_limits<double>::infinity() : r.ratio;
      best.numerator = num;
      best_infinite = r.infinite;
      best_abs_num = std::abs(num);
    }
  }
  best.fallback = best_infinite;
  return best;
}

// Candidate environments feeding the policy sets: every candidate of a small
// finite support, otherwise posterior samples.
std::vector<ZeroSumGame> candidate_envs(const Belief& belief, const AlgorithmConfig& cfg,
                                        std::uint64_t rng_seed) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    if (static_cast<int>(fs->candidates.size()) <= cfg.candidate_count) {
      std::vector<ZeroSumGame> envs;
      std::vector<double> w = fs->weights();
      for (std::size_t i = 0; i < fs->candidates.size(); ++i)
        if (w[i] > 1e-15) envs.push_back(fs->candidates[i]);
      return envs;
    }
  }
  std::vector<ZeroSumGame> envs;
  envs.reserve(cfg.candidate_count);
  for (int i = 0; i < cfg.candidate_count; ++i)
    envs.push_back(
        sample_env(belief, derive_seed(rng_seed, {0xca4du, static_cast<std::uint64_t>(i)})));
  return envs;
}

// Expectation over the belief of per-candidate functionals, exact for finite
// support and Monte Carlo otherwise.
struct BeliefExpectation {
  std::vector<ZeroSumGame> envs;   // weighting support
  std::vector<double> weights;
};

BeliefExpectation expectation_support(const Belief& belief, const AlgorithmConfig& cfg,
                                      std::uint64_t rng_seed) {
  BeliefExpectation out;
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    out.envs = fs->candidates;
    out.weights = fs->weights();
    return out;
  }
  int n = cfg.mc_samples > 0 ? cfg.mc_samples : cfg.candidate_count;
  out.envs.reserve(n);
  for (int i = 0; i < n; ++i)
    out.envs.push_back(
        sample_env(belief, derive_seed(rng_seed, {0xeb01u, static_cast<std::uint64_t>(i)})));
  out.weights.assign(n, 1.0 / n);
  return out;
}

SelectionDiagnostics make_ratio_diagnostics(const GridChoice& mu_choice,
                                            const GridChoice& nu_choice, double mi_selected,
                                            int mu_comp, int nu_comp) {
  SelectionDiagnostics diag;
  diag.rule = mu_choice.fallback || nu_choice.fallback ? "numerator-fallback" : "info-ratio";
  diag.mu_objective = mu_choice.objective;
  diag.nu_objective = nu_choice.objective;
  diag.mu_numerator = mu_choice.numerator;
  diag.nu_numerator = nu_choice.numerator;
  diag.mi_selected = mi_selected;
  diag.mu_component = mu_comp;
  diag.nu_component = nu_comp;
  return diag;
}

// Shared two-step scheme for the full and compressed learning targets. When
// `partition` is null the target is the environment itself.
EpisodePolicyPair ratio_select(const Belief& belief, const AlgorithmConfig& cfg,
                               const Partition* partition, std::uint64_t rng_seed) {
  // Candidate policy sets: per-environment Nash policies, their deterministic
  // best responses, and the Nash pair of the plain mean environment.
  std::vector<ZeroSumGame> envs = candidate_envs(belief, cfg, rng_seed);
  CandidateData data;
  for (const auto& env : envs) {
    NashSolution nash = solve_nash(env);
    push_unique(data.mus, nash.mu);
    push_unique(data.nus, best_response_min(env, nash.mu).policy);
    push_unique(data.nus, nash.nu);
  }
  {
    MeanEnvironment mean = build_mean_env(belief, 0.0, RewardShift::Bonus);
    NashSolution nash = solve_nash(mean.env);
    push_unique(data.mus, nash.mu);
    push_unique(data.nus, nash.nu);
  }
  const std::size_t na = data.mus.size(), nb = data.nus.size();

  BeliefExpectation expect = expectation_support(belief, cfg, derive_seed(rng_seed, {0x90f1u}));
  const FiniteSupportBelief* fs = std::get_if<FiniteSupportBelief>(&belief);

  // Bilinear coefficients. Values are taken in the candidate itself for the
  // full target and in the cell reference for the compressed target.
  data.joint_num.assign(na * nb, 0.0);
  data.pair_value.assign(na * nb, 0.0);
  std::vector<double> nash_vs_nu(nb, 0.0);  // E[V_{nash(env), nu_j}] in target env
  for (std::size_t e = 0; e < expect.envs.size(); ++e) {
    double w = expect.weights[e];
    if (w == 0.0) continue;
    const ZeroSumGame& env = expect.envs[e];
    const ZeroSumGame& target =
        partition ? partition->references[partition->cell_of[e]] : env;
    MarkovPolicy nash_mu = solve_nash(env).mu;
    for (std::size_t j = 0; j < nb; ++j)
      nash_vs_nu[j] +=
          w * evaluate_values(target, nash_mu, data.nus[j]).initial_value(target);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        data.pair_value[i * nb + j] +=
            w * evaluate_values(target, data.mus[i], data.nus[j]).initial_value(target);
  }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      data.joint_num[i * nb + j] = nash_vs_nu[j] - data.pair_value[i * nb + j];

  // Information term per component pair.
  data.mi.assign(na * nb, 0.0);
  if (partition) {
    if (!fs) throw std::invalid_argument("compressed selection needs a finite support");
    data.mi = [&] {
      // compressed_mi_matrix is internal to info_ratio; recompute via the
      // public pairwise call.
      std::vector<double> m(na * nb, 0.0);
      for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
          m[i * nb + j] =
              mutual_info_compressed(belief, *partition, data.mus[i], data.nus[j]);
      return m;
    }();
  } else {
    ZeroSumGame mean_env = belief_base(belief);
    mean_env.kernel = mean_kernel(belief);
    std::vector<double> kl = expected_kl_table(belief);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        OccupancyTable occ = occupancy(mean_env, data.mus[i], data.nus[j]);
        double mi = 0.0;
        for (std::size_t row = 0; row < kl.size(); ++row) mi += occ.d[row] * kl[row];
        data.mi[i * nb + j] = mi;
      }
  }

  GridChoice mu_choice = choose_max_mixture(data, cfg.mixture_grid);

  // Marginal constant: expected best response to the chosen max mixture,
  // computed in the candidate and evaluated in the target environment.
  PolicyMixture mu_mix{data.mus, mu_choice.weights};
  data.marginal_const = 0.0;
  for (std::size_t e = 0; e < expect.envs.size(); ++e) {
    double w = expect.weights[e];
    if (w == 0.0) continue;
    MixtureBestResponse br = best_response_min_to_mixture(expect.envs[e], mu_mix);
    if (partition) {
      const ZeroSumGame& ref = partition->references[partition->cell_of[e]];
      double v = 0.0;
      for (std::size_t i = 0; i < na; ++i)
        if (mu_mix.weights[i] > 0.0)
          v += mu_mix.weights[i] *
               evaluate_values(ref, data.mus[i], br.policy).initial_value(ref);
      data.marginal_const += w * v;
    } else {
      data.marginal_const += w * br.value;
    }
  }

  GridChoice nu_choice = choose_min_mixture(data, mu_choice.weights, cfg.mixture_grid);

  // Realize one component per side for the episode.
  Rng rng(derive_seed(rng_seed, {0x4ea1u}));
  int mu_comp = rng.categorical(mu_choice.weights);
  int nu_comp = rng.categorical(nu_choice.weights);
  double mi_selected = data.mi[static_cast<std::size_t>(mu_comp) * nb + nu_comp];

  EpisodePolicyPair out;
  out.mu = data.mus[mu_comp];
  out.nu = data.nus[nu_comp];
  out.diagnostics = make_ratio_diagnostics(mu_choice, nu_choice, mi_selected, mu_comp, nu_comp);
  out.mu_mixture = PolicyMixture{data.mus, mu_choice.weights};
  out.nu_mixture = PolicyMixture{data.nus, nu_choice.weights};
  return out;
}

}  // namespace

EpisodePolicyPair maids_select(const Belief& belief, const AlgorithmConfig& cfg,
                               std::uint64_t rng_seed) {
  cfg.validate();
  if (cfg.algorithm != Algorithm::MAIDS)
    throw std::invalid_argument("maids_select requires the MAIDS configuration");
  return ratio_select(belief, cfg, nullptr, rng_seed);
}

EpisodePolicyPair compressed_maids_select(const Belief& belief, const AlgorithmConfig& cfg,
                                          const Partition& partition, std::uint64_t rng_seed) {
  cfg.validate();
  if (cfg.algorithm != Algorithm::CompressedMAIDS)
    throw std::invalid_argument("compressed_maids_select requires the CompressedMAIDS configuration");
  return ratio_select(belief, cfg, &partition, rng_seed);
}

EpisodePolicyPair reg_maids_select(const Belief& belief, const AlgorithmConfig& cfg) {
  cfg.validate();
  if (cfg.algorithm != Algorithm::RegMAIDS)
    throw std::invalid_argument("reg_maids_select requires the RegMAIDS configuration");

  MeanEnvironment bonus = build_mean_env(belief, cfg.lambda, RewardShift::Bonus);
  NashSolution nash = solve_nash(bonus.env);
  MeanEnvironment penalty = build_mean_env(belief, cfg.lambda_tilde, RewardShift::Penalty);
  BestResponse response = best_response_min(penalty.env, nash.mu);

  EpisodePolicyPair out;
  out.mu = nash.mu;
  out.nu = response.policy;
  out.diagnostics.rule = "mean-env-nash";
  out.diagnostics.lambda = cfg.lambda;
  out.diagnostics.lambda_tilde = cfg.lambda_tilde;
  out.diagnostics.mu_objective = nash.values.initial_value(bonus.env);
  out.diagnostics.nu_objective = response.values.initial_value(penalty.env);
  out.diagnostics.mi_selected = mutual_info_trajectory(belief, out.mu, out.nu);
  return out;
}

EpisodePolicyPair uniform_baseline(const ZeroSumGame& dims, std::uint64_t rng_seed) {
  (void)rng_seed;  // structure is seed-independent
  EpisodePolicyPair out;
  out.mu = MarkovPolicy::uniform(PlayerSide::Max, dims.horizon, dims.num_states,
                                 dims.num_actions_max);
  out.nu = MarkovPolicy::uniform(PlayerSide::Min, dims.horizon, dims.num_states,
                                 dims.num_actions_min);
  out.diagnostics.rule = "uniform";
  return out;
}

}  // namespace mgids
