#include "mgids/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/serialization.hpp"
#include "mgids/stats.hpp"

namespace mgids {

using nlohmann::json;

double theoretical_bound(BoundKind kind, int S, int A, int B, int H, int K,
                         const BoundExtras& extras) {
  if (S <= 0 || A <= 0 || H <= 0 || K <= 0)
    throw std::invalid_argument("bound dimensions must be positive");
  const double s = S, a = A, b = B, h = H, k = K;
  const double log_term = std::log(s * k * h);
  switch (kind) {
    case BoundKind::Thm1:
    case BoundKind::Thm2:
      if (B <= 0) throw std::invalid_argument("B required");
      return 8.0 * std::pow(s, 1.5) * a * b * h * h * std::sqrt(k * log_term);
    case BoundKind::Thm3:
      if (B <= 0) throw std::invalid_argument("B required");
      return 4.0 * std::sqrt(k * h * h * h * s * a * b * extras.mutual_information) +
             4.0 * k * extras.epsilon;
    case BoundKind::Thm4:
      return 3.0 * extras.num_players * std::pow(s, 1.5) * a * h * h * std::sqrt(k * log_term);
  }
  throw std::logic_error("unreachable");
}

void ExperimentConfig::validate() const {
  algorithm.validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (num_prior_draws < 1) throw std::invalid_argument("num_prior_draws must be >= 1");
  if (mode == Mode::ZeroSum) {
    if (!prior) throw std::invalid_argument("zero-sum mode needs a prior");
    if (algorithm.algorithm == Algorithm::CompressedMAIDS && !partition)
      throw std::invalid_argument("CompressedMAIDS needs a partition");
  } else {
    if (!gs_prior) throw std::invalid_argument("general-sum mode needs a prior");
  }
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::MAIDS: return "maids";
    case Algorithm::RegMAIDS: return "reg_maids";
    case Algorithm::CompressedMAIDS: return "compressed_maids";
    case Algorithm::ThompsonSampling: return "thompson";
    case Algorithm::UniformRandom: return "uniform";
  }
  return "unknown";
}

namespace {

json diagnostics_to_json(const SelectionDiagnostics& d) {
  json j;
  j["rule"] = d.rule;
  j["mu_objective"] = d.mu_objective;
  j["nu_objective"] = d.nu_objective;
  j["mu_numerator"] = d.mu_numerator;
  j["nu_numerator"] = d.nu_numerator;
  j["mi_selected"] = d.mi_selected;
  j["lambda"] = d.lambda;
  j["lambda_tilde"] = d.lambda_tilde;
  j["mu_component"] = d.mu_component;
  j["nu_component"] = d.nu_component;
  return j;
}

void aggregate_report(RegretReport& report) {
  const int K = report.episodes, draws = report.num_prior_draws;
  report.mean_cum_regret.assign(K, 0.0);
  report.stderr_cum_regret.assign(K, 0.0);
  report.mean_cum_mi.assign(K, 0.0);
  report.mean_cum_target_mi.assign(K, 0.0);
  std::vector<double> sq(K, 0.0);
  for (const auto& row : report.rows) {
    int k = row.episode - 1;
    report.mean_cum_regret[k] += row.cum_regret;
    sq[k] += row.cum_regret * row.cum_regret;
    report.mean_cum_target_mi[k] += row.mi_cum;
  }
  for (int k = 0; k < K; ++k) {
    double mean = report.mean_cum_regret[k] / draws;
    report.mean_cum_regret[k] = mean;
    double var = draws > 1 ? std::max(0.0, (sq[k] - draws * mean * mean) / (draws - 1)) : 0.0;
    report.stderr_cum_regret[k] = std::sqrt(var / draws);
    report.mean_cum_target_mi[k] /= draws;
  }
}

struct ZeroSumDims {
  int S, A, B, H;
};

ZeroSumDims dims_of(const ZeroSumGame& env) {
  return {env.num_states, env.num_actions_max, env.num_actions_min, env.horizon};
}

}  // namespace

RegretReport run_zero_sum_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Belief& prior = *cfg.prior;
  const ZeroSumGame& base = belief_base(prior);
  const ZeroSumDims dims = dims_of(base);
  const int K = cfg.episodes;

  AlgorithmConfig algo = cfg.algorithm;
  if (algo.algorithm == Algorithm::RegMAIDS || algo.algorithm == Algorithm::MAIDS) {
    if (algo.lambda == 0.0)
      algo.lambda = AlgorithmConfig::zero_sum_lambda(dims.S, dims.H, K);
    if (algo.lambda_tilde == 0.0)
      algo.lambda_tilde = AlgorithmConfig::zero_sum_lambda(dims.S, dims.H, K);
  }

  RegretReport report;
  report.algorithm_name = algorithm_name(algo.algorithm);
  report.episodes = K;
  report.num_prior_draws = cfg.num_prior_draws;
  report.rows.reserve(static_cast<std::size_t>(K) * cfg.num_prior_draws);
  report.bound_series.assign(K, 0.0);

  std::vector<double> cum_full_mi_sum(K, 0.0);

  for (int draw = 0; draw < cfg.num_prior_draws; ++draw) {
    const std::uint64_t draw_tag = static_cast<std::uint64_t>(draw);
    ZeroSumGame true_env =
        sample_env(prior, derive_seed(cfg.base_seed, {0x70ffu, draw_tag}));
    NashSolution true_nash = solve_nash(true_env);
    const double nash_value = true_nash.values.initial_value(true_env);

    Belief belief = prior;
    double cum_regret = 0.0, cum_target_mi = 0.0, cum_full_mi = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::uint64_t ep_tag = static_cast<std::uint64_t>(k);
      std::uint64_t select_seed = derive_seed(cfg.base_seed, {0x5e1u, draw_tag, ep_tag});

      EpisodePolicyPair pair;
      switch (algo.algorithm) {
        case Algorithm::ThompsonSampling: {
          pair.mu = ts_select_max(belief, derive_seed(select_seed, {0xau}));
          pair.nu = ts_select_min(belief, pair.mu, derive_seed(select_seed, {0xbu}));
          pair.diagnostics.rule = "thompson";
          break;
        }
        case Algorithm::RegMAIDS:
          pair = reg_maids_select(belief, algo);
          break;
        case Algorithm::MAIDS:
          pair = maids_select(belief, algo, select_seed);
          break;
        case Algorithm::CompressedMAIDS:
          pair = compressed_maids_select(belief, algo, *cfg.partition, select_seed);
          break;
        case Algorithm::UniformRandom:
          pair = uniform_baseline(base, select_seed);
          break;
      }

      double br_value = best_response_min(true_env, pair.mu).values.initial_value(true_env);
      double inst_regret = nash_value - br_value;
      double counter_value =
          best_response_max(true_env, pair.nu).values.initial_value(true_env);
      double duality_gap = counter_value - br_value;

      double full_mi = mutual_info_trajectory(belief, pair.mu, pair.nu);
      double target_mi = full_mi;
      if (algo.algorithm == Algorithm::CompressedMAIDS)
        target_mi = mutual_info_compressed(belief, *cfg.partition, pair.mu, pair.nu);

      cum_regret += inst_regret;
      cum_target_mi += target_mi;
      cum_full_mi += full_mi;
      cum_full_mi_sum[k] += cum_full_mi;

      double bound;
      if (algo.algorithm == Algorithm::CompressedMAIDS) {
        BoundExtras extras;
        extras.mutual_information = cum_target_mi;
        extras.epsilon = algo.epsilon;
        bound = theoretical_bound(BoundKind::Thm3, dims.S, dims.A, dims.B, dims.H, k + 1, extras);
      } else {
        bound = theoretical_bound(BoundKind::Thm2, dims.S, dims.A, dims.B, dims.H, k + 1);
      }

      EpisodeRecord row;
      row.episode = k + 1;
      row.seed = draw;
      row.inst_regret = inst_regret;
      row.cum_regret = cum_regret;
      row.duality_gap = duality_gap;
      row.mi_episode = target_mi;
      row.mi_cum = cum_target_mi;
      row.bound_value = bound;
      report.rows.push_back(row);

      // Per-episode selection diagnostics, recorded for the first prior draw.
      if (draw == 0) report.diagnostics.push_back(diagnostics_to_json(pair.diagnostics));

      Trajectory traj = simulate_episode(true_env, pair.mu, pair.nu,
                                         derive_seed(cfg.base_seed, {0x51au, draw_tag, ep_tag}));
      belief = posterior_update(belief, traj);
    }
  }

  aggregate_report(report);
  report.mean_cum_mi.assign(K, 0.0);
  for (int k = 0; k < K; ++k) report.mean_cum_mi[k] = cum_full_mi_sum[k] / cfg.num_prior_draws;
  for (int k = 0; k < K; ++k) {
    if (cfg.algorithm.algorithm == Algorithm::CompressedMAIDS) {
      BoundExtras extras;
      extras.mutual_information = report.mean_cum_target_mi[k];
      extras.epsilon = cfg.algorithm.epsilon;
      report.bound_series[k] =
          theoretical_bound(BoundKind::Thm3, dims.S, dims.A, dims.B, dims.H, k + 1, extras);
    } else {
      report.bound_series[k] =
          theoretical_bound(BoundKind::Thm2, dims.S, dims.A, dims.B, dims.H, k + 1);
    }
  }

  ExperimentConfig echo_cfg = cfg;
  echo_cfg.algorithm = algo;  // report the effective schedule values
  if (!cfg.csv_path.empty()) write_regret_csv(report, cfg.csv_path);
  if (!cfg.report_path.empty())
    write_json_file(cfg.report_path, report_to_json(echo_cfg, report));
  return report;
}

RegretReport run_general_sum_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.mode != ExperimentConfig::Mode::GeneralSum)
    throw std::invalid_argument("general-sum runner needs general-sum mode");
  const GsBelief& prior = *cfg.gs_prior;
  const GeneralSumGame& base = gs_belief_base(prior);
  const int K = cfg.episodes;

  PurePolicyProfileSet pure_sets =
      cfg.gs_pure_sets ? *cfg.gs_pure_sets : PurePolicyProfileSet::all_deterministic(base);
  pure_sets.validate(base);

  double lambda = cfg.algorithm.lambda;
  if (lambda == 0.0)
    lambda = AlgorithmConfig::general_sum_lambda(base.num_states, base.horizon, K);

  RegretReport report;
  report.algorithm_name = "reg_maids_gs";
  report.episodes = K;
  report.num_prior_draws = cfg.num_prior_draws;
  report.bound_series.assign(K, 0.0);

  BoundExtras extras;
  extras.num_players = base.num_players;
  for (int k = 0; k < K; ++k)
    report.bound_series[k] = theoretical_bound(BoundKind::Thm4, base.num_states,
                                               base.num_joint_actions(), 0, base.horizon, k + 1,
                                               extras);

  for (int draw = 0; draw < cfg.num_prior_draws; ++draw) {
    const std::uint64_t draw_tag = static_cast<std::uint64_t>(draw);
    GeneralSumGame true_env =
        gs_sample_env(prior, derive_seed(cfg.base_seed, {0x70ffu, draw_tag}));

    GsBelief belief = prior;
    double cum_regret = 0.0, cum_mi = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::uint64_t ep_tag = static_cast<std::uint64_t>(k);
      MixedJointPolicy pi;
      try {
        pi = reg_maids_gs_select(belief, lambda, pure_sets, cfg.gs_target);
      } catch (const ConvergenceFailure&) {
        report.ne_fallback_to_cce = true;
        pi = reg_maids_gs_select(belief, lambda, pure_sets, EquilibriumTarget::CCE);
      }

      std::vector<double> gaps = equilibrium_gap(true_env, pi, pure_sets);
      double inst_regret = 0.0, worst_gap = 0.0;
      for (double g : gaps) {
        inst_regret += g;
        worst_gap = std::max(worst_gap, g);
      }
      double mi = mutual_info_trajectory_gs(belief, pi);

      cum_regret += inst_regret;
      cum_mi += mi;

      EpisodeRecord row;
      row.episode = k + 1;
      row.seed = draw;
      row.inst_regret = inst_regret;
      row.cum_regret = cum_regret;
      row.duality_gap = worst_gap;  // per-player worst deviation gap
      row.mi_episode = mi;
      row.mi_cum = cum_mi;
      row.bound_value = report.bound_series[k];
      report.rows.push_back(row);

      std::vector<PurePolicy> profile =
          pi.realize(derive_seed(cfg.base_seed, {0x9100u, draw_tag, ep_tag}));
      GsTrajectory traj = simulate_episode_gs(
          true_env, profile, derive_seed(cfg.base_seed, {0x51au, draw_tag, ep_tag}));
      belief = gs_posterior_update(belief, traj);
    }
  }

  aggregate_report(report);
  report.mean_cum_mi = report.mean_cum_target_mi;

  ExperimentConfig echo_cfg = cfg;
  echo_cfg.algorithm.lambda = lambda;
  if (!cfg.csv_path.empty()) write_regret_csv(report, cfg.csv_path);
  if (!cfg.report_path.empty())
    write_json_file(cfg.report_path, report_to_json(echo_cfg, report));
  return report;
}

AuditReport lemma_audit(const ExperimentConfig& cfg) {
  cfg.validate();
  const Belief& prior = *cfg.prior;
  const auto* fs_prior = std::get_if<FiniteSupportBelief>(&prior);
  if (!fs_prior) throw std::invalid_argument("lemma_audit needs a finite-support prior");
  const ZeroSumGame& base = belief_base(prior);
  const ZeroSumDims dims = dims_of(base);
  const int K = cfg.episodes;

  AuditReport audit;
  audit.mi_cap = 2.0 * dims.S * dims.S * dims.A * dims.B * dims.H *
                 std::log(static_cast<double>(dims.S) * K * dims.H);
  const double ratio_cap =
      4.0 * std::pow(static_cast<double>(dims.H), 3.0) * dims.S * dims.A * dims.B;

  bool enumerable = std::pow(static_cast<double>(dims.S) * dims.A * dims.B, dims.H) <= 2e5;

  std::vector<double> cum_mi_by_episode(K, 0.0);
  for (int draw = 0; draw < cfg.num_prior_draws; ++draw) {
    const std::uint64_t draw_tag = static_cast<std::uint64_t>(draw);
    ZeroSumGame true_env =
        sample_env(prior, derive_seed(cfg.base_seed, {0x70ffu, draw_tag}));
    Belief belief = prior;
    double cum_mi = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::uint64_t ep_tag = static_cast<std::uint64_t>(k);
      const auto& fs = std::get<FiniteSupportBelief>(belief);
      std::vector<double> w = fs.weights();

      // Thompson-sampling proxy pair as explicit mixtures.
      PolicyMixture ts_mu, ts_nu;
      for (std::size_t i = 0; i < fs.candidates.size(); ++i) {
        if (w[i] <= 1e-14) continue;
        NashSolution nash = solve_nash(fs.candidates[i]);
        ts_mu.components.push_back(nash.mu);
        ts_mu.weights.push_back(w[i]);
      }
      double weight_sum = 0.0;
      for (double x : ts_mu.weights) weight_sum += x;
      for (double& x : ts_mu.weights) x /= weight_sum;

      // Opposing policies to stress the ratio cap: uniform and seeded draws.
      std::vector<PolicyMixture> opponents;
      opponents.push_back(PolicyMixture::pure(
          MarkovPolicy::uniform(PlayerSide::Min, dims.H, dims.S, dims.B)));
      for (int t = 0; t < 2; ++t) {
        Rng rng(derive_seed(cfg.base_seed, {0xadcu, draw_tag, ep_tag, static_cast<std::uint64_t>(t)}));
        MarkovPolicy nu = MarkovPolicy::uniform(PlayerSide::Min, dims.H, dims.S, dims.B);
        for (int h = 0; h < dims.H; ++h)
          for (int s = 0; s < dims.S; ++s) {
            auto row = nu.row(h, s);
            double total = 0.0;
            for (int b = 0; b < dims.B; ++b) {
              row[b] = 0.05 + rng.next_double();
              total += row[b];
            }
            for (int b = 0; b < dims.B; ++b) row[b] /= total;
          }
        opponents.push_back(PolicyMixture::pure(nu));
      }
      {
        PolicyMixture ts_min;
        for (std::size_t i = 0; i < fs.candidates.size(); ++i) {
          if (w[i] <= 1e-14) continue;
          MarkovPolicy mu0 = ts_mu.components.front();
          ts_min.components.push_back(best_response_min(fs.candidates[i], mu0).policy);
          ts_min.weights.push_back(w[i]);
        }
        double total = 0.0;
        for (double x : ts_min.weights) total += x;
        for (double& x : ts_min.weights) x /= total;
        opponents.push_back(std::move(ts_min));
      }

      for (const auto& nu : opponents) {
        InfoRatioReport r = joint_info_ratio(belief, ts_mu, nu);
        ++audit.ratio_checks;
        bool violation = r.infinite ? std::abs(r.numerator_regret) > 1e-9 : r.ratio > ratio_cap;
        if (!r.infinite)
          audit.worst_ratio_slack = std::min(audit.worst_ratio_slack, ratio_cap - r.ratio);
        if (violation) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "ratio=%.6g cap=%.6g numerator=%.6g mi=%.6g",
                        r.ratio, ratio_cap, r.numerator_regret, r.denominator_mi);
          audit.violations.push_back({draw, k + 1, "ts-ratio-cap", buf});
        }
      }

      // Executed policy: Thompson sampling (paired with the proxy above).
      MarkovPolicy mu =
          ts_select_max(belief, derive_seed(cfg.base_seed, {0x5e1u, draw_tag, ep_tag, 0xau}));
      MarkovPolicy nu =
          ts_select_min(belief, mu, derive_seed(cfg.base_seed, {0x5e1u, draw_tag, ep_tag, 0xbu}));

      double mi = mutual_info_trajectory(belief, mu, nu);
      if (enumerable) {
        double enum_mi = mutual_info_trajectory_enum(fs, mu, nu);
        double mismatch = std::abs(mi - enum_mi);
        audit.worst_mi_mismatch = std::max(audit.worst_mi_mismatch, mismatch);
        if (mismatch > 1e-9) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "occupancy=%.12g enum=%.12g", mi, enum_mi);
          audit.violations.push_back({draw, k + 1, "mi-identity", buf});
        }
      }
      cum_mi += mi;
      cum_mi_by_episode[k] += mi;
      if (cum_mi > audit.mi_cap + 1e-9) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "cum_mi=%.6g cap=%.6g", cum_mi, audit.mi_cap);
        audit.violations.push_back({draw, k + 1, "mi-cap", buf});
      }

      Trajectory traj = simulate_episode(true_env, mu, nu,
                                         derive_seed(cfg.base_seed, {0x51au, draw_tag, ep_tag}));
      belief = posterior_update(belief, traj);
      ++audit.episodes_checked;
    }
    audit.cumulative_mi = std::max(audit.cumulative_mi, cum_mi);
  }
  return audit;
}

void write_regret_csv(const RegretReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "episode,seed,algorithm,inst_regret,cum_regret,duality_gap,mi_episode,mi_cum,bound_value\n";
  char buf[512];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.episode,
                  r.seed, report.algorithm_name.c_str(), r.inst_regret, r.cum_regret,
                  r.duality_gap, r.mi_episode, r.mi_cum, r.bound_value);
    out << buf;
  }
}

json report_to_json(const ExperimentConfig& cfg, const RegretReport& report) {
  json j;
  j["version"] = "0.1.0";
  j["log_convention"] = "natural";
  j["algorithm"] = report.algorithm_name;

  json config;
  config["mode"] = cfg.mode == ExperimentConfig::Mode::ZeroSum ? "zero_sum" : "general_sum";
  config["episodes"] = report.episodes;
  config["num_prior_draws"] = report.num_prior_draws;
  config["base_seed"] = cfg.base_seed;
  json algo;
  algo["name"] = report.algorithm_name;
  algo["lambda"] = cfg.algorithm.lambda;
  algo["lambda_tilde"] = cfg.algorithm.lambda_tilde;
  algo["candidate_count"] = cfg.algorithm.candidate_count;
  algo["mixture_grid"] = cfg.algorithm.mixture_grid;
  algo["epsilon"] = cfg.algorithm.epsilon;
  algo["mc_samples"] = cfg.algorithm.mc_samples;
  config["algorithm"] = std::move(algo);
  if (cfg.prior) {
    json prior;
    if (const auto* fs = std::get_if<FiniteSupportBelief>(&*cfg.prior)) {
      prior["type"] = "finite";
      prior["num_candidates"] = fs->candidates.size();
    } else {
      prior["type"] = "dirichlet";
    }
    config["prior"] = std::move(prior);
  }
  if (cfg.partition) config["partition_cells"] = cfg.partition->num_cells();
  j["config"] = std::move(config);

  json aggregates;
  aggregates["final_mean_cum_regret"] = report.mean_cum_regret.back();
  aggregates["final_stderr_cum_regret"] = report.stderr_cum_regret.back();
  aggregates["final_mean_cum_mi"] = report.mean_cum_mi.back();
  aggregates["final_mean_cum_target_mi"] = report.mean_cum_target_mi.back();
  aggregates["final_bound"] = report.bound_series.back();
  aggregates["bound_dominates"] = [&] {
    for (std::size_t k = 0; k < report.mean_cum_regret.size(); ++k)
      if (report.mean_cum_regret[k] > report.bound_series[k]) return false;
    return true;
  }();
  j["aggregates"] = std::move(aggregates);

  // Back-compatible top-level shortcuts.
  j["final_mean_cum_regret"] = report.mean_cum_regret.back();
  j["final_stderr_cum_regret"] = report.stderr_cum_regret.back();
  j["final_mean_cum_mi"] = report.mean_cum_mi.back();
  j["final_bound"] = report.bound_series.back();

  j["ne_fallback_to_cce"] = report.ne_fallback_to_cce;
  j["episode_diagnostics"] = report.diagnostics;
  return j;
}

double cross_candidate_regret(const FiniteSupportBelief& belief) {
  double worst = 0.0;
  std::vector<MarkovPolicy> nash_mus;
  for (const auto& env : belief.candidates) nash_mus.push_back(solve_nash(env).mu);
  for (std::size_t i = 0; i < belief.candidates.size(); ++i) {
    const ZeroSumGame& env = belief.candidates[i];
    double value = solve_nash(env).values.initial_value(env);
    for (std::size_t j = 0; j < belief.candidates.size(); ++j) {
      if (i == j) continue;
      double br = best_response_min(env, nash_mus[j]).values.initial_value(env);
      worst = std::max(worst, value - br);
    }
  }
  return worst;
}

FiniteSupportBelief informative_product_support(const ZeroSumGame& shape_and_rewards,
                                                const std::vector<int>& per_step_choices,
                                                std::uint64_t rng_seed,
                                                double min_cross_regret) {
  // Rewards are part of the search: a fixed draw can carry a dominant action
  // no kernel choice overturns, leaving every support uninformative.
  ZeroSumGame base = shape_and_rewards;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::uint64_t tag = derive_seed(rng_seed, {0x1f0u, static_cast<std::uint64_t>(attempt)});
    Rng rng(tag);
    for (double& r : base.reward) r = rng.next_double();
    FiniteSupportBelief belief =
        random_product_support(base, per_step_choices, derive_seed(tag, {0x2e1u}));
    if (cross_candidate_regret(belief) >= min_cross_regret) return belief;
  }
  throw std::runtime_error("no informative support found within the attempt budget");
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-12));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "maids") return Algorithm::MAIDS;
  if (name == "reg_maids") return Algorithm::RegMAIDS;
  if (name == "compressed_maids") return Algorithm::CompressedMAIDS;
  if (name == "thompson") return Algorithm::ThompsonSampling;
  if (name == "uniform") return Algorithm::UniformRandom;
  throw std::invalid_argument("unknown algorithm: " + name);
}

ZeroSumGame random_rewards_base(int H, int S, int A, int B, std::uint64_t seed) {
  ZeroSumGame base = ZeroSumGame::zeros(H, S, A, B, 0);
  Rng rng(seed);
  for (double& r : base.reward) r = rng.next_double();
  // Kernel placeholder; candidates overwrite it.
  std::fill(base.kernel.begin(), base.kernel.end(), 1.0 / S);
  return base;
}

Belief prior_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "finite" || type == "dirichlet") return belief_from_json(j);
  if (type == "finite_product_random") {
    const auto& dims = j.at("dims");
    int H = dims.at("horizon").get<int>();
    ZeroSumGame base = random_rewards_base(
        H, dims.at("num_states").get<int>(), dims.at("actions_max").get<int>(),
        dims.at("actions_min").get<int>(), j.at("seed").get<std::uint64_t>());
    std::vector<int> per_step = j.at("per_step_choices").get<std::vector<int>>();
    std::uint64_t seed = derive_seed(j.at("seed").get<std::uint64_t>(), {0x5eedu});
    double min_cross = j.value("min_cross_regret", 0.0);
    if (min_cross > 0.0) return informative_product_support(base, per_step, seed, min_cross);
    return random_product_support(base, per_step, seed);
  }
  if (type == "dirichlet_uniform") {
    const auto& dims = j.at("dims");
    int H = dims.at("horizon").get<int>();
    ZeroSumGame base = random_rewards_base(
        H, dims.at("num_states").get<int>(), dims.at("actions_max").get<int>(),
        dims.at("actions_min").get<int>(), j.at("seed").get<std::uint64_t>());
    return DirichletBelief::uniform_prior(base, j.value("concentration", 1.0));
  }
  throw std::invalid_argument("unknown prior type: " + type);
}

GsBelief gs_prior_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "finite" || type == "dirichlet") return gs_belief_from_json(j);
  if (type == "gs_finite_product_random") {
    const auto& dims = j.at("dims");
    GeneralSumGame base;
    base.num_players = dims.at("num_players").get<int>();
    base.horizon = dims.at("horizon").get<int>();
    base.num_states = dims.at("num_states").get<int>();
    base.initial_state = 0;
    base.action_counts = dims.at("action_counts").get<std::vector<int>>();
    base.kernel.assign(base.num_rows() * base.num_states, 1.0 / base.num_states);
    base.rewards.assign(base.num_players, std::vector<double>(base.num_rows(), 0.0));
    Rng rng(j.at("seed").get<std::uint64_t>());
    if (j.value("constant_sum", false)) {
      if (base.num_players != 2)
        throw std::invalid_argument("constant_sum generator needs two players");
      for (std::size_t row = 0; row < base.num_rows(); ++row) {
        base.rewards[0][row] = rng.next_double();
        base.rewards[1][row] = 1.0 - base.rewards[0][row];
      }
    } else {
      for (auto& table : base.rewards)
        for (double& r : table) r = rng.next_double();
    }

    std::vector<int> per_step = j.at("per_step_choices").get<std::vector<int>>();
    return gs_random_product_support(base, per_step, rng.next_u64());
  }
  throw std::invalid_argument("unknown prior type: " + type);
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "zero_sum")
    cfg.mode = ExperimentConfig::Mode::ZeroSum;
  else if (mode == "general_sum")
    cfg.mode = ExperimentConfig::Mode::GeneralSum;
  else
    throw std::invalid_argument("unknown mode: " + mode);

  cfg.episodes = j.at("episodes").get<int>();
  cfg.num_prior_draws = j.at("num_prior_draws").get<int>();
  cfg.base_seed = j.value("base_seed", 1ULL);

  const auto& algo = j.at("algorithm");
  cfg.algorithm.algorithm = algorithm_from_name(algo.at("name").get<std::string>());
  cfg.algorithm.lambda = algo.value("lambda", 0.0);
  cfg.algorithm.lambda_tilde = algo.value("lambda_tilde", 0.0);
  cfg.algorithm.candidate_count = algo.value("candidate_count", 4);
  cfg.algorithm.mixture_grid = algo.value("mixture_grid", 2);
  cfg.algorithm.epsilon = algo.value("epsilon", 0.0);
  cfg.algorithm.mc_samples = algo.value("mc_samples", 0);
  if (cfg.algorithm.algorithm == Algorithm::CompressedMAIDS)
    cfg.algorithm.learning_target = LearningTarget::Compressed;

  if (cfg.mode == ExperimentConfig::Mode::ZeroSum) {
    cfg.prior = prior_from_json(j.at("prior"));
    if (j.contains("partition")) {
      const auto* fs = std::get_if<FiniteSupportBelief>(&*cfg.prior);
      if (!fs) throw std::invalid_argument("partitions need a finite-support prior");
      const auto& pj = j.at("partition");
      const std::string ptype = pj.at("type").get<std::string>();
      if (ptype == "identity") {
        cfg.partition = Partition::identity(*fs);
      } else if (ptype == "single") {
        cfg.partition = Partition::single_cell(*fs);
      } else if (ptype == "labels") {
        cfg.partition = Partition::group_by(*fs, pj.at("labels").get<std::vector<int>>());
      } else if (ptype == "hard") {
        HardPartition hard =
            build_hard_partition(belief_base(*cfg.prior), pj.at("epsilon").get<double>());
        cfg.partition = Partition::from_hard(hard, *fs);
      } else {
        throw std::invalid_argument("unknown partition type: " + ptype);
      }
    }
  } else {
    cfg.gs_prior = gs_prior_from_json(j.at("prior"));
    if (j.contains("target"))
      cfg.gs_target = j.at("target").get<std::string>() == "ne" ? EquilibriumTarget::NE
                                                                : EquilibriumTarget::CCE;
  }

  if (j.contains("outputs")) {
    cfg.csv_path = j.at("outputs").value("csv", "");
    cfg.report_path = j.at("outputs").value("report", "");
  }
  return cfg;
}

}  // namespace mgids
