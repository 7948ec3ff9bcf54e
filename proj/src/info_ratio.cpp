#include "mgids/info_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/stats.hpp"

namespace mgids {

PolicyMixture PolicyMixture::pure(MarkovPolicy policy) {
  PolicyMixture m;
  m.components.push_back(std::move(policy));
  m.weights.push_back(1.0);
  return m;
}

void PolicyMixture::validate() const {
  if (components.empty() || components.size() != weights.size())
    throw std::invalid_argument("mixture needs matching components and weights");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture weight negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("mixture weights must sum to 1");
}

MarkovPolicy PolicyMixture::realize(std::uint64_t rng_seed) const {
  Rng rng(rng_seed);
  return components[rng.categorical(weights)];
}

namespace {

void check_trajectory_enumerable(const ZeroSumGame& base) {
  double per_step = static_cast<double>(base.num_states) * base.num_actions_max *
                    base.num_actions_min;
  if (std::pow(per_step, base.horizon) > 1e6)
    throw EnumerationTooLarge("trajectory space exceeds enumeration guard");
}

ZeroSumGame reward_free_mean_env(const Belief& belief) {
  ZeroSumGame env = belief_base(belief);
  env.kernel = mean_kernel(belief);
  return env;
}

double occupancy_mi(const ZeroSumGame& mean_env, const std::vector<double>& kl_table,
                    const MarkovPolicy& mu, const MarkovPolicy& nu) {
  OccupancyTable occ = occupancy(mean_env, mu, nu);
  double mi = 0.0;
  for (std::size_t row = 0; row < kl_table.size(); ++row) mi += occ.d[row] * kl_table[row];
  return mi;
}

}  // namespace

double mutual_info_trajectory(const Belief& belief, const MarkovPolicy& mu,
                              const MarkovPolicy& nu) {
  ZeroSumGame mean_env = reward_free_mean_env(belief);
  return occupancy_mi(mean_env, expected_kl_table(belief), mu, nu);
}

double mutual_info_trajectory(const Belief& belief, const PolicyMixture& mu,
                              const PolicyMixture& nu) {
  ZeroSumGame mean_env = reward_free_mean_env(belief);
  std::vector<double> kl = expected_kl_table(belief);
  double mi = 0.0;
  for (std::size_t i = 0; i < mu.components.size(); ++i)
    for (std::size_t j = 0; j < nu.components.size(); ++j) {
      double w = mu.weights[i] * nu.weights[j];
      if (w == 0.0) continue;
      mi += w * occupancy_mi(mean_env, kl, mu.components[i], nu.components[j]);
    }
  return mi;
}

double mutual_info_trajectory_enum(const FiniteSupportBelief& belief, const MarkovPolicy& mu,
                                   const MarkovPolicy& nu) {
  belief.validate();
  const ZeroSumGame& base = belief.candidates.front();
  check_trajectory_enumerable(base);
  const int S = base.num_states, A = base.num_actions_max, B = base.num_actions_min;
  const std::size_t n = belief.candidates.size();
  std::vector<double> w = belief.weights();

  double total = 0.0;
  // Depth-first walk over trajectories carrying p(tau | candidate).
  std::vector<double> probs(n, 1.0);
  auto visit = [&](auto&& self, int h, int state, const std::vector<double>& p) -> void {
    if (h == base.horizon) {
      double mix = 0.0;
      for (std::size_t e = 0; e < n; ++e) mix += w[e] * p[e];
      if (mix <= 0.0) return;
      for (std::size_t e = 0; e < n; ++e)
        if (w[e] > 0.0 && p[e] > 0.0) total += w[e] * p[e] * std::log(p[e] / mix);
      return;
    }
    std::vector<double> next(n);
    for (int a = 0; a < A; ++a) {
      double pa = mu.row(h, state)[a];
      if (pa == 0.0) continue;
      for (int b = 0; b < B; ++b) {
        double pb = nu.row(h, state)[b];
        if (pb == 0.0) continue;
        for (int s2 = 0; s2 < S; ++s2) {
          bool alive = false;
          for (std::size_t e = 0; e < n; ++e) {
            next[e] = p[e] * pa * pb * belief.candidates[e].kernel_row(h, state, a, b)[s2];
            alive = alive || next[e] > 0.0;
          }
          if (alive) self(self, h + 1, s2, next);
        }
      }
    }
  };
  visit(visit, 0, base.initial_state, probs);
  return std::max(0.0, total);
}

namespace {

// Per-component-pair compressed mutual information matrix. The trajectory law
// of a mixture pair factors into a policy term (bilinear in the weights) and
// a kernel term per candidate; the log-ratio only sees the kernel term, so
// I(cell; trajectory) is bilinear in the mixture weights with these
// coefficients.
std::vector<double> compressed_mi_matrix(const FiniteSupportBelief& belief,
                                         const Partition& partition,
                                         const std::vector<MarkovPolicy>& mus,
                                         const std::vector<MarkovPolicy>& nus) {
  const ZeroSumGame& base = belief.candidates.front();
  check_trajectory_enumerable(base);
  const int S = base.num_states, A = base.num_actions_max, B = base.num_actions_min;
  const std::size_t n = belief.candidates.size();
  const std::size_t pairs = mus.size() * nus.size();
  std::vector<double> w = belief.weights();
  std::vector<double> cell_mass(partition.num_cells(), 0.0);
  for (std::size_t e = 0; e < n; ++e) cell_mass[partition.cell_of[e]] += w[e];

  std::vector<double> result(pairs, 0.0);
  std::vector<double> kernel_prob(n, 1.0), action_prob(pairs, 1.0);
  std::vector<double> leaf_cells(partition.num_cells());

  auto visit = [&](auto&& self, int h, int state, const std::vector<double>& kp,
                   const std::vector<double>& ap) -> void {
    if (h == base.horizon) {
      std::fill(leaf_cells.begin(), leaf_cells.end(), 0.0);
      double mix = 0.0;
      for (std::size_t e = 0; e < n; ++e) {
        double m = w[e] * kp[e];
        leaf_cells[partition.cell_of[e]] += m;
        mix += m;
      }
      if (mix <= 0.0) return;
      double phi = 0.0;
      for (int c = 0; c < partition.num_cells(); ++c) {
        double m = leaf_cells[c];
        if (m > 0.0 && cell_mass[c] > 0.0) phi += m * std::log(m / (cell_mass[c] * mix));
      }
      if (phi <= 0.0) return;
      for (std::size_t ij = 0; ij < pairs; ++ij) result[ij] += ap[ij] * phi;
      return;
    }
    std::vector<double> next_kp(n), next_ap(pairs);
    for (int a = 0; a < A; ++a) {
      for (int b = 0; b < B; ++b) {
        bool any_pair = false;
        for (std::size_t i = 0; i < mus.size(); ++i) {
          double pa = mus[i].row(h, state)[a];
          for (std::size_t j = 0; j < nus.size(); ++j) {
            double v = ap[i * nus.size() + j] * pa * nus[j].row(h, state)[b];
            next_ap[i * nus.size() + j] = v;
            any_pair = any_pair || v > 0.0;
          }
        }
        if (!any_pair) continue;
        for (int s2 = 0; s2 < S; ++s2) {
          bool alive = false;
          for (std::size_t e = 0; e < n; ++e) {
            next_kp[e] = kp[e] * belief.candidates[e].kernel_row(h, state, a, b)[s2];
            alive = alive || next_kp[e] > 0.0;
          }
          if (alive) self(self, h + 1, s2, next_kp, next_ap);
        }
      }
    }
  };
  visit(visit, 0, base.initial_state, kernel_prob, action_prob);
  return result;
}

const FiniteSupportBelief& require_finite(const Belief& belief, const char* op) {
  const auto* fs = std::get_if<FiniteSupportBelief>(&belief);
  if (!fs)
    throw std::invalid_argument(std::string(op) +
                                ": Dirichlet beliefs need an empirical support; see "
                                "empirical_support()");
  return *fs;
}

}  // namespace

double mutual_info_compressed(const Belief& belief, const Partition& partition,
                              const MarkovPolicy& mu, const MarkovPolicy& nu,
                              const McOptions& mc) {
  if (const auto* d = std::get_if<DirichletBelief>(&belief)) {
    if (mc.num_samples <= 0)
      throw std::invalid_argument("mutual_info_compressed: Dirichlet belief needs mc samples");
    (void)d;
    throw std::invalid_argument(
        "mutual_info_compressed: classify Dirichlet draws via empirical_support + "
        "Partition::from_hard");
  }
  const auto& fs = std::get<FiniteSupportBelief>(belief);
  partition.validate(fs);
  return compressed_mi_matrix(fs, partition, {mu}, {nu})[0];
}

InfoRatioReport make_ratio_report(double numerator, double mi,
                                  std::optional<double> stderr_estimate) {
  InfoRatioReport r;
  r.numerator_regret = numerator;
  r.denominator_mi = mi;
  r.estimation_stderr = stderr_estimate;
  if (mi > kMiFloor) {
    r.ratio = numerator * numerator / mi;
  } else if (std::abs(numerator) <= 1e-12) {
    r.ratio = 0.0;
  } else {
    r.ratio = std::numeric_limits<double>::infinity();
    r.infinite = true;
  }
  return r;
}

namespace {

double mixture_value(const ZeroSumGame& env, const PolicyMixture& mu, const PolicyMixture& nu) {
  double v = 0.0;
  for (std::size_t i = 0; i < mu.components.size(); ++i)
    for (std::size_t j = 0; j < nu.components.size(); ++j) {
      double w = mu.weights[i] * nu.weights[j];
      if (w == 0.0) continue;
      v += w * evaluate_values(env, mu.components[i], nu.components[j]).initial_value(env);
    }
  return v;
}

double mixture_value_fixed_max(const ZeroSumGame& env, const MarkovPolicy& mu,
                               const PolicyMixture& nu) {
  double v = 0.0;
  for (std::size_t j = 0; j < nu.components.size(); ++j) {
    if (nu.weights[j] == 0.0) continue;
    v += nu.weights[j] * evaluate_values(env, mu, nu.components[j]).initial_value(env);
  }
  return v;
}

}  // namespace

InfoRatioReport joint_info_ratio(const Belief& belief, const PolicyMixture& mu,
                                 const PolicyMixture& nu, const McOptions& mc) {
  mu.validate();
  nu.validate();
  double mi = mutual_info_trajectory(belief, mu, nu);
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    double num = 0.0;
    for (std::size_t e = 0; e < fs->candidates.size(); ++e) {
      if (w[e] == 0.0) continue;
      const ZeroSumGame& env = fs->candidates[e];
      MarkovPolicy nash_mu = solve_nash(env).mu;
      num += w[e] * (mixture_value_fixed_max(env, nash_mu, nu) - mixture_value(env, mu, nu));
    }
    return make_ratio_report(num, mi);
  }
  if (mc.num_samples <= 0)
    throw std::invalid_argument("joint_info_ratio: Dirichlet belief needs mc samples");
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < mc.num_samples; ++t) {
    ZeroSumGame env =
        sample_env(belief, derive_seed(mc.seed, {0x11a2u, static_cast<std::uint64_t>(t)}));
    MarkovPolicy nash_mu = solve_nash(env).mu;
    double term = mixture_value_fixed_max(env, nash_mu, nu) - mixture_value(env, mu, nu);
    sum += term;
    sum_sq += term * term;
  }
  double mean = sum / mc.num_samples;
  double var = mc.num_samples > 1
                   ? std::max(0.0, (sum_sq - mc.num_samples * mean * mean) / (mc.num_samples - 1))
                   : 0.0;
  return make_ratio_report(mean, mi, std::sqrt(var / mc.num_samples));
}

InfoRatioReport marginal_info_ratio(const Belief& belief, const MarkovPolicy& mu,
                                    const PolicyMixture& nu, const McOptions& mc) {
  nu.validate();
  double mi = mutual_info_trajectory(belief, PolicyMixture::pure(mu), nu);
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    double num = 0.0;
    for (std::size_t e = 0; e < fs->candidates.size(); ++e) {
      if (w[e] == 0.0) continue;
      const ZeroSumGame& env = fs->candidates[e];
      double br = best_response_min(env, mu).values.initial_value(env);
      num += w[e] * (mixture_value_fixed_max(env, mu, nu) - br);
    }
    return make_ratio_report(num, mi);
  }
  if (mc.num_samples <= 0)
    throw std::invalid_argument("marginal_info_ratio: Dirichlet belief needs mc samples");
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < mc.num_samples; ++t) {
    ZeroSumGame env =
        sample_env(belief, derive_seed(mc.seed, {0x3a91u, static_cast<std::uint64_t>(t)}));
    double br = best_response_min(env, mu).values.initial_value(env);
    double term = mixture_value_fixed_max(env, mu, nu) - br;
    sum += term;
    sum_sq += term * term;
  }
  double mean = sum / mc.num_samples;
  double var = mc.num_samples > 1
                   ? std::max(0.0, (sum_sq - mc.num_samples * mean * mean) / (mc.num_samples - 1))
                   : 0.0;
  return make_ratio_report(mean, mi, std::sqrt(var / mc.num_samples));
}

InfoRatioReport compressed_joint_ratio(const Belief& belief, const Partition& partition,
                                       const PolicyMixture& mu, const PolicyMixture& nu,
                                       const McOptions& mc) {
  (void)mc;
  mu.validate();
  nu.validate();
  const FiniteSupportBelief& fs = require_finite(belief, "compressed_joint_ratio");
  partition.validate(fs);
  std::vector<double> mi_matrix = compressed_mi_matrix(fs, partition, mu.components, nu.components);
  double mi = 0.0;
  for (std::size_t i = 0; i < mu.components.size(); ++i)
    for (std::size_t j = 0; j < nu.components.size(); ++j)
      mi += mu.weights[i] * nu.weights[j] * mi_matrix[i * nu.components.size() + j];

  std::vector<double> w = fs.weights();
  double num = 0.0;
  for (std::size_t e = 0; e < fs.candidates.size(); ++e) {
    if (w[e] == 0.0) continue;
    const ZeroSumGame& ref = partition.references[partition.cell_of[e]];
    MarkovPolicy nash_mu = solve_nash(fs.candidates[e]).mu;
    num += w[e] * (mixture_value_fixed_max(ref, nash_mu, nu) - mixture_value(ref, mu, nu));
  }
  return make_ratio_report(num, mi);
}

InfoRatioReport compressed_marginal_ratio(const Belief& belief, const Partition& partition,
                                          const MarkovPolicy& mu, const PolicyMixture& nu,
                                          const McOptions& mc) {
  (void)mc;
  nu.validate();
  const FiniteSupportBelief& fs = require_finite(belief, "compressed_marginal_ratio");
  partition.validate(fs);
  PolicyMixture mu_mix = PolicyMixture::pure(mu);
  std::vector<double> mi_matrix =
      compressed_mi_matrix(fs, partition, mu_mix.components, nu.components);
  double mi = 0.0;
  for (std::size_t j = 0; j < nu.components.size(); ++j) mi += nu.weights[j] * mi_matrix[j];

  std::vector<double> w = fs.weights();
  double num = 0.0;
  for (std::size_t e = 0; e < fs.candidates.size(); ++e) {
    if (w[e] == 0.0) continue;
    const ZeroSumGame& env = fs.candidates[e];
    const ZeroSumGame& ref = partition.references[partition.cell_of[e]];
    // Best response found in the candidate, evaluated in its reference.
    MarkovPolicy br = best_response_min(env, mu).policy;
    double ref_br_value = evaluate_values(ref, mu, br).initial_value(ref);
    num += w[e] * (mixture_value_fixed_max(ref, mu, nu) - ref_br_value);
  }
  return make_ratio_report(num, mi);
}

}  // namespace mgids
