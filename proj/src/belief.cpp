#include "mgids/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/stats.hpp"

namespace mgids {

void FiniteSupportBelief::validate() const {
  if (candidates.empty()) throw std::invalid_argument("finite-support belief needs candidates");
  if (log_weights.size() != candidates.size())
    throw std::invalid_argument("one log weight per candidate required");
  const ZeroSumGame& first = candidates.front();
  for (const auto& c : candidates) {
    c.validate();
    if (!c.same_shape(first)) throw std::invalid_argument("candidate shapes differ");
    if (c.reward != first.reward) throw std::invalid_argument("candidates must share rewards");
  }
  if (log_sum_exp(log_weights) == -std::numeric_limits<double>::infinity())
    throw std::invalid_argument("all candidate weights vanish");
}

std::vector<double> FiniteSupportBelief::weights() const {
  double lse = log_sum_exp(log_weights);
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - lse);
  return w;
}

void DirichletBelief::validate() const {
  base.validate_dynamics();
  for (double r : base.reward)
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("base reward outside [0,1]");
  if (alpha.size() != base.kernel.size())
    throw std::invalid_argument("alpha table size mismatch");
  for (double a : alpha)
    if (!(a > 0.0)) throw std::invalid_argument("alpha entries must be positive");
}

DirichletBelief DirichletBelief::uniform_prior(const ZeroSumGame& base, double concentration) {
  DirichletBelief b;
  b.base = base;
  b.alpha.assign(base.kernel.size(), concentration);
  return b;
}

const ZeroSumGame& belief_base(const Belief& belief) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) return fs->candidates.front();
  return std::get<DirichletBelief>(belief).base;
}

namespace {

FiniteSupportBelief update_finite(const FiniteSupportBelief& belief, const Trajectory& traj) {
  FiniteSupportBelief out = belief;
  const ZeroSumGame& base = belief.candidates.front();
  if (static_cast<int>(traj.steps.size()) != base.horizon)
    throw std::invalid_argument("trajectory length mismatch");
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    const ZeroSumGame& env = out.candidates[i];
    double ll = 0.0;
    for (int h = 0; h < base.horizon; ++h) {
      const auto& st = traj.steps[h];
      int next = h + 1 < base.horizon ? traj.steps[h + 1].state : traj.final_state;
      double p = env.kernel_row(h, st.state, st.action_max, st.action_min)[next];
      ll += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    out.log_weights[i] += ll;
  }
  double lse = log_sum_exp(out.log_weights);
  if (!std::isfinite(lse))
    throw DegeneratePosterior("trajectory impossible under every candidate");
  for (double& lw : out.log_weights) lw -= lse;
  return out;
}

DirichletBelief update_dirichlet(const DirichletBelief& belief, const Trajectory& traj) {
  DirichletBelief out = belief;
  const ZeroSumGame& base = belief.base;
  if (static_cast<int>(traj.steps.size()) != base.horizon)
    throw std::invalid_argument("trajectory length mismatch");
  for (int h = 0; h < base.horizon; ++h) {
    const auto& st = traj.steps[h];
    int next = h + 1 < base.horizon ? traj.steps[h + 1].state : traj.final_state;
    out.alpha[base.row_index(h, st.state, st.action_max, st.action_min) * base.num_states +
              next] += 1.0;
  }
  return out;
}

}  // namespace

Belief posterior_update(const Belief& belief, const Trajectory& trajectory) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief))
    return update_finite(*fs, trajectory);
  return update_dirichlet(std::get<DirichletBelief>(belief), trajectory);
}

Belief posterior_update(const Belief& belief, const History& history) {
  Belief out = belief;
  for (const auto& traj : history) out = posterior_update(out, traj);
  return out;
}

ZeroSumGame sample_env(const Belief& belief, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    return fs->candidates[rng.categorical(w)];
  }
  const auto& d = std::get<DirichletBelief>(belief);
  ZeroSumGame env = d.base;
  const int S = env.num_states;
  for (std::size_t row = 0; row < env.num_rows(); ++row) {
    std::span<const double> a{d.alpha.data() + row * S, static_cast<std::size_t>(S)};
    std::span<double> out{env.kernel.data() + row * S, static_cast<std::size_t>(S)};
    rng.next_dirichlet(a, out);
  }
  return env;
}

std::vector<double> mean_kernel(const Belief& belief) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    std::vector<double> mean(fs->candidates.front().kernel.size(), 0.0);
    for (std::size_t i = 0; i < fs->candidates.size(); ++i) {
      const auto& k = fs->candidates[i].kernel;
      for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += w[i] * k[j];
    }
    return mean;
  }
  const auto& d = std::get<DirichletBelief>(belief);
  const int S = d.base.num_states;
  std::vector<double> mean(d.alpha.size(), 0.0);
  for (std::size_t row = 0; row < d.base.num_rows(); ++row) {
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) total += d.alpha[row * S + s2];
    for (int s2 = 0; s2 < S; ++s2) mean[row * S + s2] = d.alpha[row * S + s2] / total;
  }
  return mean;
}

double expected_kl_to_mean(const Belief& belief, int h, int s, int a, int b) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    const ZeroSumGame& base = fs->candidates.front();
    const int S = base.num_states;
    std::vector<double> w = fs->weights();
    std::vector<double> mean(S, 0.0);
    for (std::size_t i = 0; i < fs->candidates.size(); ++i) {
      auto row = fs->candidates[i].kernel_row(h, s, a, b);
      for (int s2 = 0; s2 < S; ++s2) mean[s2] += w[i] * row[s2];
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < fs->candidates.size(); ++i)
      if (w[i] > 0.0) kl += w[i] * kl_divergence(fs->candidates[i].kernel_row(h, s, a, b), mean);
    return kl;
  }
  // Dirichlet closed form:
  //   E[KL(P || mean)] = sum_i m_i (psi(a_i + 1) - psi(a0 + 1)) - sum_i m_i ln m_i
  // with m_i = a_i / a0.
  const auto& d = std::get<DirichletBelief>(belief);
  auto arow = d.alpha_row(h, s, a, b);
  double a0 = 0.0;
  for (double ai : arow) a0 += ai;
  double psi_total = digamma(a0 + 1.0);
  double kl = 0.0;
  for (double ai : arow) {
    double m = ai / a0;
    kl += m * (digamma(ai + 1.0) - psi_total) - m * std::log(m);
  }
  return kl < 0.0 ? 0.0 : kl;
}

std::vector<double> expected_kl_table(const Belief& belief) {
  const ZeroSumGame& base = belief_base(belief);
  std::vector<double> table(base.num_rows(), 0.0);
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    const int S = base.num_states;
    std::vector<double> w = fs->weights();
    std::vector<double> mean = mean_kernel(belief);
    for (std::size_t row = 0; row < base.num_rows(); ++row) {
      std::span<const double> mrow{mean.data() + row * S, static_cast<std::size_t>(S)};
      double kl = 0.0;
      for (std::size_t i = 0; i < fs->candidates.size(); ++i) {
        if (w[i] == 0.0) continue;
        std::span<const double> crow{fs->candidates[i].kernel.data() + row * S,
                                     static_cast<std::size_t>(S)};
        kl += w[i] * kl_divergence(crow, mrow);
      }
      table[row] = kl;
    }
    return table;
  }
  const ZeroSumGame& b = base;
  for (int h = 0; h < b.horizon; ++h)
    for (int s = 0; s < b.num_states; ++s)
      for (int a = 0; a < b.num_actions_max; ++a)
        for (int bb = 0; bb < b.num_actions_min; ++bb)
          table[b.row_index(h, s, a, bb)] = expected_kl_to_mean(belief, h, s, a, bb);
  return table;
}

FiniteSupportBelief empirical_support(const DirichletBelief& belief, int samples,
                                      std::uint64_t rng_seed) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  FiniteSupportBelief out;
  Belief wrapped = belief;
  out.candidates.reserve(samples);
  for (int i = 0; i < samples; ++i)
    out.candidates.push_back(
        sample_env(wrapped, derive_seed(rng_seed, {0xe3f0u, static_cast<std::uint64_t>(i)})));
  out.log_weights.assign(samples, -std::log(static_cast<double>(samples)));
  return out;
}

MeanEnvironment build_mean_env(const Belief& belief, double lambda, RewardShift shift) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const ZeroSumGame& base = belief_base(belief);
  MeanEnvironment out;
  out.lambda = lambda;
  out.shift = shift;
  out.env = base;
  out.env.kernel = mean_kernel(belief);
  if (lambda > 0.0) {
    const double sign = shift == RewardShift::Bonus ? 1.0 : -1.0;
    std::vector<double> kl = expected_kl_table(belief);
    for (std::size_t row = 0; row < base.num_rows(); ++row)
      out.env.reward[row] += sign * lambda * kl[row];
  }
  return out;
}

ExpectedValue expected_value(const Belief& belief, const MarkovPolicy& mu, const MarkovPolicy& nu,
                             std::optional<int> num_samples, std::uint64_t rng_seed) {
  if (const auto* fs = std::get_if<FiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    double total = 0.0;
    for (std::size_t i = 0; i < fs->candidates.size(); ++i) {
      if (w[i] == 0.0) continue;
      total += w[i] * evaluate_values(fs->candidates[i], mu, nu).initial_value(fs->candidates[i]);
    }
    return {total, std::nullopt};
  }
  if (!num_samples || *num_samples <= 0)
    throw std::invalid_argument("expected_value on a Dirichlet belief needs num_samples");
  double sum = 0.0, sum_sq = 0.0;
  const int n = *num_samples;
  for (int i = 0; i < n; ++i) {
    ZeroSumGame env = sample_env(belief, derive_seed(rng_seed, {0x5a17, static_cast<std::uint64_t>(i)}));
    double v = evaluate_values(env, mu, nu).initial_value(env);
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / n;
  double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

FiniteSupportBelief random_product_support(const ZeroSumGame& shape_and_rewards,
                                           const std::vector<int>& per_step_choices,
                                           std::uint64_t rng_seed) {
  const ZeroSumGame& base = shape_and_rewards;
  if (static_cast<int>(per_step_choices.size()) != base.horizon)
    throw std::invalid_argument("per_step_choices must have one entry per step");
  Rng rng(rng_seed);
  const int S = base.num_states;
  const std::size_t rows_per_step =
      static_cast<std::size_t>(base.num_states) * base.num_actions_max * base.num_actions_min;

  // Draw the per-step kernel alternatives and per-step weights.
  std::vector<std::vector<std::vector<double>>> step_kernels(base.horizon);
  std::vector<std::vector<double>> step_weights(base.horizon);
  for (int h = 0; h < base.horizon; ++h) {
    int m = per_step_choices[h];
    if (m <= 0) throw std::invalid_argument("per-step choice counts must be positive");
    step_kernels[h].resize(m);
    std::vector<double> raw(m);
    for (int c = 0; c < m; ++c) {
      auto& table = step_kernels[h][c];
      table.assign(rows_per_step * S, 0.0);
      std::vector<double> ones(S, 1.0);
      for (std::size_t r = 0; r < rows_per_step; ++r)
        rng.next_dirichlet(ones, {table.data() + r * S, static_cast<std::size_t>(S)});
      raw[c] = 0.2 + rng.next_double();
    }
    double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    step_weights[h].resize(m);
    for (int c = 0; c < m; ++c) step_weights[h][c] = raw[c] / total;
  }

  // Cartesian product of the per-step choices.
  FiniteSupportBelief belief;
  std::vector<int> choice(base.horizon, 0);
  for (;;) {
    ZeroSumGame env = base;
    double logw = 0.0;
    for (int h = 0; h < base.horizon; ++h) {
      const auto& table = step_kernels[h][choice[h]];
      std::copy(table.begin(), table.end(),
                env.kernel.begin() + static_cast<std::size_t>(h) * rows_per_step * S);
      logw += std::log(step_weights[h][choice[h]]);
    }
    belief.candidates.push_back(std::move(env));
    belief.log_weights.push_back(logw);

    int h = base.horizon - 1;
    while (h >= 0 && ++choice[h] == per_step_choices[h]) choice[h--] = 0;
    if (h < 0) break;
  }
  return belief;
}

}  // namespace mgids
