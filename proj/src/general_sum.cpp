#include "mgids/general_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/stats.hpp"

namespace mgids {

int GeneralSumGame::encode_action(const std::vector<int>& per_player) const {
  int joint = 0;
  for (std::size_t i = 0; i < action_counts.size(); ++i)
    joint = joint * action_counts[i] + per_player[i];
  return joint;
}

void GeneralSumGame::decode_action(int joint, std::vector<int>& per_player) const {
  per_player.assign(action_counts.size(), 0);
  for (int i = static_cast<int>(action_counts.size()) - 1; i >= 0; --i) {
    per_player[i] = joint % action_counts[i];
    joint /= action_counts[i];
  }
}

bool GeneralSumGame::same_shape(const GeneralSumGame& other) const {
  return num_players == other.num_players && horizon == other.horizon &&
         num_states == other.num_states && initial_state == other.initial_state &&
         action_counts == other.action_counts;
}

void GeneralSumGame::validate_dynamics() const {
  if (num_players <= 0) throw std::invalid_argument("num_players must be positive");
  if (horizon <= 0 || num_states <= 0) throw std::invalid_argument("bad dimensions");
  if (initial_state < 0 || initial_state >= num_states)
    throw std::invalid_argument("initial_state out of range");
  if (static_cast<int>(action_counts.size()) != num_players)
    throw std::invalid_argument("one action count per player required");
  for (int c : action_counts)
    if (c <= 0) throw std::invalid_argument("action counts must be positive");
  if (kernel.size() != num_rows() * static_cast<std::size_t>(num_states))
    throw std::invalid_argument("kernel size mismatch");
  for (std::size_t r = 0; r < num_rows(); ++r) {
    double sum = 0.0;
    for (int s2 = 0; s2 < num_states; ++s2) {
      double p = kernel[r * num_states + s2];
      if (p < 0.0) throw std::invalid_argument("kernel entry negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("kernel row does not sum to 1");
  }
}

void GeneralSumGame::validate() const {
  validate_dynamics();
  if (static_cast<int>(rewards.size()) != num_players)
    throw std::invalid_argument("one reward table per player required");
  for (const auto& table : rewards) {
    if (table.size() != num_rows()) throw std::invalid_argument("reward table size mismatch");
    for (double r : table)
      if (r < 0.0 || r > 1.0) throw std::invalid_argument("reward outside [0,1]");
  }
}

std::size_t PurePolicyProfileSet::num_profiles() const {
  std::size_t n = 1;
  for (const auto& set : per_player) n *= set.size();
  return n;
}

void PurePolicyProfileSet::validate(const GeneralSumGame& env, std::size_t guard) const {
  if (static_cast<int>(per_player.size()) != env.num_players)
    throw std::invalid_argument("one pure set per player required");
  for (int i = 0; i < env.num_players; ++i) {
    if (per_player[i].empty()) throw std::invalid_argument("pure sets must be nonempty");
    for (const auto& pol : per_player[i]) {
      if (pol.actions.size() != static_cast<std::size_t>(env.horizon) * env.num_states)
        throw std::invalid_argument("pure policy table size mismatch");
      for (int a : pol.actions)
        if (a < 0 || a >= env.action_counts[i])
          throw std::invalid_argument("pure policy action out of range");
    }
  }
  if (num_profiles() > guard)
    throw EnumerationTooLarge("pure profile space exceeds enumeration guard");
}

PurePolicyProfileSet PurePolicyProfileSet::all_deterministic(const GeneralSumGame& env,
                                                             std::size_t guard_per_player) {
  PurePolicyProfileSet out;
  out.per_player.resize(env.num_players);
  const std::size_t cells = static_cast<std::size_t>(env.horizon) * env.num_states;
  for (int i = 0; i < env.num_players; ++i) {
    double count = std::pow(static_cast<double>(env.action_counts[i]),
                            static_cast<double>(cells));
    if (count > static_cast<double>(guard_per_player))
      throw EnumerationTooLarge("deterministic policy class exceeds enumeration guard");
    std::vector<int> actions(cells, 0);
    for (;;) {
      out.per_player[i].push_back(PurePolicy{actions});
      std::size_t k = 0;
      while (k < cells && ++actions[k] == env.action_counts[i]) actions[k++] = 0;
      if (k == cells) break;
    }
  }
  return out;
}

void MixedJointPolicy::validate(const GeneralSumGame& env) const {
  support.validate(env);
  if (kind == Kind::Joint) {
    if (joint_prob.size() != support.num_profiles())
      throw std::invalid_argument("joint distribution size mismatch");
    double sum = 0.0;
    for (double p : joint_prob) {
      if (p < -1e-12) throw std::invalid_argument("joint probability negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("joint distribution does not sum to 1");
  } else {
    if (marginals.size() != support.per_player.size())
      throw std::invalid_argument("one marginal per player required");
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      if (marginals[i].size() != support.per_player[i].size())
        throw std::invalid_argument("marginal size mismatch");
      double sum = std::accumulate(marginals[i].begin(), marginals[i].end(), 0.0);
      if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("marginal does not sum to 1");
    }
  }
}

std::vector<double> MixedJointPolicy::profile_distribution() const {
  if (kind == Kind::Joint) return joint_prob;
  std::vector<double> out(support.num_profiles(), 0.0);
  const int players = static_cast<int>(support.per_player.size());
  std::vector<int> choice(players, 0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    std::size_t rem = idx;
    double p = 1.0;
    for (int i = players - 1; i >= 0; --i) {
      int n = static_cast<int>(support.per_player[i].size());
      choice[i] = static_cast<int>(rem % n);
      rem /= n;
      p *= marginals[i][choice[i]];
    }
    out[idx] = p;
  }
  return out;
}

std::vector<PurePolicy> MixedJointPolicy::realize(std::uint64_t rng_seed) const {
  const int players = static_cast<int>(support.per_player.size());
  std::vector<PurePolicy> profile(players);
  if (kind == Kind::Joint) {
    Rng rng(rng_seed);
    std::size_t idx = 0;
    // One correlated draw over profile combos.
    std::vector<double> dist = joint_prob;
    idx = static_cast<std::size_t>(rng.categorical(dist));
    for (int i = players - 1; i >= 0; --i) {
      int n = static_cast<int>(support.per_player[i].size());
      profile[i] = support.per_player[i][idx % n];
      idx /= n;
    }
    return profile;
  }
  for (int i = 0; i < players; ++i) {
    Rng rng(derive_seed(rng_seed, {0x9e1du, static_cast<std::uint64_t>(i)}));
    profile[i] = support.per_player[i][rng.categorical(marginals[i])];
  }
  return profile;
}

MixedJointPolicy MixedJointPolicy::point_mass(PurePolicyProfileSet support_one_each) {
  MixedJointPolicy pi;
  pi.kind = Kind::Joint;
  pi.support = std::move(support_one_each);
  pi.joint_prob.assign(pi.support.num_profiles(), 0.0);
  pi.joint_prob[0] = 1.0;
  return pi;
}

std::vector<double> evaluate_profile_gs(const GeneralSumGame& env,
                                        const std::vector<PurePolicy>& profile) {
  const int H = env.horizon, S = env.num_states, N = env.num_players;
  std::vector<double> v(static_cast<std::size_t>(N) * S, 0.0), next(v.size(), 0.0);
  std::vector<int> per_player(N);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < N; ++i) per_player[i] = profile[i].action_at(h, s, S);
      int joint = env.encode_action(per_player);
      auto p = env.kernel_row(h, s, joint);
      for (int i = 0; i < N; ++i) {
        double q = env.rewards[i][env.row_index(h, s, joint)];
        for (int s2 = 0; s2 < S; ++s2) q += p[s2] * next[static_cast<std::size_t>(i) * S + s2];
        v[static_cast<std::size_t>(i) * S + s] = q;
      }
    }
    std::swap(v, next);
  }
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) out[i] = next[static_cast<std::size_t>(i) * S + env.initial_state];
  return out;
}

std::vector<double> evaluate_values_gs(const GeneralSumGame& env, const MixedJointPolicy& pi) {
  pi.validate(env);
  std::vector<double> dist = pi.profile_distribution();
  const int players = env.num_players;
  std::vector<double> out(players, 0.0);
  std::vector<PurePolicy> profile(players);
  for (std::size_t idx = 0; idx < dist.size(); ++idx) {
    if (dist[idx] == 0.0) continue;
    std::size_t rem = idx;
    for (int i = players - 1; i >= 0; --i) {
      int n = static_cast<int>(pi.support.per_player[i].size());
      profile[i] = pi.support.per_player[i][rem % n];
      rem /= n;
    }
    std::vector<double> values = evaluate_profile_gs(env, profile);
    for (int i = 0; i < players; ++i) out[i] += dist[idx] * values[i];
  }
  return out;
}

namespace {

// Distribution over the opponents' profile combos when player i is summed
// out; entries are indexed by the profile combo with player i's slot forced
// to zero, alongside the decoded opponent choices.
struct OpponentMixture {
  std::vector<double> prob;                 // per opponent combo
  std::vector<std::vector<int>> choices;    // per combo: per-player set index (entry i unused)
};

OpponentMixture opponents_of(const MixedJointPolicy& pi, int player) {
  const int players = static_cast<int>(pi.support.per_player.size());
  std::vector<double> dist = pi.profile_distribution();
  std::vector<std::size_t> sizes(players);
  for (int i = 0; i < players; ++i) sizes[i] = pi.support.per_player[i].size();

  std::size_t combos = 1;
  for (int i = 0; i < players; ++i)
    if (i != player) combos *= sizes[i];

  OpponentMixture out;
  out.prob.assign(combos, 0.0);
  out.choices.assign(combos, std::vector<int>(players, 0));
  std::vector<int> choice(players, 0);
  for (std::size_t idx = 0; idx < dist.size(); ++idx) {
    std::size_t rem = idx;
    for (int i = players - 1; i >= 0; --i) {
      choice[i] = static_cast<int>(rem % sizes[i]);
      rem /= sizes[i];
    }
    std::size_t combo = 0;
    for (int i = 0; i < players; ++i)
      if (i != player) combo = combo * sizes[i] + choice[i];
    out.prob[combo] += dist[idx];
    out.choices[combo] = choice;
  }
  return out;
}

}  // namespace

GsBestResponse best_response_gs(const GeneralSumGame& env, const MixedJointPolicy& pi,
                                int player, const std::vector<PurePolicy>& pure_set_i) {
  if (pure_set_i.empty()) throw std::invalid_argument("empty pure set");
  pi.validate(env);
  OpponentMixture opp = opponents_of(pi, player);

  GsBestResponse best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<PurePolicy> profile(env.num_players);
  for (std::size_t cand = 0; cand < pure_set_i.size(); ++cand) {
    double value = 0.0;
    for (std::size_t combo = 0; combo < opp.prob.size(); ++combo) {
      if (opp.prob[combo] == 0.0) continue;
      for (int j = 0; j < env.num_players; ++j)
        profile[j] = pi.support.per_player[j][opp.choices[combo][j]];
      profile[player] = pure_set_i[cand];
      value += opp.prob[combo] * evaluate_profile_gs(env, profile)[player];
    }
    if (value > best.value + 1e-15) {
      best.value = value;
      best.index = static_cast<int>(cand);
    }
  }
  best.policy = pure_set_i[best.index];
  return best;
}

void GsFiniteSupportBelief::validate() const {
  if (candidates.empty()) throw std::invalid_argument("belief needs candidates");
  if (log_weights.size() != candidates.size())
    throw std::invalid_argument("one log weight per candidate required");
  for (const auto& c : candidates) {
    c.validate();
    if (!c.same_shape(candidates.front()))
      throw std::invalid_argument("candidate shapes differ");
    if (c.rewards != candidates.front().rewards)
      throw std::invalid_argument("candidates must share rewards");
  }
}

std::vector<double> GsFiniteSupportBelief::weights() const {
  double lse = log_sum_exp(log_weights);
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - lse);
  return w;
}

void GsDirichletBelief::validate() const {
  base.validate();
  if (alpha.size() != base.kernel.size()) throw std::invalid_argument("alpha size mismatch");
  for (double a : alpha)
    if (!(a > 0.0)) throw std::invalid_argument("alpha entries must be positive");
}

const GeneralSumGame& gs_belief_base(const GsBelief& belief) {
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief))
    return fs->candidates.front();
  return std::get<GsDirichletBelief>(belief).base;
}

GsFiniteSupportBelief gs_random_product_support(const GeneralSumGame& shape_and_rewards,
                                                const std::vector<int>& per_step_choices,
                                                std::uint64_t rng_seed) {
  const GeneralSumGame& base = shape_and_rewards;
  if (static_cast<int>(per_step_choices.size()) != base.horizon)
    throw std::invalid_argument("per_step_choices must have one entry per step");
  Rng rng(rng_seed);
  const int S = base.num_states;
  const std::size_t rows_per_step =
      static_cast<std::size_t>(base.num_states) * base.num_joint_actions();

  std::vector<std::vector<std::vector<double>>> step_kernels(base.horizon);
  std::vector<std::vector<double>> step_weights(base.horizon);
  std::vector<double> ones(S, 1.0);
  for (int h = 0; h < base.horizon; ++h) {
    int m = per_step_choices[h];
    if (m <= 0) throw std::invalid_argument("per-step choice counts must be positive");
    step_kernels[h].resize(m);
    std::vector<double> raw(m);
    for (int c = 0; c < m; ++c) {
      step_kernels[h][c].assign(rows_per_step * S, 0.0);
      for (std::size_t r = 0; r < rows_per_step; ++r)
        rng.next_dirichlet(ones,
                           {step_kernels[h][c].data() + r * S, static_cast<std::size_t>(S)});
      raw[c] = 0.2 + rng.next_double();
    }
    double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    step_weights[h].resize(m);
    for (int c = 0; c < m; ++c) step_weights[h][c] = raw[c] / total;
  }

  GsFiniteSupportBelief belief;
  std::vector<int> choice(base.horizon, 0);
  for (;;) {
    GeneralSumGame env = base;
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

GsBelief gs_posterior_update(const GsBelief& belief, const GsTrajectory& traj) {
  const GeneralSumGame& base = gs_belief_base(belief);
  if (static_cast<int>(traj.steps.size()) != base.horizon)
    throw std::invalid_argument("trajectory length mismatch");
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief)) {
    GsFiniteSupportBelief out = *fs;
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
      double ll = 0.0;
      for (int h = 0; h < base.horizon; ++h) {
        const auto& st = traj.steps[h];
        int next = h + 1 < base.horizon ? traj.steps[h + 1].state : traj.final_state;
        double p = out.candidates[i].kernel_row(h, st.state, st.joint_action)[next];
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
  GsDirichletBelief out = std::get<GsDirichletBelief>(belief);
  for (int h = 0; h < base.horizon; ++h) {
    const auto& st = traj.steps[h];
    int next = h + 1 < base.horizon ? traj.steps[h + 1].state : traj.final_state;
    out.alpha[base.row_index(h, st.state, st.joint_action) * base.num_states + next] += 1.0;
  }
  return out;
}

GeneralSumGame gs_sample_env(const GsBelief& belief, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    return fs->candidates[rng.categorical(w)];
  }
  const auto& d = std::get<GsDirichletBelief>(belief);
  GeneralSumGame env = d.base;
  const int S = env.num_states;
  for (std::size_t row = 0; row < env.num_rows(); ++row)
    rng.next_dirichlet({d.alpha.data() + row * S, static_cast<std::size_t>(S)},
                       {env.kernel.data() + row * S, static_cast<std::size_t>(S)});
  return env;
}

std::vector<double> gs_mean_kernel(const GsBelief& belief) {
  const GeneralSumGame& base = gs_belief_base(belief);
  const int S = base.num_states;
  std::vector<double> mean(base.kernel.size(), 0.0);
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
    for (std::size_t i = 0; i < fs->candidates.size(); ++i)
      for (std::size_t j = 0; j < mean.size(); ++j)
        mean[j] += w[i] * fs->candidates[i].kernel[j];
    return mean;
  }
  const auto& d = std::get<GsDirichletBelief>(belief);
  for (std::size_t row = 0; row < base.num_rows(); ++row) {
    double total = 0.0;
    for (int s2 = 0; s2 < S; ++s2) total += d.alpha[row * S + s2];
    for (int s2 = 0; s2 < S; ++s2) mean[row * S + s2] = d.alpha[row * S + s2] / total;
  }
  return mean;
}

std::vector<double> gs_expected_kl_table(const GsBelief& belief) {
  const GeneralSumGame& base = gs_belief_base(belief);
  const int S = base.num_states;
  std::vector<double> table(base.num_rows(), 0.0);
  std::vector<double> mean = gs_mean_kernel(belief);
  if (const auto* fs = std::get_if<GsFiniteSupportBelief>(&belief)) {
    std::vector<double> w = fs->weights();
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
  const auto& d = std::get<GsDirichletBelief>(belief);
  for (std::size_t row = 0; row < base.num_rows(); ++row) {
    double a0 = 0.0;
    for (int s2 = 0; s2 < S; ++s2) a0 += d.alpha[row * S + s2];
    double psi_total = digamma(a0 + 1.0);
    double kl = 0.0;
    for (int s2 = 0; s2 < S; ++s2) {
      double m = d.alpha[row * S + s2] / a0;
      kl += m * (digamma(d.alpha[row * S + s2] + 1.0) - psi_total) - m * std::log(m);
    }
    table[row] = std::max(0.0, kl);
  }
  return table;
}

GeneralSumGame build_mean_env_gs(const GsBelief& belief, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  GeneralSumGame env = gs_belief_base(belief);
  env.kernel = gs_mean_kernel(belief);
  if (lambda > 0.0) {
    std::vector<double> kl = gs_expected_kl_table(belief);
    for (auto& table : env.rewards)
      for (std::size_t row = 0; row < table.size(); ++row) table[row] += lambda * kl[row];
  }
  return env;
}

namespace {

// Occupancy over (h, s, joint action) of a pure profile in a fixed-kernel
// environment, accumulated into `occ` with weight `w`.
void accumulate_profile_occupancy(const GeneralSumGame& env, const std::vector<double>& kernel,
                                  const std::vector<PurePolicy>& profile, double w,
                                  std::vector<double>& occ) {
  const int H = env.horizon, S = env.num_states, N = env.num_players;
  std::vector<double> state(S, 0.0), next(S, 0.0);
  state[env.initial_state] = w;
  std::vector<int> per_player(N);
  for (int h = 0; h < H; ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (state[s] == 0.0) continue;
      for (int i = 0; i < N; ++i) per_player[i] = profile[i].action_at(h, s, S);
      int joint = env.encode_action(per_player);
      std::size_t row = env.row_index(h, s, joint);
      occ[row] += state[s];
      const double* p = kernel.data() + row * S;
      for (int s2 = 0; s2 < S; ++s2) next[s2] += state[s] * p[s2];
    }
    std::swap(state, next);
  }
}

}  // namespace

double mutual_info_trajectory_gs(const GsBelief& belief, const MixedJointPolicy& pi) {
  const GeneralSumGame& base = gs_belief_base(belief);
  pi.validate(base);
  std::vector<double> mean = gs_mean_kernel(belief);
  std::vector<double> kl = gs_expected_kl_table(belief);
  std::vector<double> occ(base.num_rows(), 0.0);
  std::vector<double> dist = pi.profile_distribution();
  std::vector<PurePolicy> profile(base.num_players);
  for (std::size_t idx = 0; idx < dist.size(); ++idx) {
    if (dist[idx] == 0.0) continue;
    std::size_t rem = idx;
    for (int i = base.num_players - 1; i >= 0; --i) {
      int n = static_cast<int>(pi.support.per_player[i].size());
      profile[i] = pi.support.per_player[i][rem % n];
      rem /= n;
    }
    accumulate_profile_occupancy(base, mean, profile, dist[idx], occ);
  }
  double mi = 0.0;
  for (std::size_t row = 0; row < occ.size(); ++row) mi += occ[row] * kl[row];
  return mi;
}

double mutual_info_trajectory_enum_gs(const GsFiniteSupportBelief& belief,
                                      const MixedJointPolicy& pi) {
  belief.validate();
  const GeneralSumGame& base = belief.candidates.front();
  pi.validate(base);
  double per_step = static_cast<double>(base.num_states) * base.num_joint_actions();
  if (std::pow(per_step, base.horizon) > 1e6)
    throw EnumerationTooLarge("trajectory space exceeds enumeration guard");

  const std::size_t n = belief.candidates.size();
  std::vector<double> w = belief.weights();
  std::vector<double> dist = pi.profile_distribution();

  // Trajectory law factors into (profile mixture action term) x (per
  // candidate kernel term); enumerate state/action paths carrying both.
  const int S = base.num_states, J = base.num_joint_actions(), N = base.num_players;
  std::vector<std::vector<PurePolicy>> profiles;
  std::vector<double> profile_w;
  {
    std::vector<PurePolicy> profile(N);
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
      if (dist[idx] == 0.0) continue;
      std::size_t rem = idx;
      for (int i = N - 1; i >= 0; --i) {
        int m = static_cast<int>(pi.support.per_player[i].size());
        profile[i] = pi.support.per_player[i][rem % m];
        rem /= m;
      }
      profiles.push_back(profile);
      profile_w.push_back(dist[idx]);
    }
  }

  double total = 0.0;
  std::vector<int> per_player(N);
  auto visit = [&](auto&& self, int h, int state, const std::vector<double>& action_prob,
                   const std::vector<double>& kernel_prob) -> void {
    if (h == base.horizon) {
      double act = 0.0;
      for (double ap : action_prob) act += ap;
      if (act == 0.0) return;
      double mix = 0.0;
      for (std::size_t e = 0; e < n; ++e) mix += w[e] * kernel_prob[e];
      if (mix <= 0.0) return;
      for (std::size_t e = 0; e < n; ++e)
        if (w[e] > 0.0 && kernel_prob[e] > 0.0)
          total += act * w[e] * kernel_prob[e] * std::log(kernel_prob[e] / mix);
      return;
    }
    std::vector<double> next_ap(profiles.size()), next_kp(n);
    for (int joint = 0; joint < J; ++joint) {
      bool any = false;
      for (std::size_t c = 0; c < profiles.size(); ++c) {
        base.decode_action(joint, per_player);
        bool match = true;
        for (int i = 0; i < N; ++i)
          if (profiles[c][i].action_at(h, state, S) != per_player[i]) match = false;
        next_ap[c] = match ? action_prob[c] : 0.0;
        any = any || next_ap[c] > 0.0;
      }
      if (!any) continue;
      for (int s2 = 0; s2 < S; ++s2) {
        bool alive = false;
        for (std::size_t e = 0; e < n; ++e) {
          next_kp[e] = kernel_prob[e] * belief.candidates[e].kernel_row(h, state, joint)[s2];
          alive = alive || next_kp[e] > 0.0;
        }
        if (alive) self(self, h + 1, s2, next_ap, next_kp);
      }
    }
  };
  std::vector<double> ap0 = profile_w, kp0(n, 1.0);
  visit(visit, 0, base.initial_state, ap0, kp0);
  return std::max(0.0, total);
}

GsTrajectory simulate_episode_gs(const GeneralSumGame& env,
                                 const std::vector<PurePolicy>& profile,
                                 std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  GsTrajectory traj;
  traj.steps.reserve(env.horizon);
  std::vector<int> per_player(env.num_players);
  int s = env.initial_state;
  for (int h = 0; h < env.horizon; ++h) {
    for (int i = 0; i < env.num_players; ++i)
      per_player[i] = profile[i].action_at(h, s, env.num_states);
    int joint = env.encode_action(per_player);
    int s2 = rng.categorical(env.kernel_row(h, s, joint));
    traj.steps.push_back({s, joint});
    s = s2;
  }
  traj.final_state = s;
  return traj;
}

MixedJointPolicy reg_maids_gs_select(const GsBelief& belief, double lambda,
                                     const PurePolicyProfileSet& pure_sets,
                                     EquilibriumTarget target) {
  const GeneralSumGame& base = gs_belief_base(belief);
  pure_sets.validate(base);
  GeneralSumGame mean_env = build_mean_env_gs(belief, lambda);

  NormalFormGame game;
  for (const auto& set : pure_sets.per_player)
    game.strategy_counts.push_back(static_cast<int>(set.size()));
  game.payoffs.assign(base.num_players, std::vector<double>(pure_sets.num_profiles(), 0.0));
  std::vector<PurePolicy> profile(base.num_players);
  for (std::size_t idx = 0; idx < pure_sets.num_profiles(); ++idx) {
    std::size_t rem = idx;
    for (int i = base.num_players - 1; i >= 0; --i) {
      int n = static_cast<int>(pure_sets.per_player[i].size());
      profile[i] = pure_sets.per_player[i][rem % n];
      rem /= n;
    }
    std::vector<double> values = evaluate_profile_gs(mean_env, profile);
    for (int i = 0; i < base.num_players; ++i) game.payoffs[i][idx] = values[i];
  }

  MixedJointPolicy out;
  out.support = pure_sets;
  if (target == EquilibriumTarget::CCE) {
    out.kind = MixedJointPolicy::Kind::Joint;
    out.joint_prob = cce_solve(game).prob;
  } else {
    out.kind = MixedJointPolicy::Kind::Product;
    out.marginals = ne_solve(game).marginals;  // throws ConvergenceFailure on failure
  }
  return out;
}

std::vector<double> equilibrium_gap(const GeneralSumGame& env, const MixedJointPolicy& pi,
                                    const PurePolicyProfileSet& pure_sets) {
  pure_sets.validate(env);
  std::vector<double> base_values = evaluate_values_gs(env, pi);
  std::vector<double> gaps(env.num_players, 0.0);
  for (int i = 0; i < env.num_players; ++i) {
    GsBestResponse br = best_response_gs(env, pi, i, pure_sets.per_player[i]);
    gaps[i] = br.value - base_values[i];
  }
  return gaps;
}

GeneralSumGame embed_zero_sum(const ZeroSumGame& zs) {
  GeneralSumGame env;
  env.num_players = 2;
  env.horizon = zs.horizon;
  env.num_states = zs.num_states;
  env.initial_state = zs.initial_state;
  env.action_counts = {zs.num_actions_max, zs.num_actions_min};
  env.kernel = zs.kernel;
  env.rewards.assign(2, std::vector<double>(zs.reward.size(), 0.0));
  for (std::size_t row = 0; row < zs.reward.size(); ++row) {
    env.rewards[0][row] = zs.reward[row];
    env.rewards[1][row] = 1.0 - zs.reward[row];
  }
  return env;
}

}  // namespace mgids
