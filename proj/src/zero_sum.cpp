#include "mgids/zero_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "mgids/matrix_games.hpp"

namespace mgids {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_positive(int v, const char* name) {
  if (v <= 0) throw std::invalid_argument(std::string(name) + " must be positive");
}

void require_pair(const ZeroSumGame& env, const MarkovPolicy& mu, const MarkovPolicy& nu) {
  if (!mu.matches(env) || mu.side != PlayerSide::Max)
    throw std::invalid_argument("max policy does not match environment");
  if (!nu.matches(env) || nu.side != PlayerSide::Min)
    throw std::invalid_argument("min policy does not match environment");
}

}  // namespace

ZeroSumGame ZeroSumGame::zeros(int horizon, int num_states, int actions_max, int actions_min,
                               int initial_state) {
  ZeroSumGame env;
  env.horizon = horizon;
  env.num_states = num_states;
  env.num_actions_max = actions_max;
  env.num_actions_min = actions_min;
  env.initial_state = initial_state;
  env.kernel.assign(env.num_rows() * num_states, 0.0);
  env.reward.assign(env.num_rows(), 0.0);
  return env;
}

void ZeroSumGame::validate_dynamics() const {
  check_positive(horizon, "horizon");
  check_positive(num_states, "num_states");
  check_positive(num_actions_max, "num_actions_max");
  check_positive(num_actions_min, "num_actions_min");
  if (initial_state < 0 || initial_state >= num_states)
    throw std::invalid_argument("initial_state out of range");
  if (kernel.size() != num_rows() * static_cast<std::size_t>(num_states))
    throw std::invalid_argument("kernel size mismatch");
  if (reward.size() != num_rows()) throw std::invalid_argument("reward size mismatch");
  for (std::size_t r = 0; r < num_rows(); ++r) {
    double sum = 0.0;
    for (int s2 = 0; s2 < num_states; ++s2) {
      double p = kernel[r * num_states + s2];
      if (p < 0.0) throw std::invalid_argument("kernel entry negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw std::invalid_argument("kernel row does not sum to 1");
  }
}

void ZeroSumGame::validate() const {
  validate_dynamics();
  for (double r : reward)
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("reward outside [0,1]");
}

MarkovPolicy MarkovPolicy::uniform(PlayerSide side, int horizon, int num_states,
                                   int num_actions) {
  MarkovPolicy p;
  p.side = side;
  p.horizon = horizon;
  p.num_states = num_states;
  p.num_actions = num_actions;
  p.dist.assign(static_cast<std::size_t>(horizon) * num_states * num_actions,
                1.0 / num_actions);
  return p;
}

MarkovPolicy MarkovPolicy::deterministic(PlayerSide side, int horizon, int num_states,
                                         int num_actions, const std::vector<int>& actions) {
  if (actions.size() != static_cast<std::size_t>(horizon) * num_states)
    throw std::invalid_argument("deterministic policy needs one action per (h, s)");
  MarkovPolicy p;
  p.side = side;
  p.horizon = horizon;
  p.num_states = num_states;
  p.num_actions = num_actions;
  p.dist.assign(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0);
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s) {
      int a = actions[static_cast<std::size_t>(h) * num_states + s];
      if (a < 0 || a >= num_actions) throw std::invalid_argument("action index out of range");
      p.row(h, s)[a] = 1.0;
    }
  return p;
}

void MarkovPolicy::validate() const {
  check_positive(horizon, "horizon");
  check_positive(num_states, "num_states");
  check_positive(num_actions, "num_actions");
  if (dist.size() != static_cast<std::size_t>(horizon) * num_states * num_actions)
    throw std::invalid_argument("policy table size mismatch");
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s) {
      double sum = 0.0;
      for (double p : row(h, s)) {
        if (p < 0.0) throw std::invalid_argument("policy entry negative");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("policy row does not sum to 1");
    }
}

bool MarkovPolicy::matches(const ZeroSumGame& env) const {
  int expected = side == PlayerSide::Max ? env.num_actions_max : env.num_actions_min;
  return horizon == env.horizon && num_states == env.num_states && num_actions == expected;
}

ValueTables evaluate_values(const ZeroSumGame& env, const MarkovPolicy& mu,
                            const MarkovPolicy& nu) {
  require_pair(env, mu, nu);
  const int H = env.horizon, S = env.num_states, A = env.num_actions_max,
            B = env.num_actions_min;
  ValueTables out;
  out.horizon = H;
  out.num_states = S;
  out.num_actions_max = A;
  out.num_actions_min = B;
  out.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  out.q.assign(env.num_rows(), 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = out.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      auto mu_row = mu.row(h, s);
      auto nu_row = nu.row(h, s);
      double v = 0.0;
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          auto p = env.kernel_row(h, s, a, b);
          double q = env.reward_at(h, s, a, b);
          for (int s2 = 0; s2 < S; ++s2) q += p[s2] * v_next[s2];
          out.q[env.row_index(h, s, a, b)] = q;
          v += mu_row[a] * nu_row[b] * q;
        }
      }
      out.v[static_cast<std::size_t>(h) * S + s] = v;
    }
  }
  return out;
}

namespace {

// Shared backward induction for both one-sided best responses.
BestResponse best_response_impl(const ZeroSumGame& env, const MarkovPolicy& fixed,
                                PlayerSide responder) {
  const int H = env.horizon, S = env.num_states, A = env.num_actions_max,
            B = env.num_actions_min;
  const bool min_side = responder == PlayerSide::Min;
  const int own_actions = min_side ? B : A;

  BestResponse out;
  out.values.horizon = H;
  out.values.num_states = S;
  out.values.num_actions_max = A;
  out.values.num_actions_min = B;
  out.values.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  out.values.q.assign(env.num_rows(), 0.0);
  std::vector<int> chosen(static_cast<std::size_t>(H) * S, 0);

  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = out.values.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      auto fixed_row = fixed.row(h, s);
      double best = 0.0;
      int best_action = 0;
      for (int own = 0; own < own_actions; ++own) {
        double val = 0.0;
        for (int other = 0; other < static_cast<int>(fixed_row.size()); ++other) {
          int a = min_side ? other : own;
          int b = min_side ? own : other;
          auto p = env.kernel_row(h, s, a, b);
          double q = env.reward_at(h, s, a, b);
          for (int s2 = 0; s2 < S; ++s2) q += p[s2] * v_next[s2];
          out.values.q[env.row_index(h, s, a, b)] = q;
          val += fixed_row[other] * q;
        }
        bool better = min_side ? val < best : val > best;
        if (own == 0 || better) {
          best = val;
          best_action = own;
        }
      }
      out.values.v[static_cast<std::size_t>(h) * S + s] = best;
      chosen[static_cast<std::size_t>(h) * S + s] = best_action;
    }
  }
  out.policy = MarkovPolicy::deterministic(responder, H, S, own_actions, chosen);
  return out;
}

}  // namespace

BestResponse best_response_min(const ZeroSumGame& env, const MarkovPolicy& mu) {
  if (!mu.matches(env) || mu.side != PlayerSide::Max)
    throw std::invalid_argument("best_response_min expects a matching max policy");
  return best_response_impl(env, mu, PlayerSide::Min);
}

BestResponse best_response_max(const ZeroSumGame& env, const MarkovPolicy& nu) {
  if (!nu.matches(env) || nu.side != PlayerSide::Min)
    throw std::invalid_argument("best_response_max expects a matching min policy");
  return best_response_impl(env, nu, PlayerSide::Max);
}

NashSolution solve_nash(const ZeroSumGame& env) {
  env.validate_dynamics();
  const int H = env.horizon, S = env.num_states, A = env.num_actions_max,
            B = env.num_actions_min;
  NashSolution out;
  out.values.horizon = H;
  out.values.num_states = S;
  out.values.num_actions_max = A;
  out.values.num_actions_min = B;
  out.values.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  out.values.q.assign(env.num_rows(), 0.0);
  out.mu = MarkovPolicy::uniform(PlayerSide::Max, H, S, A);
  out.nu = MarkovPolicy::uniform(PlayerSide::Min, H, S, B);

  MatrixGame stage;
  stage.num_rows = A;
  stage.num_cols = B;
  stage.payoff.assign(static_cast<std::size_t>(A) * B, 0.0);
  for (int h = H - 1; h >= 0; --h) {
    const double* v_next = out.values.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a)
        for (int b = 0; b < B; ++b) {
          auto p = env.kernel_row(h, s, a, b);
          double q = env.reward_at(h, s, a, b);
          for (int s2 = 0; s2 < S; ++s2) q += p[s2] * v_next[s2];
          out.values.q[env.row_index(h, s, a, b)] = q;
          stage.payoff[static_cast<std::size_t>(a) * B + b] = q;
        }
      MinimaxSolution sol = minimax_solve(stage);
      out.values.v[static_cast<std::size_t>(h) * S + s] = sol.value;
      std::copy(sol.row_strategy.begin(), sol.row_strategy.end(), out.mu.row(h, s).begin());
      std::copy(sol.col_strategy.begin(), sol.col_strategy.end(), out.nu.row(h, s).begin());
    }
  }
  return out;
}

OccupancyTable occupancy(const ZeroSumGame& env, const MarkovPolicy& mu,
                         const MarkovPolicy& nu) {
  require_pair(env, mu, nu);
  const int H = env.horizon, S = env.num_states, A = env.num_actions_max,
            B = env.num_actions_min;
  OccupancyTable out;
  out.horizon = H;
  out.num_states = S;
  out.num_actions_max = A;
  out.num_actions_min = B;
  out.d.assign(env.num_rows(), 0.0);

  std::vector<double> state_dist(S, 0.0), next_dist(S, 0.0);
  state_dist[env.initial_state] = 1.0;
  for (int h = 0; h < H; ++h) {
    std::fill(next_dist.begin(), next_dist.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (state_dist[s] == 0.0) continue;
      auto mu_row = mu.row(h, s);
      auto nu_row = nu.row(h, s);
      for (int a = 0; a < A; ++a) {
        if (mu_row[a] == 0.0) continue;
        for (int b = 0; b < B; ++b) {
          double mass = state_dist[s] * mu_row[a] * nu_row[b];
          if (mass == 0.0) continue;
          out.d[env.row_index(h, s, a, b)] = mass;
          auto p = env.kernel_row(h, s, a, b);
          for (int s2 = 0; s2 < S; ++s2) next_dist[s2] += mass * p[s2];
        }
      }
    }
    std::swap(state_dist, next_dist);
  }
  return out;
}

Trajectory simulate_episode(const ZeroSumGame& env, const MarkovPolicy& mu,
                            const MarkovPolicy& nu, std::uint64_t rng_seed) {
  require_pair(env, mu, nu);
  Rng rng(rng_seed);
  Trajectory traj;
  traj.steps.reserve(env.horizon);
  int s = env.initial_state;
  for (int h = 0; h < env.horizon; ++h) {
    int a = rng.categorical(mu.row(h, s));
    int b = rng.categorical(nu.row(h, s));
    double r = env.reward_at(h, s, a, b);
    int s2 = rng.categorical(env.kernel_row(h, s, a, b));
    traj.steps.push_back({s, a, b, r});
    s = s2;
  }
  traj.final_state = s;
  return traj;
}

ValueGapDecomposition value_gap_decomposition(const ZeroSumGame& e, const ZeroSumGame& e2,
                                              const MarkovPolicy& mu, const MarkovPolicy& nu) {
  if (!e.same_shape(e2)) throw std::invalid_argument("environments differ in shape");
  if (e.reward != e2.reward) throw std::invalid_argument("environments differ in rewards");
  ValueTables values_e = evaluate_values(e, mu, nu);
  OccupancyTable occ = occupancy(e2, mu, nu);

  const int H = e.horizon, S = e.num_states, A = e.num_actions_max, B = e.num_actions_min;
  ValueGapDecomposition out;
  out.per_step.assign(H, 0.0);
  for (int h = 0; h < H; ++h) {
    const double* v_next = values_e.v.data() + static_cast<std::size_t>(h + 1) * S;
    double term = 0.0;
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        for (int b = 0; b < B; ++b) {
          double mass = occ.at(h, s, a, b);
          if (mass == 0.0) continue;
          auto pe = e.kernel_row(h, s, a, b);
          auto pe2 = e2.kernel_row(h, s, a, b);
          double diff = 0.0;
          for (int s2 = 0; s2 < S; ++s2) diff += (pe[s2] - pe2[s2]) * v_next[s2];
          term += mass * diff;
        }
    out.per_step[h] = term;
  }
  double direct = values_e.initial_value(e) - evaluate_values(e2, mu, nu).initial_value(e2);
  out.gap = direct;
  return out;
}

ZeroSumGame build_product_mg(const ZeroSumGame& m1, const ZeroSumGame& m2) {
  if (m1.horizon != m2.horizon) throw std::invalid_argument("product factors need equal horizons");
  const int H = m1.horizon;
  const int S1 = m1.num_states, S2 = m2.num_states;
  const int A1 = m1.num_actions_max, A2 = m2.num_actions_max;
  const int B1 = m1.num_actions_min, B2 = m2.num_actions_min;

  ZeroSumGame out = ZeroSumGame::zeros(H, S1 * S2, A1 * A2, B1 * B2,
                                       m1.initial_state * S2 + m2.initial_state);
  for (int h = 0; h < H; ++h) {
    double max1 = 0.0, max2 = 0.0;
    for (int s = 0; s < S1; ++s)
      for (int a = 0; a < A1; ++a)
        for (int b = 0; b < B1; ++b) max1 = std::max(max1, m1.reward_at(h, s, a, b));
    for (int s = 0; s < S2; ++s)
      for (int a = 0; a < A2; ++a)
        for (int b = 0; b < B2; ++b) max2 = std::max(max2, m2.reward_at(h, s, a, b));
    if (max1 + max2 > 1.0 + 1e-12)
      throw std::invalid_argument("summed product rewards exceed 1; rescale the factors");
  }

  for (int h = 0; h < H; ++h)
    for (int s1 = 0; s1 < S1; ++s1)
      for (int s2 = 0; s2 < S2; ++s2)
        for (int a1 = 0; a1 < A1; ++a1)
          for (int a2 = 0; a2 < A2; ++a2)
            for (int b1 = 0; b1 < B1; ++b1)
              for (int b2 = 0; b2 < B2; ++b2) {
                int s = s1 * S2 + s2, a = a1 * A2 + a2, b = b1 * B2 + b2;
                out.reward_at(h, s, a, b) =
                    m1.reward_at(h, s1, a1, b1) + m2.reward_at(h, s2, a2, b2);
                auto row = out.kernel_row(h, s, a, b);
                auto p1 = m1.kernel_row(h, s1, a1, b1);
                auto p2 = m2.kernel_row(h, s2, a2, b2);
                for (int t1 = 0; t1 < S1; ++t1)
                  for (int t2 = 0; t2 < S2; ++t2) row[t1 * S2 + t2] = p1[t1] * p2[t2];
              }
  return out;
}

MarkovPolicy lift_policy_first_factor(const MarkovPolicy& p, int other_states,
                                      int other_actions) {
  MarkovPolicy out;
  out.side = p.side;
  out.horizon = p.horizon;
  out.num_states = p.num_states * other_states;
  out.num_actions = p.num_actions * other_actions;
  out.dist.assign(static_cast<std::size_t>(out.horizon) * out.num_states * out.num_actions, 0.0);
  for (int h = 0; h < p.horizon; ++h)
    for (int s1 = 0; s1 < p.num_states; ++s1) {
      auto src = p.row(h, s1);
      for (int s2 = 0; s2 < other_states; ++s2) {
        auto dst = out.row(h, s1 * other_states + s2);
        for (int a1 = 0; a1 < p.num_actions; ++a1)
          for (int a2 = 0; a2 < other_actions; ++a2)
            dst[a1 * other_actions + a2] = src[a1] / other_actions;
      }
    }
  return out;
}

}  // namespace mgids
