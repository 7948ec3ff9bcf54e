#include "mgids/matrix_games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/rng.hpp"
#include "mgids/simplex_lp.hpp"

namespace mgids {

namespace {

// LP for the strategy of one side of a shifted-positive matrix game:
// max v subject to sum_own strat(own) * payoff(own, other) >= v for every
// opposing pure action (written as <= rows), sum strat = 1, strat >= 0.
// `payoff(own, other)` must be the shifted gain of the optimizing side.
LpResult side_lp(int own, int other, const std::vector<double>& gain) {
  std::vector<double> objective(own + 1, 0.0);
  objective[own] = 1.0;  // the value variable
  std::vector<LpConstraint> cons;
  cons.reserve(other + 1);
  for (int o = 0; o < other; ++o) {
    LpConstraint c;
    c.coeffs.assign(own + 1, 0.0);
    for (int i = 0; i < own; ++i) c.coeffs[i] = -gain[static_cast<std::size_t>(i) * other + o];
    c.coeffs[own] = 1.0;
    c.relation = Relation::LessEq;
    c.rhs = 0.0;
    cons.push_back(std::move(c));
  }
  LpConstraint simplex;
  simplex.coeffs.assign(own + 1, 1.0);
  simplex.coeffs[own] = 0.0;
  simplex.relation = Relation::Eq;
  simplex.rhs = 1.0;
  cons.push_back(std::move(simplex));
  return solve_lp_max(objective, cons);
}

void renormalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) {
    v.assign(v.size(), 0.0);
    v[0] = 1.0;
    return;
  }
  for (double& x : v) x /= sum;
}

}  // namespace

MinimaxSolution minimax_solve(const MatrixGame& game) {
  if (game.num_rows <= 0 || game.num_cols <= 0 ||
      game.payoff.size() != static_cast<std::size_t>(game.num_rows) * game.num_cols)
    throw std::invalid_argument("minimax_solve: empty or malformed matrix");
  for (double p : game.payoff)
    if (!std::isfinite(p)) throw std::invalid_argument("minimax_solve: nonfinite payoff");

  const int A = game.num_rows, B = game.num_cols;
  double lo = *std::min_element(game.payoff.begin(), game.payoff.end());
  double shift = 1.0 - lo;  // all shifted payoffs >= 1, so both LP values are positive

  std::vector<double> row_gain(static_cast<std::size_t>(A) * B);
  std::vector<double> col_gain(static_cast<std::size_t>(B) * A);
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) {
      double u = game.at(a, b) + shift;
      row_gain[static_cast<std::size_t>(a) * B + b] = u;
      col_gain[static_cast<std::size_t>(b) * A + a] = -u;  // column side maximizes -u
    }
  double col_lo = *std::min_element(col_gain.begin(), col_gain.end());
  double col_shift = 1.0 - col_lo;
  for (double& g : col_gain) g += col_shift;

  LpResult row_lp = side_lp(A, B, row_gain);
  LpResult col_lp = side_lp(B, A, col_gain);
  if (row_lp.status != LpStatus::Optimal || col_lp.status != LpStatus::Optimal)
    throw std::logic_error("minimax_solve: stage LP failed");

  MinimaxSolution out;
  out.row_strategy.assign(row_lp.x.begin(), row_lp.x.begin() + A);
  out.col_strategy.assign(col_lp.x.begin(), col_lp.x.begin() + B);
  renormalize(out.row_strategy);
  renormalize(out.col_strategy);
  out.value = row_lp.objective - shift;
  return out;
}

std::size_t NormalFormGame::num_profiles() const {
  std::size_t n = 1;
  for (int c : strategy_counts) n *= static_cast<std::size_t>(c);
  return n;
}

std::size_t NormalFormGame::profile_index(const std::vector<int>& choice) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < strategy_counts.size(); ++i)
    idx = idx * strategy_counts[i] + choice[i];
  return idx;
}

void NormalFormGame::decode_profile(std::size_t index, std::vector<int>& choice) const {
  choice.assign(strategy_counts.size(), 0);
  for (int i = static_cast<int>(strategy_counts.size()) - 1; i >= 0; --i) {
    choice[i] = static_cast<int>(index % strategy_counts[i]);
    index /= strategy_counts[i];
  }
}

void NormalFormGame::validate() const {
  if (strategy_counts.empty()) throw std::invalid_argument("game needs players");
  for (int c : strategy_counts)
    if (c <= 0) throw std::invalid_argument("strategy counts must be positive");
  if (payoffs.size() != strategy_counts.size())
    throw std::invalid_argument("one payoff table per player required");
  for (const auto& table : payoffs)
    if (table.size() != num_profiles()) throw std::invalid_argument("payoff table size mismatch");
}

void JointDistribution::validate() const {
  double sum = 0.0;
  for (double p : prob) {
    if (p < -1e-12) throw std::invalid_argument("joint distribution entry negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument("joint distribution does not sum to 1");
}

JointDistribution ProductDistribution::to_joint(const std::vector<int>& strategy_counts) const {
  JointDistribution joint;
  joint.strategy_counts = strategy_counts;
  std::size_t n = 1;
  for (int c : strategy_counts) n *= static_cast<std::size_t>(c);
  joint.prob.assign(n, 0.0);
  std::vector<int> choice(strategy_counts.size(), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    double p = 1.0;
    for (int i = static_cast<int>(strategy_counts.size()) - 1; i >= 0; --i) {
      choice[i] = static_cast<int>(rem % strategy_counts[i]);
      rem /= strategy_counts[i];
      p *= marginals[i][choice[i]];
    }
    joint.prob[idx] = p;
  }
  return joint;
}

double expected_payoff(const NormalFormGame& game, const JointDistribution& dist, int player) {
  double total = 0.0;
  for (std::size_t idx = 0; idx < dist.prob.size(); ++idx)
    total += dist.prob[idx] * game.payoffs[player][idx];
  return total;
}

namespace {

// Expected payoff to `player` when deviating to pure strategy `dev` while the
// others follow dist marginally (summing player out of the joint law).
double deviation_payoff(const NormalFormGame& game, const JointDistribution& dist, int player,
                        int dev) {
  const auto& counts = game.strategy_counts;
  double total = 0.0;
  std::vector<int> choice;
  for (std::size_t idx = 0; idx < dist.prob.size(); ++idx) {
    double p = dist.prob[idx];
    if (p == 0.0) continue;
    game.decode_profile(idx, choice);
    choice[player] = dev;
    total += p * game.payoffs[player][game.profile_index(choice)];
  }
  (void)counts;
  return total;
}

}  // namespace

double best_deviation_gain(const NormalFormGame& game, const JointDistribution& dist,
                           int player) {
  double base = expected_payoff(game, dist, player);
  double best = -std::numeric_limits<double>::infinity();
  for (int dev = 0; dev < game.strategy_counts[player]; ++dev)
    best = std::max(best, deviation_payoff(game, dist, player, dev));
  return best - base;
}

JointDistribution cce_solve(const NormalFormGame& game) {
  game.validate();
  const std::size_t n = game.num_profiles();
  const int players = game.num_players();

  // Objective: social welfare. Constraints: for each (player, deviation),
  // expected gain of the unilateral swap is nonpositive; probabilities form a
  // distribution.
  std::vector<double> objective(n, 0.0);
  for (std::size_t idx = 0; idx < n; ++idx)
    for (int i = 0; i < players; ++i) objective[idx] += game.payoffs[i][idx];

  std::vector<LpConstraint> cons;
  std::vector<int> choice;
  for (int i = 0; i < players; ++i) {
    for (int dev = 0; dev < game.strategy_counts[i]; ++dev) {
      LpConstraint c;
      c.coeffs.assign(n, 0.0);
      for (std::size_t idx = 0; idx < n; ++idx) {
        game.decode_profile(idx, choice);
        if (choice[i] == dev) continue;  // swapping to itself contributes zero
        double here = game.payoffs[i][idx];
        choice[i] = dev;
        double there = game.payoffs[i][game.profile_index(choice)];
        c.coeffs[idx] = there - here;
      }
      c.relation = Relation::LessEq;
      c.rhs = 0.0;
      cons.push_back(std::move(c));
    }
  }
  LpConstraint simplex;
  simplex.coeffs.assign(n, 1.0);
  simplex.relation = Relation::Eq;
  simplex.rhs = 1.0;
  cons.push_back(std::move(simplex));

  LpResult lp = solve_lp_max(objective, cons);
  if (lp.status != LpStatus::Optimal) throw std::logic_error("cce_solve: LP failed");
  JointDistribution out;
  out.strategy_counts = game.strategy_counts;
  out.prob = std::move(lp.x);
  for (double& p : out.prob) {
    if (p < -1e-7) throw std::logic_error("cce_solve: LP returned a negative probability");
    if (p < 0.0) p = 0.0;  // simplex roundoff
  }
  double sum = 0.0;
  for (double p : out.prob) sum += p;
  for (double& p : out.prob) p /= sum;
  return out;
}

namespace {

// Feasibility of a two-player support pair: find opponent mixture y on
// support_other making `player` indifferent on its support and weakly worse
// off outside. Returns the mixture when feasible.
bool support_mixture(const NormalFormGame& game, int player, const std::vector<int>& own_support,
                     const std::vector<int>& other_support, std::vector<double>& mixture) {
  const int other = 1 - player;
  const int n_other = game.strategy_counts[other];
  const std::size_t vars = other_support.size() + 1;  // mixture weights + common value
  std::vector<double> objective(vars, 0.0);
  objective[vars - 1] = 1.0;

  auto payoff = [&](int own_strat, int other_strat) {
    std::vector<int> choice(2);
    choice[player] = own_strat;
    choice[other] = other_strat;
    return game.payoffs[player][game.profile_index(choice)];
  };

  std::vector<LpConstraint> cons;
  for (int own = 0; own < game.strategy_counts[player]; ++own) {
    bool in_support =
        std::find(own_support.begin(), own_support.end(), own) != own_support.end();
    LpConstraint c;
    c.coeffs.assign(vars, 0.0);
    for (std::size_t j = 0; j < other_support.size(); ++j)
      c.coeffs[j] = payoff(own, other_support[j]);
    c.coeffs[vars - 1] = -1.0;
    c.relation = in_support ? Relation::Eq : Relation::LessEq;
    c.rhs = 0.0;
    cons.push_back(std::move(c));
  }
  LpConstraint simplex;
  simplex.coeffs.assign(vars, 1.0);
  simplex.coeffs[vars - 1] = 0.0;
  simplex.relation = Relation::Eq;
  simplex.rhs = 1.0;
  cons.push_back(std::move(simplex));

  LpResult lp = solve_lp_max(objective, cons);
  if (lp.status != LpStatus::Optimal) return false;
  mixture.assign(n_other, 0.0);
  for (std::size_t j = 0; j < other_support.size(); ++j) mixture[other_support[j]] = lp.x[j];
  renormalize(mixture);
  return true;
}

ProductDistribution ne_solve_two_player(const NormalFormGame& game, double tolerance) {
  const int n0 = game.strategy_counts[0], n1 = game.strategy_counts[1];
  std::vector<std::vector<int>> supports0, supports1;
  for (int mask = 1; mask < (1 << n0); ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < n0; ++i)
      if (mask & (1 << i)) sup.push_back(i);
    supports0.push_back(std::move(sup));
  }
  for (int mask = 1; mask < (1 << n1); ++mask) {
    std::vector<int> sup;
    for (int i = 0; i < n1; ++i)
      if (mask & (1 << i)) sup.push_back(i);
    supports1.push_back(std::move(sup));
  }
  auto by_size = [](const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  };
  std::sort(supports0.begin(), supports0.end(), by_size);
  std::sort(supports1.begin(), supports1.end(), by_size);

  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& sup0 : supports0) {
    for (const auto& sup1 : supports1) {
      std::vector<double> x, y;
      // y supports player 0's indifference, x supports player 1's.
      if (!support_mixture(game, 0, sup0, sup1, y)) continue;
      if (!support_mixture(game, 1, sup1, sup0, x)) continue;
      ProductDistribution cand;
      cand.marginals = {x, y};
      JointDistribution joint = cand.to_joint(game.strategy_counts);
      double gap = 0.0;
      for (int i = 0; i < 2; ++i) gap = std::max(gap, best_deviation_gain(game, joint, i));
      best_gap = std::min(best_gap, gap);
      if (gap <= tolerance) return cand;
    }
  }
  throw ConvergenceFailure("ne_solve: no support pair met tolerance", best_gap);
}

ProductDistribution ne_solve_iterative(const NormalFormGame& game, double tolerance) {
  const int players = game.num_players();
  double best_gap = std::numeric_limits<double>::infinity();
  ProductDistribution best;

  const int restarts = 40;
  const int iters = 4000;
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(derive_seed(0xce5a11, {static_cast<std::uint64_t>(restart)}));
    ProductDistribution cur;
    cur.marginals.resize(players);
    for (int i = 0; i < players; ++i) {
      cur.marginals[i].assign(game.strategy_counts[i], 0.0);
      double sum = 0.0;
      for (double& w : cur.marginals[i]) {
        w = 0.05 + rng.next_double();
        sum += w;
      }
      for (double& w : cur.marginals[i]) w /= sum;
    }
    for (int it = 0; it < iters; ++it) {
      double step = 1.0 / (2.0 + it * 0.5);
      JointDistribution joint = cur.to_joint(game.strategy_counts);
      double gap = 0.0;
      for (int i = 0; i < players; ++i) gap = std::max(gap, best_deviation_gain(game, joint, i));
      if (gap < best_gap) {
        best_gap = gap;
        best = cur;
      }
      if (gap <= tolerance) return cur;
      for (int i = 0; i < players; ++i) {
        // Move toward the best response of player i.
        int br = 0;
        double br_val = -std::numeric_limits<double>::infinity();
        for (int dev = 0; dev < game.strategy_counts[i]; ++dev) {
          double val = deviation_payoff(game, joint, i, dev);
          if (val > br_val + 1e-15) {
            br_val = val;
            br = dev;
          }
        }
        for (int k = 0; k < game.strategy_counts[i]; ++k)
          cur.marginals[i][k] = (1.0 - step) * cur.marginals[i][k] + (k == br ? step : 0.0);
      }
    }
  }
  throw ConvergenceFailure("ne_solve: best-response iteration did not converge", best_gap);
}

}  // namespace

ProductDistribution ne_solve(const NormalFormGame& game, double tolerance) {
  game.validate();
  if (game.num_players() == 1) {
    // Degenerate: pick the best pure strategy.
    ProductDistribution out;
    out.marginals.resize(1);
    out.marginals[0].assign(game.strategy_counts[0], 0.0);
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < game.payoffs[0].size(); ++idx)
      if (game.payoffs[0][idx] > game.payoffs[0][best]) best = idx;
    out.marginals[0][best] = 1.0;
    return out;
  }
  if (game.num_players() == 2) return ne_solve_two_player(game, tolerance);
  return ne_solve_iterative(game, tolerance);
}

}  // namespace mgids
