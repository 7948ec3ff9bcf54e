#include "mgids/compression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mgids/errors.hpp"
#include "mgids/stats.hpp"

namespace mgids {

PolicyClassSpec PolicyClassSpec::explicit_set(std::vector<MarkovPolicy> max_ps,
                                              std::vector<MarkovPolicy> min_ps) {
  if (max_ps.empty() || min_ps.empty())
    throw std::invalid_argument("explicit policy class must be nonempty on both sides");
  PolicyClassSpec spec;
  spec.mode = Mode::ExplicitSet;
  spec.max_policies = std::move(max_ps);
  spec.min_policies = std::move(min_ps);
  return spec;
}

std::vector<MarkovPolicy> all_deterministic_policies(PlayerSide side, int horizon,
                                                     int num_states, int num_actions,
                                                     std::size_t guard) {
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states;
  double count = std::pow(static_cast<double>(num_actions), static_cast<double>(cells));
  if (count > static_cast<double>(guard))
    throw EnumerationTooLarge("deterministic policy class exceeds enumeration guard");

  std::vector<MarkovPolicy> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> actions(cells, 0);
  for (;;) {
    out.push_back(MarkovPolicy::deterministic(side, horizon, num_states, num_actions, actions));
    std::size_t i = 0;
    while (i < cells && ++actions[i] == num_actions) actions[i++] = 0;
    if (i == cells) break;
  }
  return out;
}

namespace {

double pair_value_gap(const ZeroSumGame& e, const ZeroSumGame& e2, const MarkovPolicy& mu,
                      const MarkovPolicy& nu) {
  double v1 = evaluate_values(e, mu, nu).initial_value(e);
  double v2 = evaluate_values(e2, mu, nu).initial_value(e2);
  return std::abs(v1 - v2);
}

}  // namespace

double distortion(const ZeroSumGame& e, const ZeroSumGame& e2, const PolicyClassSpec& phi) {
  if (!e.same_shape(e2)) throw std::invalid_argument("distortion: shapes differ");
  if (e.reward != e2.reward) throw std::invalid_argument("distortion: rewards differ");

  const std::vector<MarkovPolicy>* max_ps = &phi.max_policies;
  const std::vector<MarkovPolicy>* min_ps = &phi.min_policies;
  std::vector<MarkovPolicy> max_all, min_all;
  if (phi.mode == PolicyClassSpec::Mode::AllDeterministic) {
    max_all = all_deterministic_policies(PlayerSide::Max, e.horizon, e.num_states,
                                         e.num_actions_max);
    min_all = all_deterministic_policies(PlayerSide::Min, e.horizon, e.num_states,
                                         e.num_actions_min);
    if (max_all.size() * min_all.size() > 4000000)
      throw EnumerationTooLarge("deterministic policy pair count exceeds guard");
    max_ps = &max_all;
    min_ps = &min_all;
  }
  double worst = 0.0;
  for (const auto& mu : *max_ps)
    for (const auto& nu : *min_ps) worst = std::max(worst, pair_value_gap(e, e2, mu, nu));
  return worst;
}

std::vector<int> SimplexCover::assign(std::span<const double> row) const {
  const int S = num_states, n = resolution;
  std::vector<int> comp(S, 0);
  std::vector<double> frac(S, 0.0);
  int total = 0;
  for (int i = 0; i < S; ++i) {
    double scaled = row[i] * n;
    comp[i] = std::clamp(static_cast<int>(std::floor(scaled)), 0, n);
    frac[i] = scaled - comp[i];
    total += comp[i];
  }
  // Largest-remainder correction; ties to the lowest index. Flooring keeps
  // the deficit in [0, S), so only increments are needed.
  int missing = n - total;
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; k < missing && k < S; ++k) comp[order[k]] += 1;
  return comp;
}

std::uint64_t SimplexCover::composition_rank(const std::vector<int>& comp) const {
  // Rank in lexicographic order of compositions of `resolution` into
  // `num_states` parts, via the combinatorial number system.
  auto choose = [](std::uint64_t n, std::uint64_t k) -> std::uint64_t {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      if (r > (~0ULL) / (n - k + i))
        throw std::overflow_error("composition rank overflows; reduce cover resolution");
      r = r * (n - k + i) / i;
    }
    return r;
  };
  std::uint64_t rank = 0;
  int remaining = resolution;
  for (int i = 0; i + 1 < num_states; ++i) {
    for (int v = 0; v < comp[i]; ++v) {
      // Count compositions with a smaller value at position i.
      std::uint64_t rest = choose(static_cast<std::uint64_t>(remaining - v) + num_states - i - 2,
                                  static_cast<std::uint64_t>(num_states - i - 2));
      rank += rest;
    }
    remaining -= comp[i];
  }
  return rank;
}

std::vector<double> SimplexCover::center_from_composition(const std::vector<int>& comp) const {
  std::vector<double> c(num_states);
  for (int i = 0; i < num_states; ++i) c[i] = static_cast<double>(comp[i]) / resolution;
  return c;
}

double SimplexCover::num_centers() const {
  double r = 1.0;
  for (int i = 1; i <= num_states - 1; ++i)
    r *= static_cast<double>(resolution + i) / static_cast<double>(i);
  return r;
}

SimplexCover simplex_cover(int num_states, double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("cover radius must lie in (0, 1]");
  if (num_states <= 0) throw std::invalid_argument("num_states must be positive");
  SimplexCover cover;
  cover.num_states = num_states;
  cover.delta = delta;
  cover.resolution = static_cast<int>(std::ceil(num_states / (2.0 * delta)));
  return cover;
}

HardPartition::CellKey HardPartition::classify(const ZeroSumGame& env) const {
  if (!env.same_shape(base)) throw std::invalid_argument("classify: shape mismatch");
  CellKey key;
  key.reserve(env.num_rows());
  for (std::size_t row = 0; row < env.num_rows(); ++row) {
    std::span<const double> p{env.kernel.data() + row * env.num_states,
                              static_cast<std::size_t>(env.num_states)};
    key.push_back(cover.composition_rank(cover.assign(p)));
  }
  return key;
}

HardPartition build_hard_partition(const ZeroSumGame& dims_and_rewards, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  HardPartition part;
  part.epsilon = epsilon;
  part.base = dims_and_rewards;
  const double H = static_cast<double>(dims_and_rewards.horizon);
  part.cover = simplex_cover(dims_and_rewards.num_states,
                             std::min(1.0, epsilon / (2.0 * H * H)));
  return part;
}

CompressedEnv compress_env(const HardPartition& partition, const ZeroSumGame& env) {
  CompressedEnv out;
  out.reference = env;
  out.cell.reserve(env.num_rows());
  const int S = env.num_states;
  for (std::size_t row = 0; row < env.num_rows(); ++row) {
    std::span<const double> p{env.kernel.data() + row * S, static_cast<std::size_t>(S)};
    std::vector<int> comp = partition.cover.assign(p);
    out.cell.push_back(partition.cover.composition_rank(comp));
    std::vector<double> center = partition.cover.center_from_composition(comp);
    std::copy(center.begin(), center.end(), out.reference.kernel.begin() + row * S);
  }
  return out;
}

void Partition::validate(const FiniteSupportBelief& belief) const {
  if (cell_of.size() != belief.candidates.size())
    throw std::invalid_argument("partition must label every candidate");
  for (int c : cell_of)
    if (c < 0 || c >= num_cells()) throw std::invalid_argument("cell index out of range");
  for (const auto& ref : references)
    if (!ref.same_shape(belief.candidates.front()))
      throw std::invalid_argument("reference shape mismatch");
}

Partition Partition::identity(const FiniteSupportBelief& belief) {
  Partition p;
  p.references = belief.candidates;
  p.cell_of.resize(belief.candidates.size());
  std::iota(p.cell_of.begin(), p.cell_of.end(), 0);
  return p;
}

Partition Partition::single_cell(const FiniteSupportBelief& belief) {
  return single_cell(belief, belief.candidates.front());
}

Partition Partition::single_cell(const FiniteSupportBelief& belief, ZeroSumGame reference) {
  Partition p;
  p.cell_of.assign(belief.candidates.size(), 0);
  p.references.push_back(std::move(reference));
  return p;
}

Partition Partition::group_by(const FiniteSupportBelief& belief, const std::vector<int>& labels) {
  if (labels.size() != belief.candidates.size())
    throw std::invalid_argument("one label per candidate required");
  Partition p;
  p.cell_of.assign(labels.size(), -1);
  std::map<int, int> label_to_cell;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = label_to_cell.try_emplace(labels[i], p.num_cells());
    if (inserted) p.references.push_back(belief.candidates[i]);
    p.cell_of[i] = it->second;
  }
  return p;
}

Partition Partition::from_hard(const HardPartition& hard, const FiniteSupportBelief& belief) {
  Partition p;
  p.cell_of.assign(belief.candidates.size(), -1);
  std::map<HardPartition::CellKey, int> seen;
  for (std::size_t i = 0; i < belief.candidates.size(); ++i) {
    CompressedEnv comp = compress_env(hard, belief.candidates[i]);
    auto [it, inserted] = seen.try_emplace(comp.cell, p.num_cells());
    if (inserted) p.references.push_back(std::move(comp.reference));
    p.cell_of[i] = it->second;
  }
  return p;
}

SoftConstraintEstimate check_soft_constraint(const FiniteSupportBelief& belief,
                                             const Partition& partition,
                                             const PolicyClassSpec& phi) {
  partition.validate(belief);
  std::vector<double> w = belief.weights();
  double mean = 0.0;
  for (std::size_t i = 0; i < belief.candidates.size(); ++i) {
    if (w[i] == 0.0) continue;
    mean += w[i] * distortion(belief.candidates[i], partition.references[partition.cell_of[i]], phi);
  }
  return {mean, 0.0};
}

SoftConstraintEstimate check_soft_constraint(const Belief& belief, const HardPartition& partition,
                                             const PolicyClassSpec& phi, int samples,
                                             std::uint64_t rng_seed) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    ZeroSumGame env =
        sample_env(belief, derive_seed(rng_seed, {0xd157u, static_cast<std::uint64_t>(i)}));
    CompressedEnv comp = compress_env(partition, env);
    double d = distortion(env, comp.reference, phi);
    sum += d;
    sum_sq += d * d;
  }
  double mean = sum / samples;
  double var = samples > 1 ? std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1)) : 0.0;
  return {mean, std::sqrt(var / samples)};
}

double compressed_entropy(const FiniteSupportBelief& belief, const Partition& partition) {
  partition.validate(belief);
  std::vector<double> w = belief.weights();
  std::vector<double> cell_mass(partition.num_cells(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) cell_mass[partition.cell_of[i]] += w[i];
  return shannon_entropy(cell_mass);
}

double compressed_entropy(const Belief& belief, const HardPartition& partition, int samples,
                          std::uint64_t rng_seed) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  std::map<HardPartition::CellKey, int> counts;
  for (int i = 0; i < samples; ++i) {
    ZeroSumGame env =
        sample_env(belief, derive_seed(rng_seed, {0xe27u, static_cast<std::uint64_t>(i)}));
    counts[partition.classify(env)] += 1;
  }
  std::vector<double> mass;
  mass.reserve(counts.size());
  for (const auto& [key, c] : counts) mass.push_back(static_cast<double>(c) / samples);
  return shannon_entropy(mass);
}

}  // namespace mgids
