#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgids/belief.hpp"
#include "mgids/zero_sum.hpp"

namespace mgids {

// Policy class over which distortion takes its worst case.
struct PolicyClassSpec {
  enum class Mode { ExplicitSet, AllDeterministic };
  Mode mode = Mode::AllDeterministic;
  std::vector<MarkovPolicy> max_policies;  // ExplicitSet only
  std::vector<MarkovPolicy> min_policies;

  static PolicyClassSpec all_deterministic() { return {}; }
  static PolicyClassSpec explicit_set(std::vector<MarkovPolicy> max_ps,
                                      std::vector<MarkovPolicy> min_ps);
};

// Enumerates every deterministic Markov policy of one side; throws
// EnumerationTooLarge past the guard.
std::vector<MarkovPolicy> all_deterministic_policies(PlayerSide side, int horizon,
                                                     int num_states, int num_actions,
                                                     std::size_t guard = 100000);

// Worst-case absolute initial-value difference between two environments over
// the policy class. For AllDeterministic the max over all (possibly mixed)
// Markov profiles is attained at a deterministic pair, so deterministic
// enumeration is exact.
double distortion(const ZeroSumGame& e, const ZeroSumGame& e2, const PolicyClassSpec& phi);

// Lattice covering of the probability simplex over `num_states` points under
// total variation: centers are compositions of `resolution` scaled down, and
// largest-remainder rounding assigns any distribution to a center within
// delta. Centers are identified by their rank in lexicographic composition
// order.
struct SimplexCover {
  int num_states = 0;
  double delta = 0.0;
  int resolution = 0;  // lattice denominator n = ceil(S / (2 delta))

  // Lattice composition assigned to the row (sums to resolution).
  std::vector<int> assign(std::span<const double> row) const;
  std::uint64_t composition_rank(const std::vector<int>& comp) const;
  std::vector<double> center_from_composition(const std::vector<int>& comp) const;
  // Number of centers, as a double since it grows combinatorially.
  double num_centers() const;
};

SimplexCover simplex_cover(int num_states, double delta);

// Hard-compression partition: every kernel row is snapped to its cover
// center; a cell is the tuple of per-row center ranks and its reference
// environment has exactly the center rows. Only occupied cells are ever
// materialized.
struct HardPartition {
  double epsilon = 0.0;
  ZeroSumGame base;  // shape and rewards; kernel ignored
  SimplexCover cover;

  using CellKey = std::vector<std::uint64_t>;

  CellKey classify(const ZeroSumGame& env) const;
};

HardPartition build_hard_partition(const ZeroSumGame& dims_and_rewards, double epsilon);

struct CompressedEnv {
  HardPartition::CellKey cell;
  ZeroSumGame reference;
};

CompressedEnv compress_env(const HardPartition& partition, const ZeroSumGame& env);

// Partition of a finite candidate set, the form every compressed-information
// computation consumes: cell index per candidate plus one reference
// environment per cell.
struct Partition {
  std::vector<int> cell_of;               // candidate index -> cell index
  std::vector<ZeroSumGame> references;    // cell index -> reference environment

  int num_cells() const { return static_cast<int>(references.size()); }
  void validate(const FiniteSupportBelief& belief) const;

  // Every candidate its own cell, referenced by itself.
  static Partition identity(const FiniteSupportBelief& belief);
  // One cell for all candidates; reference defaults to the first candidate.
  static Partition single_cell(const FiniteSupportBelief& belief);
  static Partition single_cell(const FiniteSupportBelief& belief, ZeroSumGame reference);
  // Cells from explicit labels; each cell referenced by its lowest-index member.
  static Partition group_by(const FiniteSupportBelief& belief, const std::vector<int>& labels);
  // Cells from hard-compression classification of each candidate.
  static Partition from_hard(const HardPartition& hard, const FiniteSupportBelief& belief);
};

struct SoftConstraintEstimate {
  double mean_distortion = 0.0;
  double stderr_estimate = 0.0;
};

// E[d(environment, its reference)] — exact over a finite support.
SoftConstraintEstimate check_soft_constraint(const FiniteSupportBelief& belief,
                                             const Partition& partition,
                                             const PolicyClassSpec& phi);
// Monte Carlo version for any belief against a hard partition.
SoftConstraintEstimate check_soft_constraint(const Belief& belief, const HardPartition& partition,
                                             const PolicyClassSpec& phi, int samples,
                                             std::uint64_t rng_seed);

// Shannon entropy (nats) of the cell distribution; an upper bound on the
// compressed mutual information.
double compressed_entropy(const FiniteSupportBelief& belief, const Partition& partition);
double compressed_entropy(const Belief& belief, const HardPartition& partition, int samples,
                          std::uint64_t rng_seed);

}  // namespace mgids
