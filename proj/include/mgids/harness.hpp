#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgids/general_sum.hpp"
#include "mgids/selection.hpp"

namespace mgids {

enum class BoundKind { Thm1, Thm2, Thm3, Thm4 };

struct BoundExtras {
  double mutual_information = 0.0;  // Thm3
  double epsilon = 0.0;             // Thm3
  int num_players = 2;              // Thm4
};

// Closed-form regret bound values, natural-log convention throughout.
double theoretical_bound(BoundKind kind, int S, int A, int B, int H, int K,
                         const BoundExtras& extras = {});

struct ExperimentConfig {
  enum class Mode { ZeroSum, GeneralSum };
  Mode mode = Mode::ZeroSum;
  AlgorithmConfig algorithm;
  int episodes = 100;
  int num_prior_draws = 8;
  std::uint64_t base_seed = 1;

  // Zero-sum inputs.
  std::optional<Belief> prior;
  std::optional<Partition> partition;  // CompressedMAIDS

  // General-sum inputs.
  std::optional<GsBelief> gs_prior;
  std::optional<PurePolicyProfileSet> gs_pure_sets;  // defaults to all deterministic
  EquilibriumTarget gs_target = EquilibriumTarget::CCE;

  std::string csv_path;     // empty = do not write
  std::string report_path;  // empty = do not write

  void validate() const;
};

struct EpisodeRecord {
  int episode = 0;  // 1-based in outputs
  int seed = 0;     // prior-draw index
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  double duality_gap = 0.0;
  double mi_episode = 0.0;  // learning-target information of the episode
  double mi_cum = 0.0;
  double bound_value = 0.0;
};

struct RegretReport {
  std::string algorithm_name;
  int episodes = 0;
  int num_prior_draws = 0;
  std::vector<EpisodeRecord> rows;  // seed-major, episode-minor

  // Per-episode aggregates over prior draws.
  std::vector<double> mean_cum_regret;
  std::vector<double> stderr_cum_regret;
  std::vector<double> mean_cum_mi;        // full-environment information
  std::vector<double> mean_cum_target_mi; // learning-target information
  std::vector<double> bound_series;       // bound at episode k (aggregate view)

  bool ne_fallback_to_cce = false;  // general-sum runs only

  double final_mean_regret() const { return mean_cum_regret.back(); }
  // Per-episode selection diagnostics of the first prior draw.
  nlohmann::json diagnostics = nlohmann::json::array();
};

RegretReport run_zero_sum_experiment(const ExperimentConfig& cfg);
RegretReport run_general_sum_experiment(const ExperimentConfig& cfg);

// Per-episode checks of the information-theoretic caps during a run: the
// Thompson-sampling proxy ratio cap 4 H^3 S A B, the cumulative information
// cap 2 S^2 A B H ln(S K H), and the occupancy-form mutual information
// against exhaustive enumeration. Violations are report entries, not errors.
struct AuditViolation {
  int seed = 0;
  int episode = 0;
  std::string kind;
  std::string details;
};

struct AuditReport {
  int episodes_checked = 0;
  int ratio_checks = 0;
  double worst_ratio_slack = std::numeric_limits<double>::infinity();
  double cumulative_mi = 0.0;
  double mi_cap = 0.0;
  double worst_mi_mismatch = 0.0;
  std::vector<AuditViolation> violations;

  bool clean() const { return violations.empty(); }
};

AuditReport lemma_audit(const ExperimentConfig& cfg);

// Output writers; both are byte-deterministic functions of the report.
void write_regret_csv(const RegretReport& report, const std::string& path);
nlohmann::json report_to_json(const ExperimentConfig& cfg, const RegretReport& report);

// Config (de)serialization for the CLI. Priors may be given inline or via
// seeded generators; see README for the schema.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// Least-squares slope of ln(y) against ln(x); the sqrt-K scaling check.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Worst regret of playing one candidate's Nash max policy inside another
// candidate; zero means the prior poses no learning problem.
double cross_candidate_regret(const FiniteSupportBelief& belief);

// Step-product support resampled (seed chain) until the candidates disagree
// enough to make exploration matter.
FiniteSupportBelief informative_product_support(const ZeroSumGame& shape_and_rewards,
                                                const std::vector<int>& per_step_choices,
                                                std::uint64_t rng_seed,
                                                double min_cross_regret);

std::string algorithm_name(Algorithm a);

}  // namespace mgids
