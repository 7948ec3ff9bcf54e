// Command-line front end: run experiments from JSON configs, evaluate the
// closed-form regret bounds, audit the information-theoretic caps during a
// run, and validate environment files.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure, 3 audit
// violations present.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgids/errors.hpp"
#include "mgids/harness.hpp"
#include "mgids/serialization.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kRuntimeFailure = 2;
constexpr int kAuditViolations = 3;

int run_command(const std::string& config_path, const std::string& csv_override,
                const std::string& report_override) {
  mgids::ExperimentConfig cfg =
      mgids::experiment_config_from_json(mgids::load_json_file(config_path));
  if (!csv_override.empty()) cfg.csv_path = csv_override;
  if (!report_override.empty()) cfg.report_path = report_override;
  if (cfg.csv_path.empty()) cfg.csv_path = "regret.csv";
  if (cfg.report_path.empty()) cfg.report_path = "report.json";

  mgids::RegretReport report = cfg.mode == mgids::ExperimentConfig::Mode::ZeroSum
                                   ? mgids::run_zero_sum_experiment(cfg)
                                   : mgids::run_general_sum_experiment(cfg);
  std::printf("algorithm=%s episodes=%d draws=%d\n", report.algorithm_name.c_str(),
              report.episodes, report.num_prior_draws);
  std::printf("final mean cumulative regret: %.6f (stderr %.6f)\n",
              report.mean_cum_regret.back(), report.stderr_cum_regret.back());
  std::printf("final bound value:            %.6f\n", report.bound_series.back());
  std::printf("wrote %s and %s\n", cfg.csv_path.c_str(), cfg.report_path.c_str());
  return kOk;
}

int bounds_command(int thm, int S, int A, int B, int H, int K, int N, double info,
                   double epsilon) {
  mgids::BoundExtras extras;
  extras.mutual_information = info;
  extras.epsilon = epsilon;
  extras.num_players = N;
  mgids::BoundKind kind;
  switch (thm) {
    case 1: kind = mgids::BoundKind::Thm1; break;
    case 2: kind = mgids::BoundKind::Thm2; break;
    case 3: kind = mgids::BoundKind::Thm3; break;
    case 4: kind = mgids::BoundKind::Thm4; break;
    default: throw std::invalid_argument("--thm must be 1, 2, 3 or 4");
  }
  if (thm == 3 && info < 0.0)
    throw std::invalid_argument("--info (mutual information) required for --thm 3");
  double value = mgids::theoretical_bound(kind, S, A, B, H, K, extras);
  std::printf("%.17g\n", value);
  return kOk;
}

int audit_command(const std::string& config_path) {
  mgids::ExperimentConfig cfg =
      mgids::experiment_config_from_json(mgids::load_json_file(config_path));
  mgids::AuditReport audit = mgids::lemma_audit(cfg);
  std::printf("episodes checked: %d\n", audit.episodes_checked);
  std::printf("ratio checks:     %d (worst slack %.6g)\n", audit.ratio_checks,
              audit.worst_ratio_slack);
  std::printf("cumulative info:  %.6g (cap %.6g)\n", audit.cumulative_mi, audit.mi_cap);
  std::printf("worst identity mismatch: %.3g\n", audit.worst_mi_mismatch);
  if (audit.clean()) {
    std::printf("no violations\n");
    return kOk;
  }
  for (const auto& v : audit.violations)
    std::printf("VIOLATION seed=%d episode=%d kind=%s %s\n", v.seed, v.episode, v.kind.c_str(),
                v.details.c_str());
  return kAuditViolations;
}

int validate_command(const std::string& env_path) {
  nlohmann::json j = mgids::load_json_file(env_path);
  if (j.contains("num_players")) {
    mgids::GeneralSumGame env = mgids::general_sum_from_json(j);
    env.validate();
    std::printf("valid general-sum environment: N=%d H=%d S=%d joint_actions=%d\n",
                env.num_players, env.horizon, env.num_states, env.num_joint_actions());
  } else {
    mgids::ZeroSumGame env = mgids::zero_sum_from_json(j);
    env.validate();
    std::printf("valid zero-sum environment: H=%d S=%d A=%d B=%d\n", env.horizon,
                env.num_states, env.num_actions_max, env.num_actions_min);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-directed sampling workbench for tabular Markov games"};
  app.require_subcommand(1);

  std::string config_path, env_path, csv_override, report_override;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "experiment config JSON")->required();
  run->add_option("--csv", csv_override, "override the CSV output path");
  run->add_option("--report", report_override, "override the JSON report path");

  int thm = 2, S = 2, A = 2, B = 2, H = 2, K = 100, N = 2;
  double info = -1.0, epsilon = 0.0;
  auto* bounds = app.add_subcommand("bounds", "print a theoretical regret bound");
  bounds->add_option("--thm", thm,
                     "bound variant: 1/2 zero-sum, 3 compressed target, 4 general-sum")
      ->required();
  bounds->add_option("--S", S, "number of states")->required();
  bounds->add_option("--A", A, "max-player actions (joint actions for --thm 4)")->required();
  bounds->add_option("--B", B, "min-player actions");
  bounds->add_option("--H", H, "horizon")->required();
  bounds->add_option("--K", K, "episodes")->required();
  bounds->add_option("--N", N, "players (--thm 4)");
  bounds->add_option("--info", info, "mutual information term (--thm 3)");
  bounds->add_option("--epsilon", epsilon, "compression tolerance (--thm 3)");

  auto* audit = app.add_subcommand("audit", "run the information-cap audit");
  audit->add_option("config", config_path, "experiment config JSON")->required();

  auto* validate = app.add_subcommand("validate", "check an environment JSON file");
  validate->add_option("env", env_path, "environment JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, csv_override, report_override);
    if (bounds->parsed()) return bounds_command(thm, S, A, B, H, K, N, info, epsilon);
    if (audit->parsed()) return audit_command(config_path);
    if (validate->parsed()) return validate_command(env_path);
  } catch (const mgids::EnumerationTooLarge& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidationError;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidationError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return kRuntimeFailure;
  }
  return kOk;
}
