// Python bindings for the core operations: environments, solvers, beliefs,
// information ratios, per-episode selection and the experiment harness.
// Environments, beliefs and configs cross the boundary as JSON-compatible
// dicts using the same schemas as the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "mgids/harness.hpp"
#include "mgids/info_ratio.hpp"
#include "mgids/serialization.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json json_from_py(const py::object& obj) {
  py::object dumps = py::module_::import("json").attr("dumps");
  return json::parse(dumps(obj).cast<std::string>());
}

py::object json_to_py(const json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

mgids::MarkovPolicy policy_from_rows(mgids::PlayerSide side, int horizon, int num_states,
                                     int num_actions,
                                     const std::vector<std::vector<double>>& rows) {
  mgids::MarkovPolicy p = mgids::MarkovPolicy::uniform(side, horizon, num_states, num_actions);
  if (rows.size() != static_cast<std::size_t>(horizon) * num_states)
    throw std::invalid_argument("expected one row per (step, state)");
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s) {
      const auto& row = rows[static_cast<std::size_t>(h) * num_states + s];
      if (static_cast<int>(row.size()) != num_actions)
        throw std::invalid_argument("policy row width mismatch");
      std::copy(row.begin(), row.end(), p.row(h, s).begin());
    }
  p.validate();
  return p;
}

std::vector<std::vector<double>> policy_rows(const mgids::MarkovPolicy& p) {
  std::vector<std::vector<double>> rows;
  for (int h = 0; h < p.horizon; ++h)
    for (int s = 0; s < p.num_states; ++s) {
      auto row = p.row(h, s);
      rows.emplace_back(row.begin(), row.end());
    }
  return rows;
}

struct BeliefHandle {
  mgids::Belief value;
};

}  // namespace

PYBIND11_MODULE(_mgids, m) {
  m.doc() = "Information-directed sampling for tabular Markov games";

  py::class_<mgids::ZeroSumGame>(m, "ZeroSumGame")
      .def_static("from_dict",
                  [](const py::object& obj) { return mgids::zero_sum_from_json(json_from_py(obj)); })
      .def("to_dict", [](const mgids::ZeroSumGame& env) { return json_to_py(mgids::to_json(env)); })
      .def("validate", &mgids::ZeroSumGame::validate)
      .def_readonly("horizon", &mgids::ZeroSumGame::horizon)
      .def_readonly("num_states", &mgids::ZeroSumGame::num_states)
      .def_readonly("num_actions_max", &mgids::ZeroSumGame::num_actions_max)
      .def_readonly("num_actions_min", &mgids::ZeroSumGame::num_actions_min)
      .def_readonly("initial_state", &mgids::ZeroSumGame::initial_state);

  py::class_<mgids::MarkovPolicy>(m, "MarkovPolicy")
      .def_static("uniform_max",
                  [](const mgids::ZeroSumGame& env) {
                    return mgids::MarkovPolicy::uniform(mgids::PlayerSide::Max, env.horizon,
                                                        env.num_states, env.num_actions_max);
                  })
      .def_static("uniform_min",
                  [](const mgids::ZeroSumGame& env) {
                    return mgids::MarkovPolicy::uniform(mgids::PlayerSide::Min, env.horizon,
                                                        env.num_states, env.num_actions_min);
                  })
      .def_static("max_from_rows",
                  [](int horizon, int num_states, int num_actions,
                     const std::vector<std::vector<double>>& rows) {
                    return policy_from_rows(mgids::PlayerSide::Max, horizon, num_states,
                                            num_actions, rows);
                  })
      .def_static("min_from_rows",
                  [](int horizon, int num_states, int num_actions,
                     const std::vector<std::vector<double>>& rows) {
                    return policy_from_rows(mgids::PlayerSide::Min, horizon, num_states,
                                            num_actions, rows);
                  })
      .def("rows", &policy_rows)
      .def_readonly("horizon", &mgids::MarkovPolicy::horizon)
      .def_readonly("num_states", &mgids::MarkovPolicy::num_states)
      .def_readonly("num_actions", &mgids::MarkovPolicy::num_actions);

  m.def("evaluate_value", [](const mgids::ZeroSumGame& env, const mgids::MarkovPolicy& mu,
                             const mgids::MarkovPolicy& nu) {
    return mgids::evaluate_values(env, mu, nu).initial_value(env);
  });
  m.def("best_response_min", [](const mgids::ZeroSumGame& env, const mgids::MarkovPolicy& mu) {
    mgids::BestResponse br = mgids::best_response_min(env, mu);
    return py::make_tuple(br.policy, br.values.initial_value(env));
  });
  m.def("best_response_max", [](const mgids::ZeroSumGame& env, const mgids::MarkovPolicy& nu) {
    mgids::BestResponse br = mgids::best_response_max(env, nu);
    return py::make_tuple(br.policy, br.values.initial_value(env));
  });
  m.def("solve_nash", [](const mgids::ZeroSumGame& env) {
    mgids::NashSolution nash = mgids::solve_nash(env);
    return py::make_tuple(nash.mu, nash.nu, nash.values.initial_value(env));
  });
  m.def("minimax_solve", [](const std::vector<std::vector<double>>& payoff) {
    mgids::MatrixGame g;
    g.num_rows = static_cast<int>(payoff.size());
    g.num_cols = payoff.empty() ? 0 : static_cast<int>(payoff[0].size());
    for (const auto& row : payoff) {
      if (static_cast<int>(row.size()) != g.num_cols)
        throw std::invalid_argument("ragged payoff matrix");
      g.payoff.insert(g.payoff.end(), row.begin(), row.end());
    }
    mgids::MinimaxSolution sol = mgids::minimax_solve(g);
    return py::make_tuple(sol.row_strategy, sol.col_strategy, sol.value);
  });
  m.def("simulate_episode",
        [](const mgids::ZeroSumGame& env, const mgids::MarkovPolicy& mu,
           const mgids::MarkovPolicy& nu, std::uint64_t seed) {
          mgids::Trajectory t = mgids::simulate_episode(env, mu, nu, seed);
          py::list steps;
          for (const auto& st : t.steps)
            steps.append(py::make_tuple(st.state, st.action_max, st.action_min, st.reward));
          return py::make_tuple(steps, t.final_state);
        });

  // Beliefs cross as JSON dicts; the handle is opaque.
  py::class_<BeliefHandle>(m, "Belief")
      .def_static("from_dict",
                  [](const py::object& obj) {
                    return BeliefHandle{mgids::belief_from_json(json_from_py(obj))};
                  })
      .def("to_dict",
           [](const BeliefHandle& b) { return json_to_py(mgids::to_json(b.value)); })
      .def(
          "sample_env",
          [](const BeliefHandle& b, std::uint64_t seed) { return mgids::sample_env(b.value, seed); },
          py::arg("seed"))
      .def(
          "update",
          [](const BeliefHandle& b, const mgids::ZeroSumGame& env, const mgids::MarkovPolicy& mu,
             const mgids::MarkovPolicy& nu, std::uint64_t seed) {
            return BeliefHandle{
                mgids::posterior_update(b.value, mgids::simulate_episode(env, mu, nu, seed))};
          },
          py::arg("env"), py::arg("mu"), py::arg("nu"), py::arg("seed"))
      .def("mean_env",
           [](const BeliefHandle& b, double lambda, bool bonus) {
             return mgids::build_mean_env(b.value, lambda,
                                          bonus ? mgids::RewardShift::Bonus
                                                : mgids::RewardShift::Penalty)
                 .env;
           },
           py::arg("lambda_"), py::arg("bonus") = true)
      .def("expected_value",
           [](const BeliefHandle& b, const mgids::MarkovPolicy& mu, const mgids::MarkovPolicy& nu) {
             return mgids::expected_value(b.value, mu, nu).value;
           })
      .def("mutual_info_trajectory",
           [](const BeliefHandle& b, const mgids::MarkovPolicy& mu, const mgids::MarkovPolicy& nu) {
             return mgids::mutual_info_trajectory(b.value, mu, nu);
           });

  m.def(
      "random_product_prior",
      [](const py::object& base, const std::vector<int>& per_step, std::uint64_t seed) {
        return BeliefHandle{mgids::Belief{mgids::random_product_support(
            mgids::zero_sum_from_json(json_from_py(base)), per_step, seed)}};
      },
      py::arg("base"), py::arg("per_step_choices"), py::arg("seed"));

  m.def("joint_info_ratio",
        [](const BeliefHandle& b, const mgids::MarkovPolicy& mu, const mgids::MarkovPolicy& nu) {
          mgids::InfoRatioReport r = mgids::joint_info_ratio(
              b.value, mgids::PolicyMixture::pure(mu), mgids::PolicyMixture::pure(nu));
          py::dict d;
          d["numerator"] = r.numerator_regret;
          d["mi"] = r.denominator_mi;
          d["ratio"] = r.ratio;
          d["infinite"] = r.infinite;
          return d;
        });
  m.def("marginal_info_ratio",
        [](const BeliefHandle& b, const mgids::MarkovPolicy& mu, const mgids::MarkovPolicy& nu) {
          mgids::InfoRatioReport r =
              mgids::marginal_info_ratio(b.value, mu, mgids::PolicyMixture::pure(nu));
          py::dict d;
          d["numerator"] = r.numerator_regret;
          d["mi"] = r.denominator_mi;
          d["ratio"] = r.ratio;
          d["infinite"] = r.infinite;
          return d;
        });

  m.def(
      "ts_select",
      [](const BeliefHandle& b, std::uint64_t seed) {
        mgids::MarkovPolicy mu = mgids::ts_select_max(b.value, mgids::derive_seed(seed, {0xau}));
        mgids::MarkovPolicy nu =
            mgids::ts_select_min(b.value, mu, mgids::derive_seed(seed, {0xbu}));
        return py::make_tuple(mu, nu);
      },
      py::arg("belief"), py::arg("seed"));
  m.def(
      "reg_maids_select",
      [](const BeliefHandle& b, double lambda, double lambda_tilde) {
        mgids::AlgorithmConfig cfg;
        cfg.algorithm = mgids::Algorithm::RegMAIDS;
        cfg.lambda = lambda;
        cfg.lambda_tilde = lambda_tilde;
        mgids::EpisodePolicyPair pair = mgids::reg_maids_select(b.value, cfg);
        return py::make_tuple(pair.mu, pair.nu);
      },
      py::arg("belief"), py::arg("lambda_"), py::arg("lambda_tilde"));

  m.def("theoretical_bound",
        [](int thm, int S, int A, int B, int H, int K, int N, double info, double epsilon) {
          mgids::BoundExtras extras;
          extras.mutual_information = info;
          extras.epsilon = epsilon;
          extras.num_players = N;
          mgids::BoundKind kind = thm == 1   ? mgids::BoundKind::Thm1
                                  : thm == 2 ? mgids::BoundKind::Thm2
                                  : thm == 3 ? mgids::BoundKind::Thm3
                                             : mgids::BoundKind::Thm4;
          return mgids::theoretical_bound(kind, S, A, B, H, K, extras);
        },
        py::arg("thm"), py::arg("S"), py::arg("A"), py::arg("B"), py::arg("H"), py::arg("K"),
        py::arg("N") = 2, py::arg("info") = 0.0, py::arg("epsilon") = 0.0);

  m.def("run_experiment", [](const py::object& config) {
    mgids::ExperimentConfig cfg = mgids::experiment_config_from_json(json_from_py(config));
    mgids::RegretReport report = cfg.mode == mgids::ExperimentConfig::Mode::ZeroSum
                                     ? mgids::run_zero_sum_experiment(cfg)
                                     : mgids::run_general_sum_experiment(cfg);
    py::dict d;
    d["algorithm"] = report.algorithm_name;
    d["mean_cum_regret"] = report.mean_cum_regret;
    d["stderr_cum_regret"] = report.stderr_cum_regret;
    d["mean_cum_mi"] = report.mean_cum_mi;
    d["bound_series"] = report.bound_series;
    return d;
  });
}
