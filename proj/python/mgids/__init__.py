"""Information-directed sampling workbench for tabular Markov games."""

from _mgids import (  # noqa: F401
    Belief,
    MarkovPolicy,
    ZeroSumGame,
    best_response_max,
    best_response_min,
    evaluate_value,
    joint_info_ratio,
    marginal_info_ratio,
    minimax_solve,
    random_product_prior,
    reg_maids_select,
    run_experiment,
    simulate_episode,
    solve_nash,
    theoretical_bound,
    ts_select,
)

__all__ = [
    "Belief",
    "MarkovPolicy",
    "ZeroSumGame",
    "best_response_max",
    "best_response_min",
    "evaluate_value",
    "joint_info_ratio",
    "marginal_info_ratio",
    "minimax_solve",
    "random_product_prior",
    "reg_maids_select",
    "run_experiment",
    "simulate_episode",
    "solve_nash",
    "theoretical_bound",
    "ts_select",
]
