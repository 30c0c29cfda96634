"""Sampling and approximately counting perfect matchings in spectral expanders."""

from ._core import (
    BudgetError,
    Error,
    Graph,
    ValidationError,
    census,
    cocktail_party,
    complete,
    count_distinct_greedy,
    count_perfect_matchings,
    find_augmenting_path,
    is_augmenting_path,
    is_eps_expander,
    load_graph,
    lower_bound_meps,
    lower_bound_pm,
    pendant_augment,
    petersen,
    random_regular,
    ratio_bound,
    rho_bound,
    run_cli,
    run_criterion,
    sample_perfect_matching,
    save_graph,
    spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
