"""Ranking-based nonparametric independence test.

Pairs (X_i, Y_i) are split into a learning and a testing half; in each half
the Y's of a random subset are shuffled to build "negative" pairs. A ranking
forest learns to score true pairs above shuffled ones, and the ranks of the
held-out true pairs are compared with their exact distribution-free null law.

    >>> import rankindep as ri
    >>> x, y = ri.sample("GL", d=4, rho=0.6, n=500, seed=1)
    >>> ri.independence_test(x, y, seed=1)["reject"]
    True
"""

from ._rankindep import (
    BudgetExceeded,
    DegenerateInput,
    EmptyData,
    InvalidArgument,
    NullDistribution,
    distance_correlation,
    empirical_roc,
    epsilon_for_model,
    hsic_unbiased,
    independence_test,
    median_heuristic,
    null_distribution,
    permutation_test,
    quantile_upper_bound,
    run_experiment,
    sample,
    type2_first_term,
)

__all__ = [
    "BudgetExceeded",
    "DegenerateInput",
    "EmptyData",
    "InvalidArgument",
    "NullDistribution",
    "distance_correlation",
    "empirical_roc",
    "epsilon_for_model",
    "hsic_unbiased",
    "independence_test",
    "median_heuristic",
    "null_distribution",
    "permutation_test",
    "quantile_upper_bound",
    "run_experiment",
    "sample",
    "type2_first_term",
]

__version__ = "0.1.0"
