"""Goodness-of-fit and independence tests for sparse multinomial data.

Wraps the C++ core: classical power-divergence statistics (Q, G, RC^lambda),
the zero-cell corrected statistics Q^ab and G^ab, chi-square quantiles, the
bundled example datasets, and a seeded Monte Carlo engine.
"""

from sparsegof._core import (
    STAT_NAMES,
    Error,
    __version__,
    builtin_distribution,
    builtin_table,
    chi_square_cdf,
    chi_square_quantile,
    choose_ab,
    cond2_check,
    corrected_estimator,
    corrected_g,
    corrected_q,
    kullback_g,
    pearson_q,
    perturb_distribution,
    power_divergence,
    run_simulation,
    run_test,
    run_test_independence,
    zero_count_decay,
)

__all__ = [
    "STAT_NAMES",
    "Error",
    "__version__",
    "builtin_distribution",
    "builtin_table",
    "chi_square_cdf",
    "chi_square_quantile",
    "choose_ab",
    "cond2_check",
    "corrected_estimator",
    "corrected_g",
    "corrected_q",
    "kullback_g",
    "pearson_q",
    "perturb_distribution",
    "power_divergence",
    "run_simulation",
    "run_test",
    "run_test_independence",
    "zero_count_decay",
]
