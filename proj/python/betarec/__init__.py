"""Beta-expansions, recurrence exponents and the Cantor construction."""

from ._core import (
    BetaError,
    approx_beta,
    cantor_measure,
    cantor_plan,
    cantor_sample,
    count_admissible,
    dim_R,
    dim_series,
    dim_uniform,
    eps_star,
    expand,
    exponents,
    full_scan,
    is_admissible,
    maximizer,
    returns,
)

__all__ = [
    "BetaError",
    "approx_beta",
    "cantor_measure",
    "cantor_plan",
    "cantor_sample",
    "count_admissible",
    "dim_R",
    "dim_series",
    "dim_uniform",
    "eps_star",
    "expand",
    "exponents",
    "full_scan",
    "is_admissible",
    "maximizer",
    "returns",
]
