"""Sparse random GF(2) matrices: dependency thresholds, 2-cores and exact sums.

Thin wrapper over the compiled ``_core`` module. Weight laws are given as
strings such as ``"r=3"`` or ``"0.9:3,0.1:24"``.
"""

from ._core import (
    F,
    alpha_bar,
    alpha_sharp,
    alpha_star,
    core_theory,
    corank,
    expected_null_count,
    first_dependency,
    g_star,
    h_psi,
    normalize_rho,
    null_vectors,
    peel,
    pi_multinomial,
    pi_multinomial_exact,
    sample_rows,
    table1,
    thresholds,
    verify,
    version,
)

__version__ = version()

__all__ = [
    "F",
    "alpha_bar",
    "alpha_sharp",
    "alpha_star",
    "core_theory",
    "corank",
    "expected_null_count",
    "first_dependency",
    "g_star",
    "h_psi",
    "normalize_rho",
    "null_vectors",
    "peel",
    "pi_multinomial",
    "pi_multinomial_exact",
    "sample_rows",
    "table1",
    "thresholds",
    "verify",
    "version",
]
