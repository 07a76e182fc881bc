"""Ruin asymptotics and simulation for two companies sharing fractional Brownian claims."""

from ._core import (
    DEFAULT_SEED,
    FormulaOptions,
    Model,
    NumericalError,
    asymptotics,
    classify,
    convergence,
    log_rate,
    pickands,
    piterbarg_analytic,
    psi_one_dim,
    sample_fbm,
    simulate,
)

__all__ = [
    "DEFAULT_SEED",
    "FormulaOptions",
    "Model",
    "NumericalError",
    "asymptotics",
    "classify",
    "convergence",
    "log_rate",
    "pickands",
    "piterbarg_analytic",
    "psi_one_dim",
    "sample_fbm",
    "simulate",
]
