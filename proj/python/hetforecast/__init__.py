"""Simulation, direct multi-step prediction and model selection for linear
processes driven by conditionally heteroscedastic errors."""

from ._hetforecast import (
    HetfcConfigError,
    HetfcModelError,
    arma_to_ma,
    autocovariance,
    fit,
    negative_moment_sweep,
    population_mspe,
    sample_autocov,
    score_candidates,
    simulate,
)

__all__ = [
    "HetfcConfigError",
    "HetfcModelError",
    "arma_to_ma",
    "autocovariance",
    "fit",
    "negative_moment_sweep",
    "population_mspe",
    "sample_autocov",
    "score_candidates",
    "simulate",
]

__version__ = "0.1.0"
