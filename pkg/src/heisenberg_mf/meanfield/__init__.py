"""Closed-form mean-field quantities in exact and floating modes."""

from .analysis import beta_max, mu_fn
from .evaluate import (
    MODES,
    CurvePoint,
    RouteDisagreement,
    curve,
    curve_point,
    expected_character,
    incomplete_beta_upper,
    magnetisation_sq,
    partition_function,
    phi,
    psi,
    residual_truncated,
    tau_spectral,
    thread_count,
    unweighted_cycle_expectation,
    weighted_cycle_expectation,
)
from .logsigned import LogSigned
from .qpoly import QPoly, QRatio

__all__ = [
    "MODES",
    "CurvePoint",
    "LogSigned",
    "QPoly",
    "QRatio",
    "RouteDisagreement",
    "beta_max",
    "curve",
    "curve_point",
    "expected_character",
    "incomplete_beta_upper",
    "magnetisation_sq",
    "mu_fn",
    "partition_function",
    "phi",
    "psi",
    "residual_truncated",
    "tau_spectral",
    "thread_count",
    "unweighted_cycle_expectation",
    "weighted_cycle_expectation",
]
