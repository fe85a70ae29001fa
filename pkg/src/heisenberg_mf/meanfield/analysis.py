"""Rate function minimiser and finite-size transition scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

GRID_POINTS = 1000
BISECT_TOL = 1e-12
STABLE_SPREAD = 1.2  # max/min ratio counted as "stable" across n
CRITICAL_EXPONENT = 0.5  # m^2/n^2 ~ n^(-1/2) at the critical point


def mu_fn(beta: float, tau: float) -> float:
    """``(1-b)log(1-b) + b log b + tau b (1-b)``, with the ``b -> 0`` limit at 0."""
    if not 0.0 <= beta <= 0.5:
        raise ValueError("beta must lie in [0, 1/2]")
    return _xlogx(1.0 - beta) + _xlogx(beta) + tau * beta * (1.0 - beta)


def _xlogx(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log(x)


def mu_prime(beta: float, tau: float) -> float:
    return math.log(beta / (1.0 - beta)) + tau * (1.0 - 2.0 * beta)


def beta_max(tau: float) -> float:
    """Global minimiser of :func:`mu_fn` on ``[0, 1/2]``.

    A grid scan finds the basin; an interior minimum is then refined by
    bisection on the derivative.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    grid = np.linspace(0.0, 0.5, GRID_POINTS + 1)
    values = np.array([mu_fn(b, tau) for b in grid])
    i = int(np.argmin(values))
    if i == GRID_POINTS:
        return 0.5
    lo = grid[max(i - 1, 0)] or 1e-300
    hi = grid[min(i + 1, GRID_POINTS)]
    if hi == 0.5 and mu_prime(lo, tau) < 0 <= mu_prime(0.5 - 1e-15, tau):
        hi = 0.5 - 1e-15
    return bisect(mu_prime, lo, hi, args=(tau,), xtol=BISECT_TOL)


@dataclass(frozen=True)
class TransitionRow:
    tau: float
    m2_over_n2: tuple[float, ...]  # aligned with the scan's n-list
    exponent: float  # -d log(m2/n2) / d log n
    behaviour: str  # "decreasing", "stable" or "mixed"


def classify(values: Sequence[float]) -> str:
    values = list(values)
    if max(values) <= STABLE_SPREAD * min(values):
        return "stable"
    if all(x > y for x, y in zip(values, values[1:])):
        return "decreasing"
    return "mixed"


def effective_exponent(ns: Sequence[int], values: Sequence[float]) -> float:
    slope = np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)[0]
    return float(-slope)


def transition_rows(ns: Sequence[int], taus: Sequence[float], table: np.ndarray) -> list[TransitionRow]:
    """``table[i, j]`` holds ``m^2/n^2`` for ``ns[i]`` at ``taus[j]``."""
    rows = []
    for j, tau in enumerate(taus):
        col = tuple(float(x) for x in table[:, j])
        rows.append(TransitionRow(float(tau), col, effective_exponent(ns, col), classify(col)))
    return rows


def crossing_tau(rows: Sequence[TransitionRow]) -> float:
    """First ``tau`` where the effective exponent drops through the critical value.

    Subcritically ``m^2 ~ n`` (exponent 1), supercritically ``m^2 ~ n^2``
    (exponent 0); the crossing of 1/2 is interpolated linearly in ``tau``.
    Returns ``nan`` when the scan never crosses.
    """
    for left, right in zip(rows, rows[1:]):
        g0, g1 = left.exponent - CRITICAL_EXPONENT, right.exponent - CRITICAL_EXPONENT
        if g0 >= 0 > g1:
            return left.tau + (right.tau - left.tau) * g0 / (g0 - g1)
    return math.nan
