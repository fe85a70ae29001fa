"""Public entry points with an ``exact`` / ``float`` mode switch.

Exact mode returns :class:`QPoly` (or :class:`QRatio`) in ``q = exp(-t)`` and
ignores ``t``. Float mode works in log space and returns :class:`LogSigned`
values, or plain floats for ratios such as ``m^2``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .. import repnum
from . import exact, numeric
from .beta import incomplete_beta_upper, log_upper_beta
from .exact import RouteDisagreement
from .logsigned import LogSigned, logsumexp

MODES = ("exact", "float")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _check_t(t) -> float:
    if t is None:
        raise ValueError("float mode needs a time t")
    t = float(t)
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    return t


def phi(n: int, a: int, b: int, k: int, t: float | None = None, mode: str = "exact"):
    _check_mode(mode)
    exact._check_cell(n, a, b, k)
    if mode == "exact":
        return exact.phi_exact(n, a, b, k)
    log_psi, _, negative = numeric.psi_cells(n, _check_t(t), k, b)
    if negative:
        raise ArithmeticError(f"psi bracket negative beyond tolerance at n={n}, a={a}, b={b}, k={k}")
    return LogSigned.from_log(float(log_psi[0]) - math.log(a + 1 - b))


def psi(n: int, b: int, k: int, t: float | None = None, mode: str = "exact"):
    _check_mode(mode)
    if not (1 <= k <= n and 0 <= b <= (n - k) // 2):
        raise ValueError(f"out of range: n={n}, b={b}, k={k}")
    if mode == "exact":
        return exact.psi_exact(n, b, k)
    log_psi, _, negative = numeric.psi_cells(n, _check_t(t), k, b)
    if negative:
        raise ArithmeticError(f"psi bracket negative beyond tolerance at n={n}, b={b}, k={k}")
    return LogSigned.from_log(float(log_psi[0]))


def tau_spectral(mu: tuple[int, int], k: int):
    return exact.tau_spectral(mu, k)


def weighted_cycle_expectation(n: int, k: int, t: float | None = None, mode: str = "exact"):
    """``E(alpha_k 2^alpha)`` at time ``t``."""
    _check_mode(mode)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if mode == "exact":
        return exact.weighted_cycle_expectation_exact(n, k)
    grid = numeric.psi_grid(n, _check_t(t), ks=[k])
    return LogSigned.from_log(float(grid.log_weighted_expectations()[0]))


def unweighted_cycle_expectation(n: int, k: int, t: float) -> LogSigned:
    """``E(alpha_k)`` at time ``t``."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    t = _check_t(t)
    log_y = -t * k
    log_choose = float(numeric.log_binomial(n, np.array(k)))
    if k == 1:
        first = (n - k + 1) * log_y
    elif log_y == 0.0:
        first = -math.inf
    else:
        first = (n - k + 1) * log_y + (k - 1) * math.log(-math.expm1(log_y)) - math.log(k)
    second = float(log_upper_beta(log_y, n - k + 1, k))
    return LogSigned.from_log(log_choose + float(np.logaddexp(first, second)))


def partition_function(n: int, t: float | None = None, mode: str = "exact"):
    """``Z = E(2^alpha)``; both routes are computed and compared."""
    _check_mode(mode)
    if n < 1:
        raise ValueError("n must be positive")
    if mode == "exact":
        return exact.partition_function_exact(n)
    point = numeric.evaluate_point(n, _check_t(t))
    return LogSigned.from_log(point.log_Z)


def magnetisation_sq(n: int, t: float | None = None, mode: str = "exact"):
    """``m^2``; a :class:`QRatio` in exact mode, a float otherwise."""
    _check_mode(mode)
    if n < 1:
        raise ValueError("n must be positive")
    if mode == "exact":
        return exact.magnetisation_sq_exact(n)
    return numeric.evaluate_point(n, _check_t(t)).m2


def expected_character(lam, t: float | None = None, mode: str = "exact"):
    """``E(chi_lam)`` at time ``t``, which is ``d_lam q^rho(lam)``."""
    _check_mode(mode)
    lam = tuple(lam)
    if mode == "exact":
        return exact.expected_character_exact(lam)
    t = _check_t(t)
    return LogSigned.from_log(math.log(repnum.dimension(lam)) - t * repnum.rho(lam))


def residual_truncated(n: int, M: int, t: float | None = None, mode: str = "float"):
    """Half the share of ``sum_k k E(alpha_k 2^alpha)`` carried by cycles longer than ``M``.

    Float mode uses the psi route for ``Z`` in the denominator, so ``M = 0``
    gives exactly ``1/2``.
    """
    _check_mode(mode)
    if not 0 <= M < n:
        raise ValueError("need 0 <= M < n")
    if mode == "exact":
        return exact.residual_truncated_exact(n, M)
    grid = numeric.psi_grid(n, _check_t(t))
    log_all = grid.log_sum()
    tail = grid.log_psi[grid.k > M]
    return 0.5 * math.exp(logsumexp(tail) - log_all)


@dataclass(frozen=True)
class CurvePoint:
    n: int
    t: float
    tau: float
    log_Z: float
    m2: float
    m2_over_n: float
    m2_over_n2: float

    @classmethod
    def build(cls, n: int, t: float, log_z: float, m2: float) -> "CurvePoint":
        return cls(n, t, t * n, log_z, m2, m2 / n, m2 / n**2)


def thread_count(requested: int | None = None) -> int:
    """``requested``, else ``MF_THREADS``, else the machine's CPU count."""
    if requested is not None:
        if requested < 1:
            raise ValueError("thread count must be positive")
        return requested
    env = os.environ.get("MF_THREADS")
    if env:
        value = int(env)
        if value < 1:
            raise ValueError("MF_THREADS must be a positive integer")
        return value
    return os.cpu_count() or 1


def curve_point(n: int, tau: float, mode: str = "float") -> CurvePoint:
    _check_mode(mode)
    t = tau / n
    if mode == "exact":
        z = exact.partition_function_exact(n).at_t(t)
        m2 = float(exact.magnetisation_sq_exact(n).at_t(t))
        return CurvePoint.build(n, t, math.log(z), m2)
    point = numeric.evaluate_point(n, t)
    return CurvePoint.build(n, t, point.log_Z, point.m2)


def curve(n: int, taus: Iterable[float], mode: str = "float", threads: int | None = None) -> list[CurvePoint]:
    """Evaluate ``Z`` and ``m^2`` at each ``tau = t n``; sorted by ``tau``.

    Points are independent, so they are spread over a thread pool; each point is
    computed serially, which keeps the output independent of the thread count.
    """
    _check_mode(mode)
    taus = sorted(float(x) for x in taus)
    if mode == "exact":
        z = exact.partition_function_exact(n)
        m2 = exact.magnetisation_sq_exact(n)
        return [
            CurvePoint.build(n, tau / n, math.log(z.at_t(tau / n)), float(m2.at_t(tau / n)))
            for tau in taus
        ]
    workers = thread_count(threads)
    if workers == 1 or len(taus) == 1:
        return [curve_point(n, tau) for tau in taus]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda tau: curve_point(n, tau), taus))


__all__ = [
    "CurvePoint",
    "MODES",
    "RouteDisagreement",
    "curve",
    "curve_point",
    "expected_character",
    "incomplete_beta_upper",
    "magnetisation_sq",
    "partition_function",
    "phi",
    "psi",
    "residual_truncated",
    "tau_spectral",
    "thread_count",
    "unweighted_cycle_expectation",
    "weighted_cycle_expectation",
]
