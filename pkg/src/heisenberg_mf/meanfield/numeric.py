"""Log-space evaluation of the closed form for large ``n``.

All ``(b, k)`` cells for one ``(n, t)`` are evaluated at once on flat arrays,
ordered by ``k`` ascending then ``b`` ascending. Sums over cells use two-pass
log-sum-exp in that order, so serial results are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .beta import log_upper_beta
from .logsigned import LogSigned, log1mexp, logsumexp, segment_logsumexp

CLAMP_REL = 1e-12
ROUTE_REL_TOL = 1e-9


def _kahan_sum(*terms: np.ndarray) -> np.ndarray:
    total = np.zeros(np.broadcast(*terms).shape)
    comp = np.zeros_like(total)
    for term in terms:
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def log_multinomial(n: int, k: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``log n! / ((k-1)! (a+1)! b!)``."""
    return _kahan_sum(
        np.full(np.shape(k), gammaln(n + 1.0)), -gammaln(k * 1.0), -gammaln(a + 2.0), -gammaln(b + 1.0)
    )


def log_binomial(n: int, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return _kahan_sum(np.full(k.shape, gammaln(n + 1.0)), -gammaln(k + 1.0), -gammaln(n - k + 1.0))


@dataclass
class PsiGrid:
    """Every ``psi(b, k, t)`` cell for one ``(n, t)``; ``log_psi`` is ``-inf`` for zeros."""

    n: int
    t: float
    k: np.ndarray
    b: np.ndarray
    log_psi: np.ndarray
    k_values: np.ndarray
    starts: np.ndarray
    clamp_count: int
    negative_count: int

    @property
    def cell_count(self) -> int:
        return int(self.k.size)

    def log_weighted_expectations(self) -> np.ndarray:
        """``log E(alpha_k 2^alpha)`` for each ``k`` in ``k_values``."""
        per_k = segment_logsumexp(self.log_psi, self.starts)
        return per_k + math.log(2.0) - np.log(self.k_values.astype(float))

    def log_sum(self, weight_log: np.ndarray | None = None) -> float:
        values = self.log_psi if weight_log is None else self.log_psi + weight_log
        return logsumexp(values)


def cell_layout(n: int, ks=None) -> tuple[np.ndarray, np.ndarray]:
    ks = np.arange(1, n + 1) if ks is None else np.asarray(ks, dtype=np.int64)
    counts = (n - ks) // 2 + 1
    k = np.repeat(ks, counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    b = np.arange(k.size) - np.repeat(starts, counts)
    return k.astype(np.int64), b.astype(np.int64)


def _psi_terms(n: int, t: float, k: np.ndarray, b: np.ndarray):
    """Log prefactor and signed log bracket terms of ``psi`` per cell."""
    a = n - k - b
    kf, bf, af = k.astype(float), b.astype(float), a.astype(float)
    log_y = -t * kf
    with np.errstate(divide="ignore"):
        log_1my = log1mexp(log_y)
    # (1-y)^(k-1) is 1 for k == 1 even at y == 1
    pow_1my = np.where(k == 1, 0.0, (kf - 1.0) * np.where(k == 1, 0.0, log_1my))

    zero_b = b == 0
    pos = ~zero_b
    ap = af + 1.0 - bf  # a + 1 - b >= 1

    log_pref = np.empty(k.size)
    l1 = np.empty(k.size)
    l2 = np.empty(k.size)
    l3 = np.full(k.size, -np.inf)
    s3 = np.zeros(k.size, dtype=np.int8)

    if np.any(zero_b):
        kz = kf[zero_b]
        log_pref[zero_b] = np.log(af[zero_b] + 1.0) + log_binomial(n, kz)
        l1[zero_b] = (n - kz + 1.0) * log_y[zero_b] + pow_1my[zero_b]
        l2[zero_b] = np.log(kz) + log_upper_beta(log_y[zero_b], n - kz + 1.0, kz)

    if np.any(pos):
        kp, bp, app, lyp = kf[pos], bf[pos], ap[pos], log_y[pos]
        ap_ = af[pos]
        log_pref[pos] = (
            np.log(app) + log_multinomial(n, kp, ap_, bp) - t * (ap_ * bp + bp)
        )
        l1[pos] = np.log(app) + (ap_ + bp + 2.0) * lyp + pow_1my[pos] - np.log(kp)
        l2[pos] = bp * lyp + np.log(app + kp) + log_upper_beta(lyp, ap_ + 2.0, kp)
        c3 = app - kp
        with np.errstate(divide="ignore"):
            l3_pos = (ap_ + 1.0) * lyp + np.log(np.abs(c3)) + log_upper_beta(lyp, bp + 1.0, kp)
        l3[pos] = np.where(c3 == 0, -np.inf, l3_pos)
        s3[pos] = np.sign(c3).astype(np.int8)
    return log_pref, l1, l2, l3, s3


def _combine(log_pref, l1, l2, l3, s3) -> tuple[np.ndarray, int, int]:
    """Signed log-sum of the three bracket terms; returns ``(log_psi, clamps, negatives)``."""
    positive = np.logaddexp(l1, l2)
    bracket = positive.copy()

    add = s3 > 0
    bracket[add] = np.logaddexp(positive[add], l3[add])

    # psi >= 0 analytically; a signed sum below CLAMP_REL of the largest term is
    # clamped to zero, anything more negative than that is counted as a defect
    sub = np.flatnonzero(s3 < 0)
    p_sub, n_sub = positive[sub], l3[sub]
    largest = np.maximum(p_sub, n_sub)
    with np.errstate(divide="ignore", invalid="ignore"):
        gap = -np.abs(p_sub - n_sub)
        magnitude = largest + log1mexp(np.where(np.isnan(gap), -np.inf, gap))
        small = magnitude - largest < math.log(CLAMP_REL)
    negative = (n_sub > p_sub) & ~small
    clamped = small & np.isfinite(largest)
    bracket[sub] = np.where(small | negative, -np.inf, magnitude)

    log_psi = log_pref + bracket
    log_psi[~np.isfinite(bracket)] = -np.inf
    return log_psi, int(np.count_nonzero(clamped)), int(np.count_nonzero(negative))


def psi_cells(n: int, t: float, k, b) -> tuple[np.ndarray, int, int]:
    """``log psi`` on arbitrary ``(k, b)`` cells; same contract as :func:`psi_grid`."""
    k = np.atleast_1d(np.asarray(k, dtype=np.int64))
    b = np.atleast_1d(np.asarray(b, dtype=np.int64))
    k, b = np.broadcast_arrays(k, b)
    if np.any(k < 1) or np.any(k > n) or np.any(b < 0) or np.any(2 * b > n - k):
        raise ValueError("need 1 <= k <= n and 0 <= b <= (n - k) // 2")
    if t < 0:
        raise ValueError("t must be nonnegative")
    return _combine(*_psi_terms(n, t, k.ravel(), b.ravel()))


def psi_grid(n: int, t: float, ks=None) -> PsiGrid:
    """Evaluate ``log psi`` on every cell (optionally only for the given ``k`` values)."""
    if n < 1:
        raise ValueError("n must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    k_values = np.arange(1, n + 1) if ks is None else np.asarray(ks, dtype=np.int64)
    if np.any(k_values < 1) or np.any(k_values > n):
        raise ValueError("k outside [1, n]")
    k, b = cell_layout(n, k_values)
    counts = (n - k_values) // 2 + 1
    starts = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)

    log_psi, clamp_count, negative_count = _combine(*_psi_terms(n, t, k, b))
    return PsiGrid(n, t, k, b, log_psi, k_values, starts, clamp_count, negative_count)


def log_partition_spectral(n: int, t: float) -> float:
    """``log Z`` from the two-row spectral sum ``sum_b (n-2b+1) d_[n-b,b] e^(-t b(n-b+1))``."""
    b = np.arange(n // 2 + 1, dtype=float)
    log_dim = log_binomial(n, b) + np.log(n - 2 * b + 1) - np.log(n - b + 1)
    terms = np.log(n - 2 * b + 1) + log_dim - t * b * (n - b + 1)
    return logsumexp(terms)


@dataclass(frozen=True)
class PointSummary:
    n: int
    t: float
    log_Z: float
    log_Z_psi: float
    m2: float
    log_weighted: np.ndarray  # log E(alpha_k 2^alpha), k = 1..n
    clamp_count: int
    negative_count: int
    cell_count: int


def evaluate_point(n: int, t: float, check_routes: bool = True) -> PointSummary:
    grid = psi_grid(n, t)
    log_den = grid.log_sum()
    if log_den == -math.inf:
        raise ArithmeticError(f"sum of psi underflowed at n={n}, t={t}")
    log_num = grid.log_sum(np.log(grid.k.astype(float)))
    log_z_psi = math.log(2.0 / n) + log_den
    log_z = log_partition_spectral(n, t)
    if check_routes:
        rel = LogSigned.from_log(log_z).rel_diff(LogSigned.from_log(log_z_psi))
        if rel > ROUTE_REL_TOL:
            from .exact import RouteDisagreement

            raise RouteDisagreement(
                f"Z routes disagree at n={n}, t={t}: relative difference {rel:.3e}"
            )
    m2 = n * math.exp(log_num - log_den)
    return PointSummary(
        n, t, log_z, log_z_psi, m2, grid.log_weighted_expectations(),
        grid.clamp_count, grid.negative_count, grid.cell_count,
    )
