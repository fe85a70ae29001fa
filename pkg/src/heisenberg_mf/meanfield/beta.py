"""Upper incomplete beta integrals in log space.

``log_upper_beta(log_y, p, q)`` returns ``log int_y^1 x^(p-1) (1-x)^(q-1) dx``.
The continued fraction for the regularized incomplete beta is evaluated with
the modified Lentz method, vectorized over arrays of arguments.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betaln

from .logsigned import LogSigned, log1mexp

CF_TOL = 1e-14
CF_MAX_ITER = 300
_TINY = 1e-300


class BetaConvergenceError(ArithmeticError):
    """Continued fraction did not converge; carries the offending arguments."""

    def __init__(self, x, a, b, iterations):
        self.x, self.a, self.b = np.atleast_1d(x), np.atleast_1d(a), np.atleast_1d(b)
        self.iterations = iterations
        shown = ", ".join(
            f"(x={xi:.17g}, a={ai:g}, b={bi:g})" for xi, ai, bi in zip(self.x[:5], self.a[:5], self.b[:5])
        )
        super().__init__(
            f"incomplete beta continued fraction failed to converge in {iterations} "
            f"iterations for {self.x.size} argument(s): {shown}"
        )


def _betacf(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Continued-fraction factor ``h`` with ``int_0^x t^(a-1)(1-t)^(b-1) = x^a (1-x)^b h / a``."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    active = np.arange(x.size)
    for m in range(1, CF_MAX_ITER + 1):
        xa, aa_, ba = x[active], a[active], b[active]
        qaba, qapa, qama = qab[active], qap[active], qam[active]
        ca, da, ha = c[active], d[active], h[active]
        m2 = 2 * m
        num = m * (ba - m) * xa / ((qama + m2) * (aa_ + m2))
        da = 1.0 + num * da
        da = np.where(np.abs(da) < _TINY, _TINY, da)
        ca = 1.0 + num / ca
        ca = np.where(np.abs(ca) < _TINY, _TINY, ca)
        da = 1.0 / da
        ha = ha * da * ca
        num = -(aa_ + m) * (qaba + m) * xa / ((aa_ + m2) * (qapa + m2))
        da = 1.0 + num * da
        da = np.where(np.abs(da) < _TINY, _TINY, da)
        ca = 1.0 + num / ca
        ca = np.where(np.abs(ca) < _TINY, _TINY, ca)
        da = 1.0 / da
        delta = da * ca
        ha = ha * delta
        c[active], d[active], h[active] = ca, da, ha
        done = np.abs(delta - 1.0) < CF_TOL
        active = active[~done]
        if active.size == 0:
            return h
    raise BetaConvergenceError(x[active], a[active], b[active], CF_MAX_ITER)


def log_upper_beta(log_y, p, q) -> np.ndarray:
    """Vectorized ``log int_y^1 x^(p-1)(1-x)^(q-1) dx`` for ``p, q >= 1``, ``log_y <= 0``.

    Returns ``-inf`` where ``y == 1``. Uses the complementary tail when
    ``y > (p+1)/(p+q+2)`` so that ``1 - I_y`` never cancels.
    """
    log_y, p, q = np.broadcast_arrays(
        np.asarray(log_y, dtype=float), np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    )
    shape = log_y.shape
    log_y, p, q = log_y.ravel(), p.ravel(), q.ravel()
    if np.any(log_y > 0) or np.any(p < 1) or np.any(q < 1):
        raise ValueError("need log_y <= 0 and p, q >= 1")
    out = np.full(log_y.shape, -np.inf)
    log_b = betaln(p, q)
    y = np.exp(log_y)
    log_1my = log1mexp(log_y)

    zero_y = np.isneginf(log_y)
    out[zero_y] = log_b[zero_y]
    live = ~zero_y & (log_y < 0)

    tail = live & (y > (p + 1.0) / (p + q + 2.0))
    if np.any(tail):
        # int_y^1 = int_0^{1-y} t^(q-1)(1-t)^(p-1)
        x, a, b = -np.expm1(log_y[tail]), q[tail], p[tail]
        h = _betacf(x, a, b)
        out[tail] = a * log_1my[tail] + b * log_y[tail] + np.log(h) - np.log(a)

    head = live & ~tail
    if np.any(head):
        x, a, b = y[head], p[head], q[head]
        h = _betacf(x, a, b)
        log_lower = a * log_y[head] + b * log_1my[head] + np.log(h) - np.log(a)
        out[head] = log_b[head] + log1mexp(log_lower - log_b[head])
    return out.reshape(shape)


def incomplete_beta_upper(log_y: float, p: float, q_: float) -> LogSigned:
    """``int_y^1 x^(p-1) (1-x)^(q_-1) dx`` with ``y = exp(log_y)``."""
    value = float(log_upper_beta(log_y, p, q_))
    return LogSigned.from_log(value) if value > -math.inf else LogSigned.zero()
