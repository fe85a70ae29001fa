"""Signed reals stored as ``(sign, log|x|)`` plus vectorized helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LogSigned:
    sign: int
    log_abs: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign != 0 and not math.isfinite(self.log_abs):
            if self.log_abs == -math.inf:
                object.__setattr__(self, "sign", 0)
            else:
                raise OverflowError(f"non-finite log magnitude {self.log_abs}")

    @classmethod
    def zero(cls) -> "LogSigned":
        return cls(0)

    @classmethod
    def from_float(cls, x: float) -> "LogSigned":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "LogSigned":
        return cls(sign if log_abs > -math.inf else 0, log_abs)

    def __float__(self) -> float:
        return 0.0 if self.sign == 0 else self.sign * math.exp(self.log_abs)

    def __neg__(self):
        return LogSigned(-self.sign, self.log_abs)

    def __add__(self, other):
        if not isinstance(other, LogSigned):
            other = LogSigned.from_float(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log_abs >= other.log_abs else (other, self)
        d = small.log_abs - big.log_abs
        if big.sign == small.sign:
            return LogSigned(big.sign, big.log_abs + math.log1p(math.exp(d)))
        if d == 0:
            return LogSigned(0)
        return LogSigned(big.sign, big.log_abs + math.log1p(-math.exp(d)))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LogSigned):
            other = LogSigned.from_float(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LogSigned):
            other = LogSigned.from_float(other)
        if self.sign == 0 or other.sign == 0:
            return LogSigned(0)
        return LogSigned(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogSigned):
            other = LogSigned.from_float(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by LogSigned zero")
        if self.sign == 0:
            return LogSigned(0)
        return LogSigned(self.sign * other.sign, self.log_abs - other.log_abs)

    def rel_diff(self, other: "LogSigned") -> float:
        """``|self - other| / max(|self|, |other|)``, computed in log space."""
        if self.sign == other.sign == 0:
            return 0.0
        if self.sign != other.sign:
            return 1.0 if 0 in (self.sign, other.sign) else 2.0
        big = max(self.log_abs, other.log_abs)
        return -math.expm1(-abs(self.log_abs - other.log_abs)) if big > -math.inf else 0.0


def logsumexp(values: np.ndarray) -> float:
    """Two-pass log-sum-exp of a 1-d array (max pass, then shifted sum)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return -math.inf
    m = float(np.max(values))
    if m == -math.inf:
        return -math.inf
    return m + math.log(float(np.sum(np.exp(values - m))))


def segment_logsumexp(values: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """Log-sum-exp over contiguous segments beginning at ``starts``."""
    m = np.maximum.reduceat(values, starts)
    safe = np.where(np.isfinite(m), m, 0.0)
    lengths = np.diff(np.append(starts, values.size))
    shifted = np.exp(values - np.repeat(safe, lengths))
    s = np.add.reduceat(shifted, starts)
    with np.errstate(divide="ignore"):
        return np.where(np.isfinite(m), safe + np.log(s), -np.inf)


def log1mexp(x: np.ndarray) -> np.ndarray:
    """``log(1 - exp(x))`` for ``x <= 0``, accurate near both ends."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > -math.log(2), np.log(-np.expm1(x)), np.log1p(-np.exp(x)))
