"""Exact polynomials in ``q = exp(-t)`` with rational coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

Number = Union[int, Fraction]


class QPoly:
    """Sparse polynomial ``sum c_e q^e``; zero coefficients are never stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Number] | Iterable[tuple[int, Number]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for e, c in items:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._coeffs = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def monomial(cls, e: int, c: Number = 1) -> "QPoly":
        return cls({e: c})

    @classmethod
    def constant(cls, c: Number) -> "QPoly":
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, e: int) -> Fraction:
        return self._coeffs.get(e, Fraction(0))

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        return QPoly(list(self._coeffs.items()) + list(other._coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return QPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QPoly):
            out: dict[int, Fraction] = {}
            for e1, c1 in self._coeffs.items():
                for e2, c2 in other._coeffs.items():
                    out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
            return QPoly(out)
        c = Fraction(other)
        return QPoly({e: v * c for e, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, other: Number):
        return self * (1 / Fraction(other))

    def shift(self, e: int) -> "QPoly":
        """Multiply by ``q^e``."""
        return QPoly({k + e: c for k, c in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            if isinstance(other, (int, Fraction)):
                other = QPoly.constant(other)
            else:
                return NotImplemented
        return self._coeffs == other._coeffs

    __hash__ = None

    def __call__(self, q: Number) -> Fraction:
        return sum((c * Fraction(q) ** e for e, c in self._coeffs.items()), Fraction(0))

    def at_t(self, t: float) -> float:
        """Value at ``q = exp(-t)``; exact rational evaluation at the rounded ``q``."""
        return float(self(Fraction(math.exp(-t))))

    def __repr__(self):
        if not self._coeffs:
            return "QPoly(0)"
        parts = []
        for e, c in self._coeffs.items():
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*q^{e}" if c != 1 else f"q^{e}")
        return "QPoly(" + " + ".join(parts) + ")"


def ypoly_binomial(k: int, sign: int = -1) -> dict[int, Fraction]:
    """Coefficients of ``(1 + sign*y)^k`` as a dict exponent -> coefficient."""
    return {j: Fraction(math.comb(k, j) * sign**j) for j in range(k + 1)}


def ypoly_mul(p: dict[int, Fraction], r: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for e1, c1 in p.items():
        for e2, c2 in r.items():
            out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
    return out


def ypoly_to_q(p: dict[int, Fraction], k: int) -> QPoly:
    """Substitute ``y = q^k``."""
    return QPoly({e * k: c for e, c in p.items()})


class QRatio(NamedTuple):
    """Exact rational function ``num / den`` in ``q``."""

    num: QPoly
    den: QPoly

    def __call__(self, q: Number) -> Fraction:
        return self.num(q) / self.den(q)

    def at_t(self, t: float) -> float:
        q = Fraction(math.exp(-t))
        return float(self.num(q) / self.den(q))

    def equals(self, other: "QRatio") -> bool:
        return self.num * other.den == other.num * self.den
