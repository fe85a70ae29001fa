"""Symmetric polynomials in ``v`` variables and the Frobenius characteristic.

Everything is exact (``Fraction`` coefficients). A :class:`SymPoly` stores the
full expansion, so two symmetric polynomials are equal exactly when their term
dictionaries are equal.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Iterator, Mapping

import numpy as np

from . import repnum
from .young import Partition, border_strips, class_size, partitions, partitions_list

Exponent = tuple[int, ...]


class SymPoly:
    """Polynomial in ``nvars`` variables; exponent tuple -> nonzero ``Fraction``."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int | Fraction] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = clean.get(tuple(e), Fraction(0)) + c
        self._terms = {e: c for e, c in clean.items() if c}

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_symmetric(self) -> bool:
        return all(
            self._terms.get(tuple(p)) == c for e, c in self._terms.items() for p in set(permutations(e))
        )

    def monomial_coefficients(self) -> dict[Partition, Fraction]:
        """Coefficients in the monomial basis ``M_lam`` (reads sorted exponents only)."""
        out = {}
        for e, c in self._terms.items():
            if all(e[i] >= e[i + 1] for i in range(len(e) - 1)):
                out[tuple(x for x in e if x)] = c
        return out

    def _same_ring(self, other: "SymPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable counts differ")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._same_ring(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SymPoly(self.nvars, out)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymPoly):
            self._same_ring(other)
            out: dict[Exponent, Fraction] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return SymPoly(self.nvars, out)
        c = Fraction(other)
        return SymPoly(self.nvars, {e: v * c for e, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        return f"SymPoly(nvars={self.nvars}, terms={len(self._terms)})"


def zero(v: int) -> SymPoly:
    return SymPoly(v)


def _padded(lam: Partition, v: int) -> Exponent:
    if len(lam) > v:
        raise ValueError(f"{lam} has more than {v} parts")
    return tuple(lam) + (0,) * (v - len(lam))


@lru_cache(maxsize=None)
def _monomial_terms(lam: Partition, v: int) -> tuple[Exponent, ...]:
    return tuple(sorted(set(permutations(_padded(lam, v)))))


def monomial_sym(lam: Partition, v: int) -> SymPoly:
    """``M_lam``: sum of the distinct rearrangements of ``x^lam``."""
    return SymPoly(v, {e: 1 for e in _monomial_terms(tuple(lam), v)})


def from_monomial_basis(coeffs: Mapping[Partition, int | Fraction], v: int) -> SymPoly:
    terms: dict[Exponent, Fraction] = {}
    for lam, c in coeffs.items():
        if c and len(lam) <= v:
            for e in _monomial_terms(tuple(lam), v):
                terms[e] = terms.get(e, Fraction(0)) + Fraction(c)
    return SymPoly(v, terms)


def power_sum(k: int, v: int) -> SymPoly:
    if k < 1 or v < 1:
        raise ValueError("need k >= 1 and v >= 1")
    return SymPoly(v, {tuple(k if j == i else 0 for j in range(v)): 1 for i in range(v)})


@lru_cache(maxsize=None)
def _signed_permutations(v: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(permutations(range(v))), dtype=np.int64).reshape(-1, v)
    inversions = np.zeros(len(perms), dtype=np.int64)
    for i in range(v):
        for j in range(i + 1, v):
            inversions += perms[:, i] > perms[:, j]
    return perms, np.where(inversions % 2 == 0, 1, -1)


@lru_cache(maxsize=None)
def _schur_to_monomial(degree: int, v: int) -> tuple[tuple[Partition, ...], tuple[tuple[int, ...], ...]]:
    """Rows ``K[lam]`` with ``s_lam = sum_mu K[lam][mu] M_mu`` over partitions with <= v parts.

    Writes ``a_delta M_mu = sum_gamma A[gamma][mu] a_(gamma+delta)``, where
    ``A[gamma][mu]`` is the coefficient of the strictly decreasing monomial
    ``x^(gamma+delta)``. Since ``a_(lam+delta) = a_delta s_lam``, the Schur rows
    solve ``A x = e_lam``; ``A`` is unitriangular, so forward substitution over
    the integers divides the alternants exactly.
    """
    shapes = tuple(p for p in partitions(degree) if len(p) <= v)
    index = {p: i for i, p in enumerate(shapes)}
    m = len(shapes)
    perms, signs = _signed_permutations(v)
    delta = np.arange(v - 1, -1, -1, dtype=np.int64)
    moved = delta[perms]  # sigma(delta) for every sigma
    A = [[0] * m for _ in range(m)]
    for g, gamma in enumerate(shapes):
        diff = np.asarray(_padded(gamma, v), dtype=np.int64) + delta - moved
        ok = np.all(diff >= 0, axis=1)
        rows = -np.sort(-diff[ok], axis=1)
        for row, s in zip(map(tuple, rows), signs[ok]):
            A[g][index[tuple(x for x in row if x)]] += int(s)

    for i in range(m):
        assert A[i][i] == 1 and all(A[i][j] == 0 for j in range(i + 1, m)), "A not unitriangular"
    K = []
    for lam in range(m):
        x = [0] * m
        for i in range(m):
            x[i] = (1 if i == lam else 0) - sum(A[i][j] * x[j] for j in range(i))
        K.append(tuple(x))
    return shapes, tuple(K)


def schur(lam: Partition, v: int) -> SymPoly:
    """Schur polynomial ``s_lam(x_1, ..., x_v)`` via the ratio of alternants."""
    lam = tuple(lam)
    if len(lam) > v:
        raise ValueError(f"{lam} needs at least {len(lam)} variables")
    shapes, K = _schur_to_monomial(sum(lam), v)
    row = K[shapes.index(lam)]
    return from_monomial_basis(dict(zip(shapes, row)), v)


def _tableaux(lam: Partition, v: int) -> Iterator[list[list[int]]]:
    """Semistandard tableaux of shape ``lam`` with entries ``1..v``, filled row by row."""
    cells = [(i, j) for i, r in enumerate(lam) for j in range(r)]
    grid = [[0] * r for r in lam]

    def rec(pos: int):
        if pos == len(cells):
            yield grid
            return
        i, j = cells[pos]
        lo = 1
        if j > 0:
            lo = max(lo, grid[i][j - 1])
        if i > 0:
            lo = max(lo, grid[i - 1][j] + 1)
        for x in range(lo, v + 1):
            grid[i][j] = x
            yield from rec(pos + 1)
        grid[i][j] = 0

    yield from rec(0)


def schur_by_tableaux(lam: Partition, v: int) -> SymPoly:
    """Slow oracle: ``s_lam`` as the weight generating function of SSYT."""
    counts: Counter = Counter()
    for t in _tableaux(tuple(lam), v):
        weight = [0] * v
        for row in t:
            for x in row:
                weight[x - 1] += 1
        counts[tuple(weight)] += 1
    return SymPoly(v, counts)


class ClassFunction:
    """Exact rational function on the cycle types of ``S_n``."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Mapping[Partition, int | Fraction]):
        keys = set(partitions_list(n))
        given = {tuple(k) for k in values}
        if given != keys:
            raise ValueError(f"class function on S_{n} must be given on every cycle type")
        self.n = n
        self.values = {tuple(k): Fraction(v) for k, v in values.items()}

    @classmethod
    def from_rule(cls, n: int, rule: Callable[[Partition], int | Fraction]) -> "ClassFunction":
        return cls(n, {p: rule(p) for p in partitions_list(n)})

    def __call__(self, cycle_type: Partition) -> Fraction:
        return self.values[tuple(sorted(cycle_type, reverse=True))]

    def total(self) -> Fraction:
        """Sum over all permutations, ``sum_pi f(pi)``."""
        return sum((class_size(p) * v for p, v in self.values.items()), Fraction(0))

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        if self.n != other.n:
            raise ValueError("different symmetric groups")
        return ClassFunction(self.n, {p: v * other.values[p] for p, v in self.values.items()})


def two_power_alpha(n: int) -> ClassFunction:
    """``2^alpha`` with ``alpha`` the number of cycles."""
    return ClassFunction.from_rule(n, lambda p: 2 ** len(p))


def cycle_count(n: int, k: int) -> ClassFunction:
    """``alpha_k``: the number of ``k``-cycles."""
    return ClassFunction.from_rule(n, lambda p: p.count(k))


def weighted_cycle_count(n: int, k: int) -> ClassFunction:
    """``alpha_k 2^alpha``."""
    return ClassFunction.from_rule(n, lambda p: p.count(k) * 2 ** len(p))


def character_function(lam: Partition) -> ClassFunction:
    lam = tuple(lam)
    return ClassFunction.from_rule(sum(lam), lambda p: repnum.character(lam, p))


@lru_cache(maxsize=None)
def _young_subgroup_types(lam: Partition) -> tuple[tuple[Partition, Fraction], ...]:
    """Distribution of cycle types in the Young subgroup ``S_lam1 x S_lam2 x ...``."""
    dist: dict[Partition, Fraction] = {(): Fraction(1)}
    for part in lam:
        step: dict[Partition, Fraction] = {}
        for rho in partitions_list(part):
            w = Fraction(class_size(rho), factorial(part))
            for sigma, p in dist.items():
                key = tuple(sorted(sigma + rho, reverse=True))
                step[key] = step.get(key, Fraction(0)) + p * w
        dist = step
    return tuple(dist.items())


def young_subgroup_average(f: ClassFunction, lam: Partition) -> Fraction:
    return sum((p * f.values[rho] for rho, p in _young_subgroup_types(tuple(lam))), Fraction(0))


def frobenius_ch(f: ClassFunction, v: int) -> SymPoly:
    """``ch(f) = sum_lam (average of f over the Young subgroup of lam) M_lam``."""
    if v < f.n:
        raise ValueError(f"need at least n = {f.n} variables, got {v}")
    coeffs = {lam: young_subgroup_average(f, lam) for lam in partitions_list(f.n)}
    return from_monomial_basis(coeffs, v)


class StripMismatch(ArithmeticError):
    """The border-strip expansion disagreed with the direct product."""


def border_strip_product(k: int, mu: Partition, v: int, verify: bool = True) -> list[tuple[Partition, int]]:
    """Expand ``u_k S_mu`` as a signed sum of Schur polynomials.

    Each ``lam`` with ``lam / mu`` a border strip of size ``k`` enters with sign
    ``(-1)^(height + 1)``. With ``verify`` both sides are expanded as polynomials
    in ``v`` variables and compared.
    """
    mu = tuple(mu)
    if v < len(mu) + k:
        raise ValueError(f"need at least {len(mu) + k} variables")
    terms = [(r.diagram, (-1) ** (r.strip_height + 1)) for r in border_strips(mu, k)]
    if verify:
        lhs = power_sum(k, v) * schur(mu, v)
        rhs = zero(v)
        for lam, sign in terms:
            rhs = rhs + schur(lam, v) * sign
        if lhs != rhs:
            raise StripMismatch(f"u_{k} S_{mu} does not match its border-strip expansion")
    return terms
