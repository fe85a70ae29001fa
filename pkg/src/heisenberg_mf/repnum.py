"""Exact representation-theoretic numbers for the symmetric group.

Dimensions and Laplacian eigenvalues are written in terms of first-column
hook numbers; the Fourier coefficients of ``alpha_k 2^alpha`` are sums over
two-row shapes sitting under a border strip. Characters come from the
Murnaghan-Nakayama rule on beta-sets and serve as an independent check.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from .young import (
    Partition,
    content_sum,
    f_shift,
    hook_numbers,
    is_border_strip,
    skew_height,
    two_row,
    two_row_partitions,
    wrap,
)


def hook_product(shape) -> Fraction:
    """``n! / prod(h_t!) * prod_{t<s} (h_t - h_s)`` over the hook numbers of a pre-diagram.

    Equals the dimension for a Young diagram; for a general pre-diagram it is
    plus or minus the dimension of its wrapped form, or zero on a hook collision.
    """
    n = sum(shape)
    h = hook_numbers(shape)
    num = factorial(n) * prod(h[t] - h[s] for t in range(len(h)) for s in range(t + 1, len(h)))
    return Fraction(num, prod(factorial(x) for x in h))


def dimension(lam: Partition) -> int:
    d = hook_product(lam)
    assert d.denominator == 1 and d > 0, lam
    return d.numerator


def rho(lam: Partition) -> int:
    """Eigenvalue of the complete-graph Laplacian on the irreducible ``lam``."""
    n = sum(lam)
    return comb(n, 2) + content_sum(lam)


def rho_shifted(mu: Partition, k: int, i: int) -> int:
    """``rho`` of the wrapped ``f_shift(mu, k, i)``, from ``mu`` alone.

    Content sums are invariant under wrapping moves, so the formula holds for any
    ``i``; when the wrap is not a Young diagram the value is only a placeholder.
    """
    n = sum(mu) + k
    mu_i = mu[i - 1] if i <= len(mu) else 0
    twice = 2 * (comb(n, 2) + content_sum(mu)) + k * (2 * i - 2 * mu_i - k - 1)
    assert twice % 2 == 0
    return twice // 2


def _two_row_prediagram(a: int, b: int, k: int, i: int) -> tuple[int, ...] | None:
    mu = two_row(a, b)
    if i > len(mu) + k:
        # only reachable when b == 0 and i == k + 2; the hook product vanishes there
        return None
    return f_shift(mu, k, i)


def signed_dimension(mu: tuple[int, int], k: int, i: int) -> Fraction:
    """``D(mu, k, i)`` for a two-row ``mu = (a, b)`` via the hook-product formula."""
    a, b = mu
    if not (a >= b >= 0 and k >= 1 and 1 <= i <= k + 2):
        raise ValueError(f"bad arguments mu={mu} k={k} i={i}")
    gamma = _two_row_prediagram(a, b, k, i)
    if gamma is None:
        return Fraction(0)
    return hook_product(gamma)


def signed_dimension_by_wrap(mu: tuple[int, int], k: int, i: int) -> int:
    """Same quantity: wrap, then sign the dimension by the strip height."""
    a, b = mu
    gamma = _two_row_prediagram(a, b, k, i)
    if gamma is None:
        return 0
    w = wrap(gamma)
    if not w.is_young:
        return 0
    height = skew_height(w.final, two_row(a, b))
    return (-1) ** (height + 1) * dimension(w.final)


def signed_dimension_closed(mu: tuple[int, int], k: int, i: int) -> Fraction:
    """Closed forms for ``D``: separate expressions for ``i = 1, 2`` and ``i > 2``."""
    a, b = mu
    n = a + b + k
    if i == 1:
        return Fraction(factorial(n) * (a + k + 1 - b), factorial(a + k + 1) * factorial(b))
    if i == 2:
        return Fraction(factorial(n) * (a + 1 - b - k), factorial(a + 1) * factorial(b + k))
    multinom = factorial(n) // (factorial(k - 1) * factorial(a + 1) * factorial(b))
    return (
        Fraction(a + 1 - b, k)
        * multinom
        * (-1) ** (i + 1)
        * comb(k - 1, i - 3)
        * Fraction((a + i - 1 - k) * (b + i - 2 - k), (a + i - 1) * (b + i - 2))
    )


def a_coeff(lam: Partition, k: int) -> Fraction:
    """Fourier coefficient of ``alpha_k 2^alpha`` at ``lam`` (scalar part).

    Sums over every two-row ``[a, b]`` of size ``n - k`` whose complement in
    ``lam`` is a border strip. More than one shape can qualify, e.g. ``lam = [2, 1]``
    with ``k = 1`` admits both ``[2]`` and ``[1, 1]``.
    """
    n = sum(lam)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    total = 0
    for a, b in two_row_partitions(n - k):
        mu = two_row(a, b)
        if is_border_strip(lam, mu):
            total += (a - b + 1) * (-1) ** (skew_height(lam, mu) + 1)
    return Fraction(2 * total, k)


def _beta_set(lam: Partition, length: int) -> tuple[int, ...]:
    return tuple(
        (lam[i] if i < len(lam) else 0) + length - 1 - i for i in range(length)
    )


def _from_beta(beta: tuple[int, ...]) -> Partition:
    length = len(beta)
    rows = sorted(beta, reverse=True)
    return tuple(x for x in (rows[i] - (length - 1 - i) for i in range(length)) if x > 0)


@lru_cache(maxsize=None)
def character(lam: Partition, cycle_type: Partition) -> int:
    """Irreducible character ``chi_lam`` on the class ``cycle_type`` (Murnaghan-Nakayama)."""
    lam, cycle_type = tuple(lam), tuple(sorted(cycle_type, reverse=True))
    if sum(lam) != sum(cycle_type):
        raise ValueError("size mismatch")
    if not cycle_type:
        return 1
    k, rest = cycle_type[0], cycle_type[1:]
    beta = _beta_set(lam, len(lam))
    members = set(beta)
    total = 0
    for x in beta:
        y = x - k
        if y < 0 or y in members:
            continue
        # leg length of the removed rim hook = beta numbers strictly between y and x
        sign = (-1) ** sum(1 for z in beta if y < z < x)
        new_beta = tuple(y if z == x else z for z in beta)
        total += sign * character(_from_beta(new_beta), rest)
    return total
