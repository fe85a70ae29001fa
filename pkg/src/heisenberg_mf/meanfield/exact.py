"""Exact polynomial forms of the mean-field expectations.

Every quantity here is a :class:`QPoly` in ``q = exp(-t)``. The incomplete
beta integrals become polynomials in ``y = q^k`` after binomial expansion:
``int_y^1 x^(p-1)(1-x)^(k-1) dx = sum_j C(k-1,j) (-1)^j (1 - y^(p+j)) / (p+j)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .. import repnum
from ..young import two_row, two_row_partitions
from .qpoly import QPoly, QRatio, ypoly_binomial, ypoly_mul, ypoly_to_q


class RouteDisagreement(ArithmeticError):
    """Two independent routes to the same quantity disagree."""


def _upper_integral_y(p: int, k: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for j in range(k):
        c = Fraction(comb(k - 1, j) * (-1) ** j, p + j)
        out[0] = out.get(0, Fraction(0)) + c
        out[p + j] = out.get(p + j, Fraction(0)) - c
    return out


def _check_cell(n: int, a: int, b: int, k: int) -> None:
    if k < 1 or b < 0 or a < b or a + b != n - k:
        raise ValueError(f"need a >= b >= 0, a + b = n - k, k >= 1 (n={n}, a={a}, b={b}, k={k})")


def phi_exact(n: int, a: int, b: int, k: int) -> QPoly:
    _check_cell(n, a, b, k)
    if b == 0:
        bracket = ypoly_mul({n - k + 1: Fraction(1)}, ypoly_binomial(k - 1))
        for e, c in _upper_integral_y(n - k + 1, k).items():
            bracket[e] = bracket.get(e, Fraction(0)) + k * c
        return ypoly_to_q(bracket, k) * comb(n, k)

    multinom = factorial(n) // (factorial(k - 1) * factorial(a + 1) * factorial(b))
    bracket = {
        e: c * Fraction(a + 1 - b, k)
        for e, c in ypoly_mul({a + b + 2: Fraction(1)}, ypoly_binomial(k - 1)).items()
    }
    second = ypoly_mul({b: Fraction(a + 1 - b + k)}, _upper_integral_y(a + 2, k))
    third = ypoly_mul({a + 1: Fraction(a + 1 - b - k)}, _upper_integral_y(b + 1, k))
    for part in (second, third):
        for e, c in part.items():
            bracket[e] = bracket.get(e, Fraction(0)) + c
    return ypoly_to_q(bracket, k).shift(a * b + b) * multinom


def psi_exact(n: int, b: int, k: int) -> QPoly:
    if not (1 <= k <= n and 0 <= b <= (n - k) // 2):
        raise ValueError(f"out of range: n={n}, b={b}, k={k}")
    a = n - k - b
    return phi_exact(n, a, b, k) * (a + 1 - b)


def tau_spectral(mu: tuple[int, int], k: int) -> QPoly:
    """``sum_i D(mu, k, i) q^rho_i`` over the starting rows of the wrapped strip."""
    a, b = mu
    shape = two_row(a, b)
    out = QPoly()
    for i in range(1, k + 3):
        d = repnum.signed_dimension(mu, k, i)
        if d:
            out = out + QPoly.monomial(repnum.rho_shifted(shape, k, i), d)
    return out


def weighted_cycle_expectation_exact(n: int, k: int) -> QPoly:
    """``E(alpha_k 2^alpha)`` through the closed form."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    total = QPoly()
    for b in range((n - k) // 2 + 1):
        total = total + psi_exact(n, b, k)
    return total * Fraction(2, k)


def weighted_cycle_expectation_spectral(n: int, k: int) -> QPoly:
    """``E(alpha_k 2^alpha)`` through signed dimensions and shifted eigenvalues."""
    total = QPoly()
    for a, b in two_row_partitions(n - k):
        total = total + tau_spectral((a, b), k) * (a - b + 1)
    return total * Fraction(2, k)


def partition_function_spectral(n: int) -> QPoly:
    return QPoly(
        {
            repnum.rho((a, b) if b else (a,)): (a - b + 1) * repnum.dimension(two_row(a, b))
            for a, b in two_row_partitions(n)
        }
    )


def partition_function_exact(n: int) -> QPoly:
    """``Z`` by the spectral sum, cross-checked against ``(2/n) sum psi``."""
    if n < 1:
        raise ValueError("n must be positive")
    spectral = partition_function_spectral(n)
    via_psi = QPoly()
    for k in range(1, n + 1):
        for b in range((n - k) // 2 + 1):
            via_psi = via_psi + psi_exact(n, b, k)
    via_psi = via_psi * Fraction(2, n)
    if spectral != via_psi:
        raise RouteDisagreement(f"Z routes differ at n={n}: {spectral} vs {via_psi}")
    return spectral


def magnetisation_sq_exact(n: int) -> QRatio:
    num, den = QPoly(), QPoly()
    for k in range(1, n + 1):
        for b in range((n - k) // 2 + 1):
            p = psi_exact(n, b, k)
            num = num + p * k
            den = den + p
    return QRatio(num * n, den)


def residual_truncated_exact(n: int, M: int) -> QRatio:
    """``(1/2)(1/Z) sum_{k>M} (k/n) E(alpha_k 2^alpha)`` as ``num / den``."""
    if not 0 <= M < n:
        raise ValueError("need 0 <= M < n")
    num = QPoly()
    for k in range(M + 1, n + 1):
        num = num + weighted_cycle_expectation_exact(n, k) * k
    return QRatio(num, partition_function_exact(n) * (2 * n))


def expected_character_exact(lam) -> QPoly:
    return QPoly.monomial(repnum.rho(tuple(lam)), repnum.dimension(tuple(lam)))
