"""Independent ground truths: class-sum brute force, exact diagonalization, Monte Carlo.

None of these use the closed-form machinery in :mod:`heisenberg_mf.meanfield`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import numpy as np
from scipy.linalg import eigh, expm

from . import repnum
from .meanfield.qpoly import QPoly
from .symfunc import ClassFunction
from .young import Partition, class_size, partitions_list

MAX_EXACT_N = 8
MATRIX_CHECK_MAX_N = 5
MATRIX_CHECK_TOL = 1e-10
MATRIX_CHECK_TIMES = (0.05, 0.2, 0.5, 1.0, 2.0)


def _check_small(n: int, upper: int = MAX_EXACT_N) -> None:
    if not 1 <= n <= upper:
        raise ValueError(f"oracle supports 1 <= n <= {upper}, got n={n}")


def cycle_type(perm) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


@dataclass
class HeatKernelClassFn:
    """Transition probabilities ``p_t(pi)`` from the identity, by cycle type of ``pi``."""

    n: int
    values: dict[Partition, QPoly]
    matrix_error: float | None = None  # max entrywise deviation from expm, when checked

    def at_t(self, t: float) -> dict[Partition, float]:
        return {p: v.at_t(t) for p, v in self.values.items()}

    def total(self) -> QPoly:
        out = QPoly()
        for p, v in self.values.items():
            out = out + v * class_size(p)
        return out


def _generator_matrix(n: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    Q = np.zeros((len(perms), len(perms)))
    for p, i in index.items():
        for a in range(n):
            for b in range(a + 1, n):
                # left multiplication by (a b) swaps the values a and b
                image = tuple(b if x == a else a if x == b else x for x in p)
                Q[i, index[image]] += 1.0
        Q[i, i] = -comb(n, 2)
    return perms, Q


def heat_kernel_matrix_error(kernel: HeatKernelClassFn, times=MATRIX_CHECK_TIMES) -> float:
    """Largest ``|expm(tQ)[id, pi] - p_t(pi)|`` over all ``pi`` and the given times."""
    perms, Q = _generator_matrix(kernel.n)
    types = [cycle_type(p) for p in perms]
    identity = perms.index(tuple(range(kernel.n)))
    worst = 0.0
    for t in times:
        row = expm(t * Q)[identity]
        exact = kernel.at_t(t)
        worst = max(worst, max(abs(row[i] - exact[c]) for i, c in enumerate(types)))
    return worst


def heat_kernel(n: int, check: bool = True) -> HeatKernelClassFn:
    """``p_t`` by Fourier inversion, ``sum_lam (d_lam/n!) chi_lam(pi) q^rho(lam)``.

    For ``n <= 5`` (with ``check``) the result is also compared with the
    exponential of the full ``n! x n!`` generator.
    """
    _check_small(n)
    shapes = partitions_list(n)
    # distinct shapes can share an eigenvalue, so terms are summed by QPoly
    values = {
        c: QPoly(
            (repnum.rho(lam), Fraction(repnum.dimension(lam) * repnum.character(lam, c), factorial(n)))
            for lam in shapes
        )
        for c in shapes
    }
    kernel = HeatKernelClassFn(n, values)
    if check and n <= MATRIX_CHECK_MAX_N:
        kernel.matrix_error = heat_kernel_matrix_error(kernel)
        if kernel.matrix_error > MATRIX_CHECK_TOL:
            raise ArithmeticError(
                f"heat kernel disagrees with the matrix exponential at n={n}: {kernel.matrix_error:.3e}"
            )
    return kernel


def class_expectation(f: ClassFunction, kernel: HeatKernelClassFn | None = None) -> QPoly:
    """``E f(pi(t)) = sum_type class_size * f(type) * p_t(type)``."""
    kernel = kernel or heat_kernel(f.n, check=False)
    out = QPoly()
    for c, value in f.values.items():
        if value:
            out = out + kernel.values[c] * (class_size(c) * value)
    return out


def brute_force_weighted(n: int, k: int) -> QPoly:
    """``E(alpha_k 2^alpha)`` from cycle-type class sums against the heat kernel."""
    _check_small(n)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    f = ClassFunction.from_rule(n, lambda c: c.count(k) * 2 ** len(c))
    return class_expectation(f)


def brute_force_partition_function(n: int) -> QPoly:
    _check_small(n)
    return class_expectation(ClassFunction.from_rule(n, lambda c: 2 ** len(c)))


def fourier_sum(f: ClassFunction, lam: Partition) -> Fraction:
    """``sum_pi f(pi) chi_lam(pi)`` over the whole group."""
    return sum(
        (class_size(c) * v * repnum.character(tuple(lam), c) for c, v in f.values.items()),
        Fraction(0),
    )


# exact diagonalization

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for s in range(n):
        out = np.kron(out, op if s == site else np.eye(2))
    return out


def heisenberg_hamiltonian(n: int) -> np.ndarray:
    """``-(1/4) sum_{i<j} (sx sx + sy sy + sz sz)`` on the complete graph, z basis."""
    _check_small(n)
    sites = {a: [_site_operator(_PAULI[a], s, n) for s in range(n)] for a in "xyz"}
    H = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            for a in "xyz":
                H -= 0.25 * sites[a][i] @ sites[a][j]
    assert np.allclose(H.imag, 0.0)
    return H.real


@dataclass(frozen=True)
class QuantumObservables:
    Z_q: float
    m2_q: float


def quantum_observables(n: int, beta: float) -> QuantumObservables:
    """``Tr exp(-beta H)`` and ``Tr(exp(-beta H) M^2) / Z_q`` with ``M = sum sz``."""
    if not 2 <= n <= MAX_EXACT_N:
        raise ValueError(f"need 2 <= n <= {MAX_EXACT_N}")
    energies, vectors = eigh(heisenberg_hamiltonian(n))
    states = np.arange(2**n)
    # bit s of the basis index is spin s; bit 0 means up
    mz = sum(1 - 2 * ((states >> s) & 1) for s in range(n)).astype(float)
    shift = energies.min()
    boltzmann = np.exp(-beta * (energies - shift))
    z_shifted = boltzmann.sum()
    m2 = float(boltzmann @ ((vectors**2).T @ mz**2) / z_shifted)
    return QuantumObservables(float(z_shifted * math.exp(-beta * shift)), m2)


def quantum_constant(n: int, beta: float) -> float:
    """``Z_q(beta) / Z(beta/2)``; from ``H = -(1/2) sum P_ij + C(n,2)/4``."""
    return math.exp(beta * n * (n - 1) / 8)


# Monte Carlo

MIN_SAMPLES = 10_000
N_BATCHES = 100
MAX_MC_N = 40
_CHUNK = 50_000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def z_score(self, reference: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == reference else math.copysign(math.inf, self.mean - reference)
        return (self.mean - reference) / self.std_error


@dataclass(frozen=True)
class McReport:
    n: int
    t: float
    Z: McEstimate
    m2: McEstimate
    fix: McEstimate
    weighted: dict[int, McEstimate] = field(default_factory=dict)  # k -> E(alpha_k 2^alpha)

    def items(self):
        yield "Z", self.Z
        for k, est in self.weighted.items():
            yield f"E(alpha_{k} 2^alpha)", est
        yield "m2", self.m2
        yield "fix", self.fix


def cycle_lengths(perms: np.ndarray) -> np.ndarray:
    """Length of the cycle through each entry, row-wise, by repeated composition."""
    rows, n = perms.shape
    cols = np.broadcast_to(np.arange(n), perms.shape)
    lengths = np.zeros(perms.shape, dtype=np.int64)
    cur = perms.copy()
    for m in range(1, n + 1):
        hit = (cur == cols) & (lengths == 0)
        lengths[hit] = m
        if m < n:
            cur = np.take_along_axis(perms, cur, axis=1)
    return lengths


def _simulate(n: int, t: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse permutations of ``size`` independent interchange runs to time ``t``."""
    counts = np.sort(rng.poisson(comb(n, 2) * t, size=size))[::-1]
    inv = np.tile(np.arange(n, dtype=np.int64), (size, 1))
    for step in range(int(counts[0]) if size else 0):
        m = int(np.count_nonzero(counts > step))
        i = rng.integers(0, n, size=m)
        j = rng.integers(0, n - 1, size=m)
        j += j >= i
        rows = np.arange(m)
        # (i j) o pi has inverse pi^-1 o (i j): swap entries i and j of the inverse
        a, b = inv[rows, i], inv[rows, j]
        inv[rows, i], inv[rows, j] = b, a
    return inv


def _replica(n: int, t: float, size: int, seed: int, replica: int, k_max: int) -> np.ndarray:
    """Per-replica sums of ``[2^alpha, alpha_k 2^alpha (k<=k_max), sum k^2 alpha_k 2^alpha, fix]``."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, replica])))
    sums = np.zeros(k_max + 3)
    done = 0
    while done < size:
        chunk = min(_CHUNK, size - done)
        lengths = cycle_lengths(_simulate(n, t, chunk, rng))
        alpha_k = np.stack([np.count_nonzero(lengths == k, axis=1) // k for k in range(1, n + 1)], axis=1)
        alpha = alpha_k.sum(axis=1)
        w = np.exp2(alpha.astype(float))
        ks = np.arange(1, n + 1)
        obs = np.column_stack(
            [w]
            + [alpha_k[:, k - 1] * w for k in range(1, k_max + 1)]
            + [(alpha_k * ks**2).sum(axis=1) * w, alpha_k[:, 0].astype(float)]
        )
        sums += obs.sum(axis=0)
        done += chunk
    return sums


def mc_interchange(
    n: int,
    t: float,
    num_samples: int,
    seed: int,
    k_max: int | None = None,
    threads: int = 1,
    batches: int = N_BATCHES,
) -> McReport:
    """Monte Carlo estimates of the weighted observables with batch-means errors.

    Each batch is a replica with its own Philox stream keyed by ``(seed, batch)``,
    so the result does not depend on ``threads``. ``k_max`` defaults to ``min(5, n)``.
    """
    if not 2 <= n <= MAX_MC_N:
        raise ValueError(f"need 2 <= n <= {MAX_MC_N}")
    if t < 0 or not math.isfinite(t):
        raise ValueError("t must be finite and nonnegative")
    if num_samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    if k_max is None:
        k_max = min(5, n)
    if not 1 <= k_max <= n:
        raise ValueError("need 1 <= k_max <= n")
    if batches < 30:
        raise ValueError("batch means need at least 30 batches")
    base, extra = divmod(num_samples, batches)
    sizes = [base + (1 if b < extra else 0) for b in range(batches)]

    def run(b: int) -> np.ndarray:
        return _replica(n, t, sizes[b], seed, b, k_max)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sums = list(pool.map(run, range(batches)))
    else:
        sums = [run(b) for b in range(batches)]
    sums = np.array(sums)
    means = sums / np.array(sizes)[:, None]
    totals = sums.sum(axis=0) / num_samples

    def plain(col: int) -> McEstimate:
        se = float(np.std(means[:, col], ddof=1) / math.sqrt(batches))
        return McEstimate(float(totals[col]), se, num_samples, seed)

    z = plain(0)
    weighted = {k: plain(k) for k in range(1, k_max + 1)}
    num, den = means[:, k_max + 1], means[:, 0]
    ratio = float(totals[k_max + 1] / totals[0])
    # delta method on the batch means of num - ratio * den
    se = float(np.std(num - ratio * den, ddof=1) / math.sqrt(batches) / z.mean)
    m2 = McEstimate(ratio, se, num_samples, seed)
    return McReport(n, t, z, m2, plain(k_max + 2), weighted)
