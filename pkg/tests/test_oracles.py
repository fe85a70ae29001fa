import math
from fractions import Fraction

import numpy as np
import pytest

from heisenberg_mf import meanfield as mf
from heisenberg_mf import oracles
from heisenberg_mf.meanfield.qpoly import QPoly
from heisenberg_mf.young import class_size, partitions_list


def Q(*pairs):
    return QPoly(dict(pairs))


def test_cycle_type():
    assert oracles.cycle_type((0, 1, 2)) == (1, 1, 1)
    assert oracles.cycle_type((1, 2, 0, 4, 3)) == (3, 2)


def test_heat_kernel_n2():
    kernel = oracles.heat_kernel(2)
    half = Fraction(1, 2)
    assert kernel.values[(1, 1)] == Q((0, half), (2, half))
    assert kernel.values[(2,)] == Q((0, half), (2, -half))


def test_heat_kernel_n3():
    assert oracles.heat_kernel(3).values[(1, 1, 1)] == Q((0, Fraction(1, 6)), (3, Fraction(2, 3)), (6, Fraction(1, 6)))


@pytest.mark.parametrize("n", range(1, 9))
def test_heat_kernel_normalised_and_starts_at_identity(n):
    kernel = oracles.heat_kernel(n, check=False)
    assert kernel.total() == QPoly.constant(1)
    for c, value in kernel.values.items():
        assert value(1) == (1 if c == (1,) * n else 0)


@pytest.mark.parametrize("n", range(2, 6))
def test_heat_kernel_matches_matrix_exponential(n):
    kernel = oracles.heat_kernel(n)
    assert kernel.matrix_error is not None and kernel.matrix_error < oracles.MATRIX_CHECK_TOL


def test_oracles_reject_large_n():
    with pytest.raises(ValueError):
        oracles.heat_kernel(9)
    with pytest.raises(ValueError):
        oracles.brute_force_weighted(9, 1)
    with pytest.raises(ValueError):
        oracles.quantum_observables(9, 1.0)


def test_brute_force_examples():
    assert oracles.brute_force_weighted(3, 1) == Q((0, 6), (3, 16), (6, 2))
    assert oracles.brute_force_weighted(3, 3) == Q((0, 1), (3, -2), (6, 1)) * Fraction(2, 3)
    for n in range(1, 8):
        for k in range(1, n + 1):
            assert oracles.brute_force_weighted(n, k)(1) == (n * 2**n if k == 1 else 0)


@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 2.5])
def test_quantum_n2_closed_forms(beta):
    obs = oracles.quantum_observables(2, beta)
    assert obs.Z_q == pytest.approx(3 * math.exp(beta / 4) + math.exp(-3 * beta / 4), rel=1e-13)
    assert obs.m2_q == pytest.approx(8 / (3 + math.exp(-beta)), rel=1e-13)


@pytest.mark.parametrize("n", range(2, 8))
def test_quantum_infinite_temperature(n):
    obs = oracles.quantum_observables(n, 0.0)
    assert obs.Z_q == pytest.approx(2**n, rel=1e-13)
    assert obs.m2_q == pytest.approx(n, rel=1e-12)


def test_hamiltonian_is_real_symmetric_and_conserves_mz():
    H = oracles.heisenberg_hamiltonian(4)
    assert np.allclose(H, H.T)
    states = np.arange(16)
    mz = sum(1 - 2 * ((states >> s) & 1) for s in range(4))
    rows, cols = np.nonzero(np.abs(H) > 1e-14)
    assert np.all(mz[rows] == mz[cols])


@pytest.mark.parametrize("n", [3, 4])
def test_quantum_correspondence_smoke(n):
    for beta in (0.1, 1.0):
        obs = oracles.quantum_observables(n, beta)
        t = beta / 2
        assert obs.m2_q == pytest.approx(float(mf.magnetisation_sq(n)(math.exp(-t))), rel=1e-8)
        ratio = obs.Z_q / float(mf.partition_function(n)(math.exp(-t)))
        assert ratio == pytest.approx(oracles.quantum_constant(n, beta), rel=1e-8)


def test_fourier_sum_of_trivial_function():
    from heisenberg_mf.symfunc import ClassFunction

    one = ClassFunction.from_rule(4, lambda c: 1)
    assert oracles.fourier_sum(one, (4,)) == 24
    assert oracles.fourier_sum(one, (3, 1)) == 0


def test_cycle_lengths():
    perms = np.array([[1, 2, 0, 4, 3], [0, 1, 2, 3, 4]])
    assert oracles.cycle_lengths(perms).tolist() == [[3, 3, 3, 2, 2], [1, 1, 1, 1, 1]]


def test_mc_fixed_points_n2():
    report = oracles.mc_interchange(2, 1.0, 20_000, seed=3)
    assert abs(report.fix.z_score(1 + math.exp(-2))) < 3
    assert report.fix.std_error > 0


def test_mc_time_zero_is_deterministic():
    report = oracles.mc_interchange(6, 0.0, 10_000, seed=1)
    assert report.Z.mean == 64 and report.Z.std_error == 0
    assert report.m2.mean == 6 and report.m2.std_error == 0
    assert report.weighted[1].mean == 6 * 64


def test_mc_is_reproducible_and_thread_independent():
    a = oracles.mc_interchange(8, 0.2, 10_000, seed=11, threads=1)
    b = oracles.mc_interchange(8, 0.2, 10_000, seed=11, threads=4)
    c = oracles.mc_interchange(8, 0.2, 10_000, seed=12)
    assert a == b
    assert a.Z.mean != c.Z.mean


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=1, t=1.0, num_samples=10_000),
        dict(n=41, t=1.0, num_samples=10_000),
        dict(n=5, t=-1.0, num_samples=10_000),
        dict(n=5, t=math.inf, num_samples=10_000),
        dict(n=5, t=1.0, num_samples=9_999),
        dict(n=5, t=1.0, num_samples=10_000, k_max=6),
        dict(n=5, t=1.0, num_samples=10_000, batches=10),
    ],
)
def test_mc_rejects_degenerate_parameters(kwargs):
    with pytest.raises(ValueError):
        oracles.mc_interchange(seed=0, **kwargs)


def test_mc_fix_matches_expected_character():
    n, t = 7, 0.1
    report = oracles.mc_interchange(n, t, 50_000, seed=5)
    fix = 1 + float(mf.expected_character((n - 1, 1), t, mode="float"))
    assert abs(report.fix.z_score(fix)) < 3


def test_mc_small_n_against_formula():
    n, t = 6, 0.2
    report = oracles.mc_interchange(n, t, 50_000, seed=9, k_max=3)
    q = math.exp(-t)
    assert abs(report.Z.z_score(float(mf.partition_function(n)(q)))) < 3
    assert abs(report.m2.z_score(float(mf.magnetisation_sq(n)(q)))) < 3
    for k, est in report.weighted.items():
        assert abs(est.z_score(float(mf.weighted_cycle_expectation(n, k)(q)))) < 3


def test_class_expectation_of_constant_is_one():
    from heisenberg_mf.symfunc import ClassFunction

    one = ClassFunction.from_rule(5, lambda c: 1)
    assert oracles.class_expectation(one) == QPoly.constant(1)
    assert sum(class_size(c) for c in partitions_list(5)) == 120
