import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.special import logsumexp as scipy_logsumexp

from heisenberg_mf import meanfield as mf
from heisenberg_mf.meanfield import analysis, beta, exact, numeric
from heisenberg_mf.meanfield.logsigned import LogSigned, log1mexp, logsumexp, segment_logsumexp

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-6 or x == 0)


# LogSigned and helpers


@given(finite, finite)
def test_logsigned_matches_float_arithmetic(x, y):
    a, b = LogSigned.from_float(x), LogSigned.from_float(y)
    assert float(a + b) == pytest.approx(x + y, rel=1e-12, abs=1e-9 * max(abs(x), abs(y)))
    assert float(a - b) == pytest.approx(x - y, rel=1e-12, abs=1e-9 * max(abs(x), abs(y)))
    assert float(a * b) == pytest.approx(x * y, rel=1e-12)
    if y != 0:
        assert float(a / b) == pytest.approx(x / y, rel=1e-12)


def test_logsigned_huge_magnitudes():
    big, small = LogSigned.from_log(1e9), LogSigned.from_log(-1e9)
    assert (big * big).log_abs == 2e9
    assert (big + big).log_abs == pytest.approx(1e9 + math.log(2), rel=1e-15)
    assert (big - big).sign == 0
    assert (small / big).log_abs == -2e9
    assert (big + small).log_abs == 1e9


def test_logsigned_zero_and_sign():
    assert LogSigned.zero().sign == 0 and float(LogSigned.zero()) == 0.0
    assert LogSigned.from_float(-2.0).sign == -1
    with pytest.raises(ValueError):
        LogSigned(2, 0.0)
    with pytest.raises(ZeroDivisionError):
        LogSigned.from_float(1.0) / LogSigned.zero()


@given(st.lists(st.floats(min_value=-800, max_value=800), min_size=1, max_size=40))
def test_logsumexp_matches_scipy(values):
    assert logsumexp(np.array(values)) == pytest.approx(scipy_logsumexp(values), rel=1e-13, abs=1e-13)


def test_segment_logsumexp():
    values = np.array([0.0, 1.0, -np.inf, -np.inf, 5.0, 2.0, 3.0])
    starts = np.array([0, 2, 4])
    got = segment_logsumexp(values, starts)
    assert got[0] == pytest.approx(scipy_logsumexp([0.0, 1.0]))
    assert got[1] == -np.inf
    assert got[2] == pytest.approx(scipy_logsumexp([5.0, 2.0, 3.0]))


def test_log1mexp_both_ends():
    x = np.array([-1e-20, -1e-5, -0.5, -5.0, -50.0])
    with mpmath.workdps(60):
        expected = [float(mpmath.log(-mpmath.expm1(mpmath.mpf(v)))) for v in x]
    assert log1mexp(x) == pytest.approx(expected, rel=1e-14)


# incomplete beta


def _reference_log_upper(log_y, p, q):
    with mpmath.workdps(80):
        y = mpmath.exp(mpmath.mpf(log_y))
        # integral over [y, 1] as the lower integral of the mirrored beta on [0, 1 - y]
        return float(mpmath.log(mpmath.betainc(q, p, 0, 1 - y)))


def test_incomplete_beta_examples():
    assert float(mf.incomplete_beta_upper(math.log(0.5), 2, 1)) == pytest.approx(0.375, rel=1e-14)
    assert mf.incomplete_beta_upper(0.0, 3, 4).sign == 0
    assert float(mf.incomplete_beta_upper(-math.inf, 3.0, 4.0)) == pytest.approx(math.gamma(3) * math.gamma(4) / math.gamma(7), rel=1e-14)


@settings(max_examples=150, deadline=None)
@given(
    st.floats(min_value=1e-8, max_value=60.0),
    st.integers(min_value=1, max_value=3000),
    st.integers(min_value=1, max_value=3000),
)
def test_incomplete_beta_against_mpmath(minus_log_y, p, q):
    got = float(beta.log_upper_beta(-minus_log_y, p, q))
    ref = _reference_log_upper(-minus_log_y, p, q)
    # the log magnitude carries an absolute error of a few ulps of |log U|
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


def test_incomplete_beta_rejects_bad_arguments():
    with pytest.raises(ValueError):
        beta.log_upper_beta(0.1, 2, 2)
    with pytest.raises(ValueError):
        beta.log_upper_beta(-0.1, 0.5, 2)


def test_incomplete_beta_reports_nonconvergence(monkeypatch):
    monkeypatch.setattr(beta, "CF_MAX_ITER", 2)
    with pytest.raises(beta.BetaConvergenceError) as info:
        beta.log_upper_beta(-0.7, 400.0, 300.0)
    assert info.value.iterations == 2 and "x=" in str(info.value)


# float against exact


@pytest.mark.parametrize("t", [0.0, 0.03, 0.4, 2.5])
def test_psi_float_matches_exact_small_n(t):
    for n in range(1, 11):
        for k in range(1, n + 1):
            for b in range((n - k) // 2 + 1):
                ex = exact.psi_exact(n, b, k).at_t(t)
                fl = float(mf.psi(n, b, k, t, mode="float"))
                assert fl == pytest.approx(ex, rel=1e-11, abs=1e-300), (n, b, k)


@pytest.mark.parametrize("t", [0.02, 0.1, 0.3])
def test_psi_grid_matches_exact_n30(t):
    n = 30
    grid = numeric.psi_grid(n, t)
    for k, b, lp in zip(grid.k, grid.b, grid.log_psi):
        ex = exact.psi_exact(n, int(b), int(k))(mpmath_q(t))
        if ex == 0:
            assert lp == -math.inf
        else:
            assert lp == pytest.approx(math.log(ex), abs=1e-9)


def mpmath_q(t):
    from fractions import Fraction

    return Fraction(math.exp(-t))


def test_phi_float_examples():
    t = 0.7
    q3 = math.exp(-3 * t)
    assert float(mf.phi(3, 2, 0, 1, t, mode="float")) == pytest.approx(1 + 2 * q3, rel=1e-13)
    assert float(mf.phi(3, 1, 1, 1, t, mode="float")) == pytest.approx(2 * q3 + q3**2, rel=1e-13)
    assert float(mf.phi(3, 1, 0, 2, t, mode="float")) == pytest.approx(1 - q3**2, rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_weighted_float_matches_exact(n):
    for t in (0.05, 0.5):
        for k in range(1, n + 1):
            ex = exact.weighted_cycle_expectation_exact(n, k).at_t(t)
            assert float(mf.weighted_cycle_expectation(n, k, t, mode="float")) == pytest.approx(ex, rel=1e-11)


def test_partition_function_float_anchors():
    for t in (0.0, 0.3, 1.0):
        assert float(mf.partition_function(2, t, mode="float")) == pytest.approx(3 + math.exp(-2 * t), rel=1e-13)
        assert mf.magnetisation_sq(2, t, mode="float") == pytest.approx(8 / (3 + math.exp(-2 * t)), rel=1e-13)
    for n in (10, 100, 500):
        assert mf.partition_function(n, 0.0, mode="float").log_abs == pytest.approx(n * math.log(2), rel=1e-13)
        assert mf.magnetisation_sq(n, 0.0, mode="float") == pytest.approx(n, rel=1e-12)


def test_route_disagreement_is_raised(monkeypatch):
    monkeypatch.setattr(numeric, "ROUTE_REL_TOL", -1.0)
    with pytest.raises(mf.RouteDisagreement):
        mf.partition_function(20, 0.1, mode="float")


@pytest.mark.parametrize("tau", [0.5, 2.0, 3.5])
def test_mass_identity_float(tau):
    n = 200
    point = numeric.evaluate_point(n, tau / n)
    lhs = logsumexp(point.log_weighted + np.log(np.arange(1, n + 1)))
    assert abs(lhs - (math.log(n) + point.log_Z)) < 1e-9


@pytest.mark.parametrize("n", [50, 200])
def test_psi_positivity_and_clamps(n):
    rng = np.random.default_rng(5)
    for tau in rng.uniform(0.2, 4.0, size=5):
        grid = numeric.psi_grid(n, tau / n)
        assert grid.negative_count == 0
        assert grid.clamp_count < 1e-3 * grid.cell_count
        assert not np.any(np.isnan(grid.log_psi))


def test_useful_inequality_spot_check():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        k = int(rng.integers(1, 60))
        b = int(rng.integers(0, 60))
        a = int(rng.integers(b, b + 80))
        t = float(rng.uniform(1e-3, 0.5))
        log_y = -t * k
        lhs = (a + 1) * log_y + beta.log_upper_beta(log_y, b + 1, k)
        rhs = b * log_y + beta.log_upper_beta(log_y, a + 2, k)
        assert lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


# unweighted cycle counts and characters


def test_unweighted_examples():
    for n, t in [(5, 0.2), (12, 0.05)]:
        assert float(mf.unweighted_cycle_expectation(n, 1, t)) == pytest.approx(1 + (n - 1) * math.exp(-t * n), rel=1e-13)
    assert float(mf.unweighted_cycle_expectation(7, 1, 0.0)) == pytest.approx(7)
    assert mf.unweighted_cycle_expectation(7, 3, 0.0).sign == 0
    for k in (1, 2, 5):
        assert float(mf.unweighted_cycle_expectation(30, k, 60.0)) == pytest.approx(1 / k, rel=1e-12)


def test_unweighted_mass_identity():
    n = 50
    for t in np.linspace(0.0, 0.2, 11):
        total = sum(k * float(mf.unweighted_cycle_expectation(n, k, t)) for k in range(1, n + 1))
        assert total == pytest.approx(n, abs=1e-8)


def test_expected_character_float():
    t = 0.3
    assert float(mf.expected_character((6,), t, mode="float")) == pytest.approx(1.0)
    assert float(mf.expected_character((5, 1), t, mode="float")) == pytest.approx(5 * math.exp(-6 * t))
    assert float(mf.expected_character((1,) * 6, 100.0, mode="float")) < 1e-300


# residual magnetisation


def test_residual_float():
    for n, tau in [(40, 1.0), (300, 3.0)]:
        assert mf.residual_truncated(n, 0, tau / n) == 0.5
    assert mf.residual_truncated(20, 3, 0.0) == 0.0
    ex = exact.residual_truncated_exact(6, 2).at_t(0.2)
    assert mf.residual_truncated(6, 2, 0.2) == pytest.approx(ex, rel=1e-12)


# rate function


def test_beta_max_examples():
    assert mf.beta_max(1.5) == 0.5
    assert mf.beta_max(3.0) == pytest.approx(0.0707, abs=1e-3)
    assert mf.mu_fn(0.0, 2.0) == 0.0


@given(st.floats(min_value=0.1, max_value=10.0))
def test_beta_max_below_half_iff_supercritical(tau):
    assume(abs(tau - 2.0) > 0.01)
    assert (mf.beta_max(tau) < 0.5) == (tau > 2.0)


@given(st.floats(min_value=2.05, max_value=10.0))
def test_beta_max_is_stationary(tau):
    b = mf.beta_max(tau)
    # the derivative changes sign within the bisection tolerance
    assert analysis.mu_prime(b - 2 * analysis.BISECT_TOL, tau) * analysis.mu_prime(b + 2 * analysis.BISECT_TOL, tau) <= 0
    grid = np.linspace(1e-9, 0.5, 2001)
    assert mf.mu_fn(b, tau) <= min(mf.mu_fn(x, tau) for x in grid) + 1e-12


# curves and threads


def test_curve_is_thread_independent():
    taus = [0.5, 1.0, 2.0, 3.0]
    serial = mf.curve(150, taus, threads=1)
    parallel = mf.curve(150, taus, threads=4)
    assert serial == parallel
    assert [p.tau for p in serial] == sorted(taus)


def test_curve_exact_matches_float():
    for e, f in zip(mf.curve(6, [0.0, 1.0, 4.0], mode="exact"), mf.curve(6, [0.0, 1.0, 4.0])):
        assert e.m2 == pytest.approx(f.m2, rel=1e-12)
        assert e.log_Z == pytest.approx(f.log_Z, rel=1e-12, abs=1e-12)


def test_thread_count(monkeypatch):
    monkeypatch.setenv("MF_THREADS", "3")
    assert mf.thread_count() == 3
    assert mf.thread_count(2) == 2
    monkeypatch.delenv("MF_THREADS")
    assert mf.thread_count() >= 1
    monkeypatch.setenv("MF_THREADS", "0")
    with pytest.raises(ValueError):
        mf.thread_count()


def test_float_mode_needs_time():
    with pytest.raises(ValueError):
        mf.psi(5, 0, 1, None, mode="float")
    with pytest.raises(ValueError):
        mf.psi(5, 0, 1, 0.1, mode="fast")
