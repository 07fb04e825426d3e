import itertools
import math
import time

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import stats

from hostpool import ThreadPool
from hostpool.errors import AllTied, DegenerateSample, LengthMismatch
from hostpool.kernels import (
    kde_gauss,
    kendall_matrix,
    kendall_tau_brute,
    kendall_tau_knight,
    silverman_bandwidth,
)


def tau_b_by_hand(x, y):
    """Plain enumeration of all pairs; shares no code with the library."""
    n = len(x)
    s = tx = ty = 0
    for i, j in itertools.combinations(range(n), 2):
        dx = (x[i] > x[j]) - (x[i] < x[j])
        dy = (y[i] > y[j]) - (y[i] < y[j])
        s += dx * dy
        tx += dx == 0
        ty += dy == 0
    n0 = n * (n - 1) // 2
    return s / math.sqrt((n0 - tx) * (n0 - ty))


# -- Kendall's tau ------------------------------------------------------------


@pytest.mark.parametrize("tau", [kendall_tau_brute, kendall_tau_knight])
def test_small_examples(tau):
    assert tau([1, 2, 3], [1, 2, 3]) == 1.0
    assert tau([1, 2, 3], [3, 2, 1]) == -1.0
    assert tau([1, 2, 3, 4], [2, 1, 4, 3]) == pytest.approx(1 / 3, abs=1e-15)


def test_hand_enumeration_of_worked_example():
    # pairs of (1,2,3,4) vs (2,1,4,3): only (1,2) and (3,4) are discordant
    assert tau_b_by_hand([1, 2, 3, 4], [2, 1, 4, 3]) == pytest.approx(1 / 3)


@pytest.mark.parametrize("n", [2, 3, 10, 257, 1000])
def test_identity_and_reversal(n):
    x = np.arange(n, dtype=float)
    assert kendall_tau_knight(x, x) == 1.0
    assert kendall_tau_knight(x, x[::-1]) == -1.0


def test_brute_matches_hand_and_scipy():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 40))
        x = rng.integers(0, 4, n).astype(float)
        y = rng.integers(0, 4, n).astype(float)
        if len(set(x)) == 1 or len(set(y)) == 1:
            continue
        want = tau_b_by_hand(x.tolist(), y.tolist())
        assert kendall_tau_brute(x, y) == pytest.approx(want, abs=1e-12)
        assert stats.kendalltau(x, y).statistic == pytest.approx(want, abs=1e-12)


def test_knight_equals_brute_on_tie_heavy_samples():
    rng = np.random.default_rng(1966)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(2, 201))
        alphabet = int(rng.integers(2, 8))
        x = rng.integers(0, alphabet, n).astype(float)
        y = rng.integers(0, alphabet, n).astype(float)
        try:
            want = kendall_tau_brute(x, y)
        except AllTied:
            with pytest.raises(AllTied):
                kendall_tau_knight(x, y)
            continue
        assert abs(kendall_tau_knight(x, y) - want) < 1e-12
        checked += 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.floats(-5, 5, allow_nan=False)),
                min_size=2, max_size=60))
def test_knight_equals_brute_property(pairs):
    x = [float(a) for a, _ in pairs]
    y = [b for _, b in pairs]
    try:
        want = kendall_tau_brute(x, y)
    except AllTied:
        with pytest.raises(AllTied):
            kendall_tau_knight(x, y)
        return
    assert abs(kendall_tau_knight(x, y) - want) < 1e-12


def test_knight_does_not_touch_inputs():
    x = np.array([3.0, 1.0, 2.0])
    y = np.array([1.0, 3.0, 2.0])
    kendall_tau_knight(x, y)
    assert x.tolist() == [3.0, 1.0, 2.0] and y.tolist() == [1.0, 3.0, 2.0]


def test_tau_errors():
    with pytest.raises(LengthMismatch):
        kendall_tau_knight([1, 2, 3], [1, 2])
    with pytest.raises(AllTied):
        kendall_tau_knight([1, 1, 1], [1, 2, 3])
    with pytest.raises(AllTied):
        kendall_tau_brute([1, 2, 3], [5, 5, 5])
    with pytest.raises(ValueError):
        kendall_tau_knight([1], [1])
    with pytest.raises(ValueError):
        kendall_tau_knight([1, np.nan], [1, 2])


def test_knight_is_subquadratic():
    rng = np.random.default_rng(3)
    kendall_tau_knight(rng.random(10), rng.random(10))  # compile
    times = {}
    for n in (10**3, 10**4, 10**5):
        x, y = rng.random(n), rng.random(n)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            kendall_tau_knight(x, y)
            best = min(best, time.perf_counter() - t0)
        times[n] = best
    assert times[10**5] < 1.0
    assert times[10**4] / times[10**3] < 30
    assert times[10**5] / times[10**4] < 30


# -- correlation matrix -------------------------------------------------------


def test_matrix_two_variables():
    rng = np.random.default_rng(0)
    data = rng.standard_normal((2, 50))
    m = kendall_matrix(data)
    tau = kendall_tau_knight(data[0], data[1])
    assert np.array_equal(m, [[1.0, tau], [tau, 1.0]])


def test_matrix_of_independent_noise():
    rng = np.random.default_rng(11)
    data = rng.standard_normal((6, 1000))
    m = kendall_matrix(data)
    off = m[~np.eye(6, dtype=bool)]
    assert np.all(np.abs(off) < 0.08)
    assert np.array_equal(m, m.T) and np.all(np.diag(m) == 1.0)


@pytest.mark.parametrize("workers", [0, 1, 3])
@pytest.mark.parametrize("batches", [None, 1, 7])
def test_matrix_parallel_equals_sequential(host, workers, batches):
    rng = np.random.default_rng(5)
    data = rng.integers(0, 10, (9, 120)).astype(float)
    want = np.ones((9, 9))
    for i in range(9):
        for j in range(9):
            if i != j:
                want[i, j] = kendall_tau_brute(data[i], data[j])
    pool = ThreadPool(workers)
    got = kendall_matrix(data, pool, n_batches=batches)
    pool.join()
    assert np.allclose(got, want, atol=1e-12, rtol=0)
    assert np.array_equal(got, kendall_matrix(data))


# -- kernel density -----------------------------------------------------------


def test_single_point_peak():
    est = kde_gauss([0.0], bandwidth=1.0)
    k = np.argmin(np.abs(est.grid))
    assert est.density[k] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-4)
    assert est.grid[0] == -3.0 and est.grid[-1] == 3.0
    assert len(est.grid) == 500


def test_matches_scipy_gaussian_kde():
    rng = np.random.default_rng(2)
    x = rng.gamma(2.0, size=300)
    est = kde_gauss(x)
    ref = stats.gaussian_kde(x, bw_method=est.bandwidth / np.std(x, ddof=1))
    assert np.allclose(est.density, ref(est.grid), rtol=1e-10, atol=1e-14)


def test_silverman_rule():
    x = np.array([1.0, 2.0, 4.0, 7.0, 11.0])
    sd = np.std(x, ddof=1)
    iqr = 7.0 - 2.0
    assert silverman_bandwidth(x) == pytest.approx(0.9 * min(sd, iqr / 1.349) * 5 ** -0.2)
    # zero IQR falls back to the standard deviation
    y = np.array([0.0] * 10 + [1.0])
    assert silverman_bandwidth(y) == pytest.approx(0.9 * np.std(y, ddof=1) * 11 ** -0.2)


def test_monte_carlo_normal():
    x = np.random.default_rng(42).standard_normal(10**5)
    est = kde_gauss(x)
    phi = np.exp(-est.grid ** 2 / 2) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(est.density - phi)) < 0.05


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-10**5, 10**5), min_size=2, max_size=200, unique=True))
def test_density_properties(values):
    est = kde_gauss(np.array(values) / 100.0)
    assert np.all(est.density >= 0)
    # the trapezoid rule is only meaningful once the grid resolves the kernel
    assume(est.grid[1] - est.grid[0] <= est.bandwidth)
    assert 0.9 <= est.integral() <= 1.0

def test_density_permutation_invariant():
    values = np.random.default_rng(8).standard_cauchy(300)
    est = kde_gauss(values)
    perm = np.random.default_rng(0).permutation(values)
    assert np.allclose(kde_gauss(perm).density, est.density, rtol=1e-12, atol=0)


def test_degenerate_and_invalid():
    with pytest.raises(DegenerateSample):
        kde_gauss([2.0, 2.0, 2.0])
    with pytest.raises(DegenerateSample):
        kde_gauss([2.0])
    with pytest.raises(ValueError):
        kde_gauss([1.0, 2.0], bandwidth=0.0)
    with pytest.raises(ValueError):
        kde_gauss([])
