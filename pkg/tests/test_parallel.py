import threading

import pytest
from hypothesis import given, settings, strategies as st

from hostpool import host_sync, parallel_for, parallel_for_each
from hostpool.errors import Interrupted, TaskFailed
from hostpool.parallel import BatchPlan, auto_batch_count, make_plan


def test_auto_batch_count_examples():
    assert auto_batch_count(100, 4) == 32
    assert auto_batch_count(3, 4) == 3
    assert auto_batch_count(0, 4) == 1
    assert auto_batch_count(10, 0) == 8


@given(st.integers(0, 10**6), st.integers(0, 256))
def test_auto_batch_count_bounds(n, w):
    k = auto_batch_count(n, w)
    assert 1 <= k <= max(1, n)
    assert k == auto_batch_count(n, w)


def _check_plan(plan: BatchPlan, begin, end):
    assert plan.boundaries[0] == begin and plan.boundaries[-1] == end
    assert len(plan.boundaries) == plan.n_batches + 1
    assert 1 <= plan.n_batches <= max(1, end - begin)
    covered = [i for lo, hi in plan.ranges() for i in range(lo, hi)]
    assert covered == list(range(begin, end))
    sizes = [hi - lo for lo, hi in plan.ranges()]
    if sizes:
        assert max(sizes) - min(sizes) <= 1


@settings(max_examples=10_000, deadline=None)
@given(st.integers(-1000, 1000), st.integers(0, 1000), st.integers(1, 2000))
def test_plan_partitions_range(begin, length, n_batches):
    plan = make_plan(begin, begin + length, n_batches)
    _check_plan(plan, begin, begin + length)
    assert plan == make_plan(begin, begin + length, n_batches)


def test_plan_rejects_bad_input():
    with pytest.raises(ValueError):
        make_plan(5, 4, 1)
    with pytest.raises(ValueError):
        make_plan(0, 4, 0)


def test_fill_vector(host):
    x = [None] * 100
    parallel_for(0, 100, lambda i: x.__setitem__(i, i))
    assert x == list(range(100))


def test_empty_range_never_calls(host):
    calls = []
    parallel_for(5, 5, calls.append)
    assert calls == []


def test_negative_bounds(host):
    seen = []
    lock = threading.Lock()

    def body(i):
        with lock:
            seen.append(i)

    parallel_for(-10, 3, body, n_workers=2)
    assert sorted(seen) == list(range(-10, 3))


def test_two_workers_twenty_batches(host):
    x = list(range(1000))
    parallel_for(0, 1000, lambda i: x.__setitem__(i, x[i] + 1), n_workers=2, n_batches=20)
    assert x == [i + 1 for i in range(1000)]


def test_for_each_doubles(host):
    x = [1] * 100
    parallel_for_each(x, lambda v: v * 2)
    assert x == [2] * 100


def test_for_each_empty(host):
    calls = []
    parallel_for_each([], calls.append)
    assert calls == []


def test_for_each_mutable_elements(host):
    rows = [[i] for i in range(50)]
    parallel_for_each(rows, lambda r: r.append(r[0] ** 2), n_workers=3, n_batches=7)
    assert rows == [[i, i * i] for i in range(50)]


def test_for_each_matches_sequential(host):
    import numpy as np

    x = np.arange(200, dtype=float)
    expected = np.sin(x) * x
    parallel_for_each(x, lambda v: np.sin(v) * v, n_workers=2)
    assert np.array_equal(x, expected)


@settings(max_examples=40, deadline=None)
@given(st.integers(-50, 50), st.integers(0, 300), st.sampled_from([0, 1, 2, 8]),
       st.sampled_from(["one", "auto", "n"]))
def test_matches_sequential_loop(begin, length, workers, batches):
    host_sync.init_host()
    end = begin + length
    n_batches = {"one": 1, "auto": None, "n": max(length, 1)}[batches]
    out = {}
    parallel_for(begin, end, lambda i: out.__setitem__(i, 3 * i * i - i), workers, n_batches)
    assert out == {i: 3 * i * i - i for i in range(begin, end)}


def test_body_error_propagates(host):
    def body(i):
        if i == 7:
            raise RuntimeError("seven")

    with pytest.raises(TaskFailed):
        parallel_for(0, 100, body, n_workers=2)


def test_interrupt_propagates(host):
    def body(i):
        if i == 0:
            host.trigger.fire()
        host_sync.check_interrupt()

    with pytest.raises(Interrupted):
        parallel_for(0, 50, body, n_workers=0)
