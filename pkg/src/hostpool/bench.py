"""Benchmark harness: overhead and throughput of the package's schedulers.

Workloads
---------
empty_jobs       no-op jobs: sequential loop vs pool pushes vs parallel_for
thread_spawn     start + join of k threads: raw ``threading.Thread`` vs GuestThread
interrupt_check  cost of one ``check_interrupt`` call on the host vs a child
kde              Gaussian KDE of d variables: sequential vs pool vs parallel_for
kendall          Kendall correlation matrix: sequential vs pool vs parallel_for

Every run is timed ``reps`` times after one discarded warm-up; the median
and minimum go to a CSV.  For ``kde`` and ``kendall`` the parallel output is
compared with the sequential one first and the benchmark aborts with
:class:`OutputMismatch` if they differ.

Command line::

    bench kde --sizes 1000,10000 --dims 10,100 --workers 1,4 --reps 5 --out kde.csv

The default worker grid is the core count, overridable through the
``HOSTPOOL_WORKERS`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import logging
import os
import statistics
import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import host_sync
from .errors import Interrupted, OutputMismatch
from .kernels import kde_gauss, kendall_matrix, kendall_row
from .parallel import parallel_for
from .pool import ThreadPool, default_workers
from .thread import GuestThread

log = logging.getLogger(__name__)

WORKLOADS = ("empty_jobs", "thread_spawn", "interrupt_check", "kde", "kendall")
CSV_FIELDS = ("workload", "scheduler", "n", "d", "workers", "batches", "reps",
              "nanos_median", "nanos_min", "seed")
RNG_NAME = "numpy.random.PCG64"
WORKERS_ENV = "HOSTPOOL_WORKERS"

DEFAULT_SIZES = {
    "empty_jobs": [100, 1_000, 10_000],
    "thread_spawn": [1, 2, 4, 8, 16],
    "interrupt_check": [100_000],
    "kde": [100, 1_000, 10_000],
    "kendall": [100, 500, 1_000],
}
DEFAULT_DIMS = {"kde": [10], "kendall": [10]}


@dataclass(frozen=True)
class BenchRecord:
    """One CSV row.  ``workers`` and ``batches`` are 0 where they do not apply
    (sequential runs; ``batches`` 0 also means the automatic batch count)."""

    workload: str
    scheduler: str
    n: int
    d: int
    workers: int
    batches: int
    reps: int
    nanos_median: int
    nanos_min: int
    seed: int

    def row(self) -> dict:
        return dataclasses.asdict(self)


def env_workers() -> list[int]:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return _int_list(raw)
    return [default_workers()]


@dataclass
class BenchConfig:
    workloads: Sequence[str] = WORKLOADS
    sizes: Optional[Sequence[int]] = None
    dims: Optional[Sequence[int]] = None
    workers: Sequence[int] = field(default_factory=env_workers)
    batches: int = 0
    reps: int = 5
    seed: int = 2024
    out: Optional[str] = None

    def __post_init__(self):
        for w in self.workloads:
            if w not in WORKLOADS:
                raise ValueError(f"unknown workload {w!r}")
        if self.reps < 3:
            raise ValueError("reps must be at least 3")
        if self.batches < 0:
            raise ValueError("batches must be non-negative")
        if not self.workers or any(w < 0 for w in self.workers):
            raise ValueError("workers must be a non-empty list of non-negative counts")
        if self.sizes is not None and (not self.sizes or any(s < 0 for s in self.sizes)):
            raise ValueError("sizes must be a non-empty list of non-negative counts")
        if self.dims is not None and (not self.dims or any(d < 1 for d in self.dims)):
            raise ValueError("dims must be a non-empty list of positive counts")

    def sizes_for(self, workload: str) -> list[int]:
        sizes = list(self.sizes) if self.sizes is not None else DEFAULT_SIZES[workload]
        if workload != "empty_jobs" and any(s < 1 for s in sizes):
            raise ValueError(f"{workload} sizes must be positive")
        return sizes

    def dims_for(self, workload: str) -> list[int]:
        dims = list(self.dims) if self.dims is not None else DEFAULT_DIMS[workload]
        if workload == "kendall" and any(d < 2 for d in dims):
            raise ValueError("kendall needs at least 2 variables")
        return dims


def time_call(fn: Callable[[], object], reps: int) -> tuple[int, int]:
    """Median and minimum wall time of ``fn()`` in ns, after one warm-up call."""
    fn()
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - t0)
    return int(statistics.median(times)), min(times)


def _noop(*args):
    pass


# ---------------------------------------------------------------------------
# workloads


def bench_empty(config: BenchConfig) -> list[BenchRecord]:
    records = []

    def sequential(n):
        for i in range(n):
            _noop(i)

    def pooled(n, w):
        pool = ThreadPool(w)
        for i in range(n):
            pool.push(_noop, i)
        pool.join()

    for n in config.sizes_for("empty_jobs"):
        med, lo = time_call(lambda: sequential(n), config.reps)
        records.append(BenchRecord("empty_jobs", "sequential", n, 0, 0, 0,
                                   config.reps, med, lo, config.seed))
        for w in config.workers:
            med, lo = time_call(lambda: pooled(n, w), config.reps)
            records.append(BenchRecord("empty_jobs", "pool", n, 0, w, 0,
                                       config.reps, med, lo, config.seed))
            med, lo = time_call(
                lambda: parallel_for(0, n, _noop, n_workers=w,
                                     n_batches=config.batches or None),
                config.reps)
            records.append(BenchRecord("empty_jobs", "parallel_for", n, 0, w,
                                       config.batches, config.reps, med, lo, config.seed))
    return records


def _spawn_raw(k):
    threads = [threading.Thread(target=_noop) for _ in range(k)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()


def _spawn_guest(k):
    threads = [GuestThread(_noop) for _ in range(k)]
    for t in threads:
        t.join()


def bench_thread_spawn(config: BenchConfig) -> list[BenchRecord]:
    """Spawn + join of k threads.  Reported per batch of k threads; the
    marginal cost per thread is ``nanos_median / n``."""
    records = []
    for k in config.sizes_for("thread_spawn"):
        raw_times, guest_times = [], []
        _spawn_raw(k)
        _spawn_guest(k)
        # interleave so both variants see the same machine noise
        for _ in range(config.reps):
            t0 = time.perf_counter_ns()
            _spawn_raw(k)
            raw_times.append(time.perf_counter_ns() - t0)
            t0 = time.perf_counter_ns()
            _spawn_guest(k)
            guest_times.append(time.perf_counter_ns() - t0)
        for name, times in (("raw_threads", raw_times), ("guest_threads", guest_times)):
            records.append(BenchRecord("thread_spawn", name, k, 0, k, 0, config.reps,
                                       int(statistics.median(times)), min(times),
                                       config.seed))
    return records


def _check_loop(n: int) -> float:
    """Per-call ns of ``check_interrupt`` over ``n`` calls (unrolled by 10)."""
    check = host_sync.check_interrupt
    rounds = max(1, n // 10)
    t0 = time.perf_counter_ns()
    for _ in range(rounds):
        check(); check(); check(); check(); check()
        check(); check(); check(); check(); check()
    return (time.perf_counter_ns() - t0) / (rounds * 10)


def interrupt_check_costs(n: int, reps: int) -> tuple[list[float], list[float]]:
    """Per-call check costs on the host and on one child, ``reps`` samples each.

    Host and child samples are taken alternately so both see the same
    machine load.  Must be called on the host thread.
    """
    if not host_sync.is_host_thread():
        raise RuntimeError("interrupt_check_costs must run on the host thread")
    host, child = [], []
    _check_loop(n)
    for _ in range(reps):
        host.append(_check_loop(n))
        t = threading.Thread(target=lambda: child.append(_check_loop(n)))
        t.start()
        t.join()
    return host, child


def bench_interrupt(config: BenchConfig) -> list[BenchRecord]:
    records = []
    for n in config.sizes_for("interrupt_check"):
        host, child = interrupt_check_costs(n, config.reps)
        for name, times in (("host", host), ("child", child)):
            records.append(BenchRecord("interrupt_check", name, n, 0, 0, 0, config.reps,
                                       round(statistics.median(times)), round(min(times)),
                                       config.seed))
    return records


def _data(seed: int, d: int, n: int) -> np.ndarray:
    return np.random.Generator(np.random.PCG64([seed, d, n])).standard_normal((d, n))


def _compare(workload: str, scheduler: str, got: np.ndarray, want: np.ndarray) -> None:
    if not np.array_equal(got, want):
        raise OutputMismatch(f"{workload}/{scheduler} output differs from the sequential run")


def _kde_into(data, out, j):
    out[j] = kde_gauss(data[j]).density


def _bench_matrix_workload(workload: str, config: BenchConfig,
                           sequential: Callable[[np.ndarray], np.ndarray],
                           task: Callable[[np.ndarray, np.ndarray, int], None],
                           out_shape: Callable[[int, int], tuple]) -> list[BenchRecord]:
    records = []
    for d in config.dims_for(workload):
        for n in config.sizes_for(workload):
            data = _data(config.seed, d, n)
            want = sequential(data)
            rows = []

            def pooled(w):
                out = np.empty(out_shape(d, n))
                pool = ThreadPool(w)
                for j in range(d):
                    pool.push(task, data, out, j)
                pool.join()
                return out

            def looped(w):
                out = np.empty(out_shape(d, n))
                parallel_for(0, d, lambda j: task(data, out, j), n_workers=w,
                             n_batches=config.batches or None)
                return out

            for w in config.workers:
                # correctness gates timing: nothing is recorded on mismatch
                _compare(workload, "pool", pooled(w), want)
                _compare(workload, "parallel_for", looped(w), want)
            med, lo = time_call(lambda: sequential(data), config.reps)
            rows.append(BenchRecord(workload, "sequential", n, d, 0, 0, config.reps,
                                    med, lo, config.seed))
            for w in config.workers:
                med, lo = time_call(lambda: pooled(w), config.reps)
                rows.append(BenchRecord(workload, "pool", n, d, w, 0, config.reps,
                                        med, lo, config.seed))
                med, lo = time_call(lambda: looped(w), config.reps)
                rows.append(BenchRecord(workload, "parallel_for", n, d, w, config.batches,
                                        config.reps, med, lo, config.seed))
            records.extend(rows)
    return records


def bench_kde(config: BenchConfig) -> list[BenchRecord]:
    return _bench_matrix_workload(
        "kde", config,
        sequential=lambda data: np.stack([kde_gauss(x).density for x in data]),
        task=_kde_into,
        out_shape=lambda d, n: (d, 500))


def bench_kendall(config: BenchConfig) -> list[BenchRecord]:
    return _bench_matrix_workload(
        "kendall", config,
        sequential=kendall_matrix,
        task=lambda data, out, i: kendall_row(data, i, out),
        out_shape=lambda d, n: (d, d))


RUNNERS = {
    "empty_jobs": bench_empty,
    "thread_spawn": bench_thread_spawn,
    "interrupt_check": bench_interrupt,
    "kde": bench_kde,
    "kendall": bench_kendall,
}


def run(config: BenchConfig) -> list[BenchRecord]:
    """Run the selected workloads one after another; call on the host thread."""
    log.info("data generator: %s, seed %d", RNG_NAME, config.seed)
    records = []
    for workload in config.workloads:
        records.extend(RUNNERS[workload](config))
    return records


def write_csv(records: Iterable[BenchRecord], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.row())


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bench", description="Time hostpool schedulers and write CSV rows.")
    p.add_argument("workload", choices=WORKLOADS)
    p.add_argument("--sizes", type=_int_list, help="job counts or sample sizes, e.g. 100,1000")
    p.add_argument("--dims", type=_int_list, help="numbers of variables (kde, kendall)")
    p.add_argument("--workers", type=_int_list,
                   help=f"worker counts (default: ${WORKERS_ENV} or the core count)")
    p.add_argument("--batches", type=int, default=0, help="batches for parallel_for, 0 = auto")
    p.add_argument("--reps", type=int, default=5, help="timed repetitions, at least 3")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--out", help="CSV file (default: standard output)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        config = BenchConfig(
            workloads=[args.workload], sizes=args.sizes, dims=args.dims,
            workers=args.workers if args.workers is not None else env_workers(),
            batches=args.batches, reps=args.reps, seed=args.seed, out=args.out)
        for w in config.workloads:
            config.sizes_for(w)
            if w in DEFAULT_DIMS:
                config.dims_for(w)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        parser.error(str(exc))

    source = None
    if threading.current_thread() is threading.main_thread():
        source = host_sync.SignalSource().install()
    host_sync.init_host(source=source, sink=_StderrSink())
    try:
        records = run(config)
    except OutputMismatch as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    except Interrupted as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 130
    finally:
        if source is not None:
            source.uninstall()

    if config.out:
        with open(config.out, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        buf = io.StringIO()
        write_csv(records, buf)
        sys.stdout.write(buf.getvalue())
    return 0


class _StderrSink:
    # task messages must not end up in the CSV on stdout
    def write(self, data: bytes) -> None:
        sys.stderr.buffer.write(data)
        sys.stderr.flush()


if __name__ == "__main__":
    sys.exit(main())
