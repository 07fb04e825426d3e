"""Fixed-size thread pool that keeps the host responsive while it waits."""

from __future__ import annotations

import os
import threading
from collections import deque
from concurrent.futures import Future, wait as _wait_futures
from typing import Any, Callable, Optional, Sequence

from . import host_sync
from .errors import (
    AlreadyClaimed,
    AlreadyJoined,
    Interrupted,
    PoolStopped,
    SpawnFailure,
    TaskFailed,
)
from .parallel import auto_batch_count, make_plan

__all__ = ["ResultHandle", "ThreadPool", "default_workers"]


def default_workers() -> int:
    """Number of workers used when none is given: the machine's core count."""
    return os.cpu_count() or 1


class ResultHandle:
    """Deferred result of :meth:`ThreadPool.push_return`, claimable once.

    ``get`` blocks until the task has run.  It returns the task's value,
    re-raises the task's exception, raises :class:`Interrupted` if the task
    was dropped because of a user interruption, and
    :class:`concurrent.futures.CancelledError` if it was dropped because an
    earlier task failed.
    """

    __slots__ = ("_future", "_claimed", "_pump_interval")

    def __init__(self, future: Future, pump_interval: float):
        self._future = future
        self._claimed = False
        self._pump_interval = pump_interval

    def done(self) -> bool:
        return self._future.done()

    def get(self, timeout: Optional[float] = None) -> Any:
        if self._claimed:
            raise AlreadyClaimed("result was already claimed")
        self._claimed = True
        if timeout is None and host_sync.is_host_thread():
            # keep messages and interruptions flowing while blocked
            done = host_sync.pump_until(
                lambda t: bool(_wait_futures([self._future], timeout=t).done),
                self._pump_interval)
            if not done:
                host_sync.flush()
                raise Interrupted()
            host_sync.flush()
        return self._future.result(timeout)


class _Task:
    __slots__ = ("fn", "args", "kwargs", "future")

    def __init__(self, fn, args, kwargs, future):
        self.fn = fn
        self.args = args
        self.kwargs = kwargs
        self.future = future


class ThreadPool:
    """A task queue served by ``n_workers`` threads.

    With ``n_workers=0`` no threads are started and every task runs inline
    on the thread that pushes it, which lets callers switch parallelism
    off without changing their code.

    Workers check the global interrupt flag before each task and drop the
    task when it is set.  The first exception raised by a pushed task is
    kept, all tasks queued after it are dropped, and :meth:`wait` or
    :meth:`join` re-raise it as :class:`TaskFailed` (fail fast).

    :meth:`wait` and :meth:`join` must be called on the host thread to get
    message flushing and interrupt polling; from any other thread they
    block plainly.  Never call them from inside a task of the same pool.
    """

    def __init__(self, n_workers: Optional[int] = None,
                 pump_interval: float = host_sync.PUMP_INTERVAL):
        if n_workers is None:
            n_workers = default_workers()
        if n_workers < 0:
            raise ValueError("n_workers must be non-negative")
        host_sync.get_host()
        self.n_workers = n_workers
        self.pump_interval = pump_interval
        self._queue: deque[_Task] = deque()
        self._cv = threading.Condition()
        self._busy = 0
        self._first_error: Optional[BaseException] = None
        self._stopped = False
        self._joined = False
        self._workers: list[threading.Thread] = []
        for k in range(n_workers):
            t = threading.Thread(target=self._worker, name=f"hostpool-worker-{k}",
                                 daemon=True)
            try:
                t.start()
            except RuntimeError as exc:
                self._shutdown()
                raise SpawnFailure(str(exc)) from exc
            self._workers.append(t)

    # -- submission ---------------------------------------------------------

    def push(self, task: Callable[..., Any], *args: Any, **kwargs: Any) -> None:
        """Queue ``task(*args, **kwargs)``; callable from any thread, tasks included."""
        self._submit(_Task(task, args, kwargs, None))

    def push_return(self, task: Callable[..., Any], *args: Any, **kwargs: Any) -> ResultHandle:
        """Queue ``task(*args, **kwargs)`` and return a handle to its result.

        Exceptions of such tasks are delivered through the handle only; they
        do not count as pool failures.
        """
        future: Future = Future()
        self._submit(_Task(task, args, kwargs, future))
        return ResultHandle(future, self.pump_interval)

    def _submit(self, task: _Task) -> None:
        if self._stopped:
            raise PoolStopped("cannot push to a joined pool")
        if not self._workers:
            self._run(task)
            return
        with self._cv:
            if self._stopped:
                raise PoolStopped("cannot push to a joined pool")
            self._queue.append(task)
            self._cv.notify()

    # -- execution ----------------------------------------------------------

    def _worker(self) -> None:
        cv, queue = self._cv, self._queue
        while True:
            with cv:
                while not queue and not self._stopped:
                    cv.wait()
                if not queue:
                    return
                task = queue.popleft()
                self._busy += 1
            try:
                self._run(task)
            finally:
                with cv:
                    self._busy -= 1
                    if not queue and self._busy == 0:
                        cv.notify_all()

    def _run(self, task: _Task) -> None:
        future = task.future
        if host_sync.is_interrupted():
            if future is not None:
                future.set_exception(Interrupted())
            return
        if self._first_error is not None:
            if future is not None:
                future.cancel()
                future.set_running_or_notify_cancel()  # wake waiters
            return
        if future is not None:
            if not future.set_running_or_notify_cancel():
                return
            try:
                result = task.fn(*task.args, **task.kwargs)
            except BaseException as exc:
                future.set_exception(exc)
            else:
                future.set_result(result)
            return
        try:
            task.fn(*task.args, **task.kwargs)
        except BaseException as exc:
            with self._cv:
                if self._first_error is None:
                    self._first_error = exc

    def _idle(self) -> bool:
        return not self._queue and self._busy == 0

    def _drop_queued(self) -> None:
        with self._cv:
            dropped = list(self._queue)
            self._queue.clear()
            if self._busy == 0:
                self._cv.notify_all()
        for task in dropped:
            if task.future is not None:
                task.future.set_exception(Interrupted())

    # -- synchronization ----------------------------------------------------

    def wait(self) -> None:
        """Block until every pushed task has finished; the pool stays usable.

        Raises :class:`Interrupted` on user interruption (queued tasks are
        dropped) and :class:`TaskFailed` if a task raised.
        """
        def settled(timeout: Optional[float]) -> bool:
            with self._cv:
                return self._cv.wait_for(self._idle, timeout)

        if host_sync.is_host_thread():
            if not host_sync.pump_until(settled, self.pump_interval):
                self._drop_queued()
        else:
            settled(None)
        host_sync.flush()
        host_sync.check_interrupt()
        with self._cv:
            error, self._first_error = self._first_error, None
        if error is not None:
            if isinstance(error, Interrupted):
                raise error
            raise TaskFailed(error) from error

    def join(self) -> None:
        """Wait for all tasks, then retire and join the worker threads."""
        if self._joined:
            raise AlreadyJoined("pool was already joined")
        self._joined = True
        try:
            self.wait()
        finally:
            self._shutdown()
            host_sync.flush()
        host_sync.check_interrupt()

    def _shutdown(self) -> None:
        with self._cv:
            self._stopped = True
            self._cv.notify_all()
        for t in self._workers:
            if t is not threading.current_thread():
                # workers finish their current task and drain the queue
                while t.is_alive():
                    t.join(self.pump_interval)
                    if host_sync.is_host_thread():
                        host_sync.flush()
                        if host_sync.is_interrupted():
                            self._drop_queued()

    @property
    def stopped(self) -> bool:
        return self._stopped

    def __enter__(self) -> "ThreadPool":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._joined:
            return
        if exc_type is None:
            self.join()
        else:
            self._joined = True
            self._drop_queued()
            self._shutdown()

    # -- loops --------------------------------------------------------------

    def parallel_for(self, begin: int, end: int, body: Callable[[int], Any],
                     n_batches: Optional[int] = None) -> None:
        """Push ``body(i)`` for ``i`` in ``[begin, end)`` in batches; does not wait.

        Completion is observed through :meth:`wait` or :meth:`join`.
        Because the call only enqueues work, tasks may themselves call
        ``parallel_for`` on the same pool (nested loops) without deadlock.
        """
        n = max(0, end - begin)
        if not n_batches:
            n_batches = auto_batch_count(n, self.n_workers)
        for lo, hi in make_plan(begin, end, n_batches).ranges():
            self.push(_run_range, body, lo, hi)

    def parallel_for_each(self, items: Sequence[Any], body: Callable[[Any], Any],
                          n_batches: Optional[int] = None) -> None:
        """Push ``body`` over every element of ``items`` in batches; does not wait.

        When ``body`` returns something other than None and ``items`` is a
        mutable sequence, the returned value replaces the element.
        """
        n = len(items)
        if not n_batches:
            n_batches = auto_batch_count(n, self.n_workers)
        for lo, hi in make_plan(0, n, n_batches).ranges():
            self.push(_run_items, items, body, lo, hi)


def _run_range(body, lo, hi):
    for i in range(lo, hi):
        body(i)


def _run_items(items, body, lo, hi):
    for i in range(lo, hi):
        value = body(items[i])
        if value is not None:
            items[i] = value
