"""A thread whose ``join`` keeps the host responsive while it waits."""

from __future__ import annotations

import threading
from concurrent.futures import Future, wait as _wait_futures
from typing import Any, Callable, Optional

from . import host_sync
from .errors import Interrupted, NotJoinable, SpawnFailure, TaskFailed

__all__ = ["GuestThread", "spawn"]


class GuestThread:
    """Run ``body(*args, **kwargs)`` on a new thread.

    Behaves like :class:`threading.Thread` once started, except that
    :meth:`join` called on the host thread does not simply block: every
    ``pump_interval`` seconds it releases buffered messages and polls for a
    user interruption, so ``host_sync.print`` and ``check_interrupt`` work
    from inside ``body``.

    The body must cooperate: after an interruption ``join`` still waits for
    the thread to finish, so a body that never calls ``check_interrupt``
    keeps the host blocked until it returns.
    """

    def __init__(self, body: Callable[..., Any], *args: Any,
                 pump_interval: float = host_sync.PUMP_INTERVAL, **kwargs: Any):
        host_sync.get_host()
        self.pump_interval = pump_interval
        self._future: Optional[Future] = Future()
        future = self._future

        def run():
            if not future.set_running_or_notify_cancel():
                return
            try:
                result = body(*args, **kwargs)
            except BaseException as exc:
                future.set_exception(exc)
            else:
                future.set_result(result)

        self._thread: Optional[threading.Thread] = threading.Thread(target=run, daemon=True)
        try:
            self._thread.start()
        except RuntimeError as exc:
            raise SpawnFailure(str(exc)) from exc

    @property
    def ident(self) -> Optional[int]:
        return self._thread.ident if self._thread is not None else None

    def joinable(self) -> bool:
        return self._thread is not None

    def join(self) -> Any:
        """Wait for the body to finish and return its result.

        Raises :class:`Interrupted` if the user interrupted the computation
        and :class:`TaskFailed` if the body raised.  Called from a thread
        other than the host, this is a plain blocking join.
        """
        if self._thread is None:
            raise NotJoinable("thread was already joined or detached")
        thread, future = self._thread, self._future
        self._thread = self._future = None

        if host_sync.is_host_thread():
            host_sync.pump_until(
                lambda t: bool(_wait_futures([future], timeout=t).done),
                self.pump_interval)
        thread.join()
        host_sync.flush()
        host_sync.check_interrupt()
        exc = future.exception()
        if exc is None:
            return future.result()
        if isinstance(exc, Interrupted):
            raise exc
        raise TaskFailed(exc) from exc

    def detach(self) -> None:
        """Let the thread run on unsupervised.

        Nobody pumps messages or interruptions for a detached thread, so
        only detach bodies that neither print nor need to be interrupted.
        """
        if self._thread is None:
            raise NotJoinable("thread was already joined or detached")
        self._thread = self._future = None

    def swap(self, other: "GuestThread") -> None:
        """Exchange the underlying threads of two handles."""
        self._thread, other._thread = other._thread, self._thread
        self._future, other._future = other._future, self._future
        self.pump_interval, other.pump_interval = other.pump_interval, self.pump_interval

    def __enter__(self) -> "GuestThread":
        return self

    def __exit__(self, *exc_info) -> None:
        if self.joinable():
            self.join()

    def __repr__(self) -> str:
        state = "joinable" if self.joinable() else "done"
        return f"<GuestThread {state} ident={self.ident}>"


def spawn(body: Callable[..., Any], *args: Any, **kwargs: Any) -> GuestThread:
    return GuestThread(body, *args, **kwargs)
