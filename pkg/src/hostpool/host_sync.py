"""Process-global host context: buffered printing and interruption.

Exactly one thread, the *host*, may talk to the embedding environment: it
writes to the output sink and polls the interrupt source.  Every other
thread only appends to a locked message buffer and reads a global flag
that the host sets once it has noticed an interruption.

Typical use::

    from hostpool import host_sync

    host_sync.init_host(source=host_sync.SignalSource().install())
    ...
    host_sync.print(b"progress\\n")        # from any thread
    host_sync.check_interrupt(i % 20 == 0)  # from any thread

The flag is *not* cleared automatically.  Call :func:`reset_interrupt` on
the host between independent top-level operations, otherwise a stale
interruption leaks into the next one.
"""

from __future__ import annotations

import signal
import sys
import threading
from collections import deque
from threading import get_ident
from typing import Callable, Optional, Protocol, Union

from .errors import (
    AlreadyInitializedElsewhere,
    HostNotInitialized,
    Interrupted,
    NotHostThread,
    SinkError,
)

try:
    from . import _flagcore as _core
except ImportError:  # extension not built
    from . import _flagcore_py as _core

__all__ = [
    "HostContext",
    "ManualTrigger",
    "SignalSource",
    "check_interrupt",
    "flush",
    "get_host",
    "init_host",
    "is_host_thread",
    "is_interrupted",
    "print",
    "reset_interrupt",
]

Message = Union[bytes, bytearray, memoryview, str]
InterruptSource = Callable[[], bool]


class Sink(Protocol):
    def write(self, data: bytes) -> object: ...


def _never() -> bool:
    return False


class _StdoutSink:
    """Pass-through to the binary standard output, flushed after each write."""

    def write(self, data: bytes) -> None:
        out = getattr(sys.stdout, "buffer", None)
        if out is None:
            sys.stdout.write(data.decode("utf-8", "replace"))
            sys.stdout.flush()
        else:
            sys.stdout.flush()  # keep order with text already printed
            out.write(data)
            out.flush()


class HostContext:
    """State shared by all threads: host identity, flag, and message buffer."""

    __slots__ = ("host_ident", "source", "sink", "_buffer", "_lock")

    def __init__(self, source: InterruptSource, sink: Sink):
        self.host_ident = get_ident()
        self.source = source
        self.sink = sink
        self._buffer: deque[bytes] = deque()
        self._lock = threading.Lock()

    @property
    def flag(self) -> bool:
        """True once the host has noticed an interruption."""
        return _core.get_flag()

    def pending(self) -> list[bytes]:
        """Snapshot of the messages still waiting for the host."""
        with self._lock:
            return list(self._buffer)


_ctx: Optional[HostContext] = None
_init_lock = threading.Lock()


def init_host(source: Optional[InterruptSource] = None,
              sink: Optional[Sink] = None) -> HostContext:
    """Make the calling thread the host.

    ``source`` is polled on the host only and returns true once the
    embedder wants the computation stopped; it defaults to a source that
    never fires.  ``sink`` receives flushed messages (default: stdout).

    Calling again from the host thread replaces the context with a fresh
    one (flag cleared, buffer emptied).  Calling from any other thread
    raises :class:`AlreadyInitializedElsewhere`.
    """
    global _ctx
    with _init_lock:
        if _ctx is not None and _ctx.host_ident != get_ident():
            raise AlreadyInitializedElsewhere(
                "host context belongs to another thread")
        ctx = HostContext(source or _never, sink or _StdoutSink())
        _core.configure(ctx.host_ident, ctx.source)
        _ctx = ctx
        return ctx


def get_host() -> HostContext:
    ctx = _ctx
    if ctx is None:
        raise HostNotInitialized("call init_host() on the host thread first")
    return ctx


def is_host_thread() -> bool:
    return get_host().host_ident == get_ident()


def _encode(msg: Message) -> bytes:
    if isinstance(msg, str):
        return msg.encode("utf-8")
    return bytes(msg)


def print(msg: Message) -> None:
    """Queue ``msg`` for the host; on the host, also flush everything queued.

    ``str`` messages are encoded as UTF-8; bytes are passed through.
    Printing an empty message from the host is the idiomatic way to release
    the buffer.
    """
    ctx = _ctx
    if ctx is None:
        raise HostNotInitialized("call init_host() on the host thread first")
    data = _encode(msg)
    if data:
        with ctx._lock:
            ctx._buffer.append(data)
    if ctx.host_ident == get_ident():
        _drain(ctx)


def flush() -> None:
    """Write all buffered messages to the sink.  No effect on child threads."""
    ctx = get_host()
    if ctx.host_ident == get_ident():
        _drain(ctx)


def _drain(ctx: HostContext) -> None:
    with ctx._lock:
        if not ctx._buffer:
            return
        batch = list(ctx._buffer)
        ctx._buffer.clear()
    try:
        ctx.sink.write(b"".join(batch))
    except Exception as exc:
        # put the batch back in front so nothing is lost or reordered
        with ctx._lock:
            ctx._buffer.extendleft(reversed(batch))
        raise SinkError(f"writing to the output sink failed: {exc}") from exc


is_interrupted = _core.is_interrupted
check_interrupt = _core.check_interrupt

#: True when the compiled flag core is in use.
COMPILED = _core.__name__.endswith("._flagcore")


def reset_interrupt() -> None:
    """Clear the global flag.  Host only."""
    ctx = get_host()
    if ctx.host_ident != get_ident():
        raise NotHostThread("reset_interrupt() must be called on the host")
    _core.set_flag(False)


class ManualTrigger:
    """Interrupt source fired programmatically, e.g. from a timer in tests.

    Polling consumes the trigger, the same way an embedder clears its own
    flag once the interruption has been noticed.
    """

    def __init__(self) -> None:
        self._event = threading.Event()

    def fire(self) -> None:
        self._event.set()

    def clear(self) -> None:
        self._event.clear()

    @property
    def fired(self) -> bool:
        return self._event.is_set()

    def __call__(self) -> bool:
        if self._event.is_set():
            self._event.clear()
            return True
        return False


class SignalSource(ManualTrigger):
    """Interrupt source driven by an OS signal (SIGINT by default).

    The first signal fires the source.  A second signal arriving while the
    first one has not been noticed yet raises ``KeyboardInterrupt`` on the
    main thread when ``force_on_repeat`` is set, as an escape hatch for
    computations that never check.  Must be installed from the main thread.
    """

    def __init__(self, signum: int = signal.SIGINT, force_on_repeat: bool = True):
        super().__init__()
        self.signum = signum
        self.force_on_repeat = force_on_repeat
        self._previous = None

    def _handler(self, signum, frame) -> None:
        if self._event.is_set() and self.force_on_repeat:
            raise KeyboardInterrupt
        self._event.set()

    def install(self) -> "SignalSource":
        self._previous = signal.signal(self.signum, self._handler)
        return self

    def uninstall(self) -> None:
        if self._previous is not None:
            signal.signal(self.signum, self._previous)
            self._previous = None


#: Default interval of the host pump loop, in seconds.
PUMP_INTERVAL = 0.25


def pump_until(wait: Callable[[float], bool], interval: float = PUMP_INTERVAL) -> bool:
    """Run the host pump loop until ``wait(interval)`` reports completion.

    Each time ``wait`` times out the host releases buffered messages and
    polls for an interruption; the loop stops early once one is seen.
    Returns True if ``wait`` completed, False if interrupted first.
    """
    while not wait(interval):
        flush()
        if is_interrupted():
            return False
    return True
