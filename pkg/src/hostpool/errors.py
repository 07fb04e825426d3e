"""Exception types raised across the package."""


class HostPoolError(Exception):
    """Base class for every error raised by hostpool."""


class Interrupted(HostPoolError):
    """The user asked the running computation to stop.

    Callers are expected to unwind and clean up; the error message is the
    one shown to the user at the host boundary.
    """

    def __init__(self, message: str = "call interrupted by the user"):
        super().__init__(message)


class HostNotInitialized(HostPoolError, RuntimeError):
    """No host context exists yet; call :func:`hostpool.init_host` first."""


class AlreadyInitializedElsewhere(HostPoolError, RuntimeError):
    """A thread other than the current host tried to re-initialize the context."""


class NotHostThread(HostPoolError, RuntimeError):
    """A host-only operation was called from a child thread."""


class SinkError(HostPoolError, OSError):
    """Writing buffered messages to the output sink failed."""


class SpawnFailure(HostPoolError, RuntimeError):
    """The operating system refused to start a thread."""


class TaskFailed(HostPoolError):
    """A task body raised; the original error is available as ``error``."""

    def __init__(self, error: BaseException):
        super().__init__(f"task raised {type(error).__name__}: {error}")
        self.error = error


class NotJoinable(HostPoolError, RuntimeError):
    """The thread handle was already joined or detached."""


class PoolStopped(HostPoolError, RuntimeError):
    """Tasks cannot be pushed to a pool that has been joined."""


class AlreadyJoined(HostPoolError, RuntimeError):
    """The pool was joined twice."""


class AlreadyClaimed(HostPoolError, RuntimeError):
    """A result handle can only be claimed once."""


class DegenerateSample(HostPoolError, ValueError):
    """The sample has zero spread, so no bandwidth can be chosen."""


class LengthMismatch(HostPoolError, ValueError):
    """Paired samples have different lengths."""


class AllTied(HostPoolError, ValueError):
    """Every pair is tied in one of the samples; Kendall's tau is undefined."""


class OutputMismatch(HostPoolError):
    """A parallel benchmark run disagreed with the sequential result."""
