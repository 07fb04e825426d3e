"""Thread pools and parallel loops for code embedded in a single-threaded host.

Only the host thread writes output and polls for user interruptions; worker
threads buffer their messages and read a global interrupt flag.  Waiting
primitives (``GuestThread.join``, ``ThreadPool.wait``/``join``) pump
messages and interruptions on the host while they block.
"""

from . import host_sync
from .errors import (
    AllTied,
    AlreadyClaimed,
    AlreadyInitializedElsewhere,
    AlreadyJoined,
    DegenerateSample,
    HostNotInitialized,
    HostPoolError,
    Interrupted,
    LengthMismatch,
    NotHostThread,
    NotJoinable,
    OutputMismatch,
    PoolStopped,
    SinkError,
    SpawnFailure,
    TaskFailed,
)
from .host_sync import (
    ManualTrigger,
    SignalSource,
    check_interrupt,
    flush,
    init_host,
    is_host_thread,
    is_interrupted,
    reset_interrupt,
)
from .parallel import BatchPlan, auto_batch_count, make_plan, parallel_for, parallel_for_each
from .pool import ResultHandle, ThreadPool
from .thread import GuestThread, spawn

__version__ = "0.1.0"
