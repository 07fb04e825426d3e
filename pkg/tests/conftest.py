import threading
import time

import pytest

from hostpool import host_sync


class RecordingSink:
    """Sink that remembers who wrote what, and when."""

    def __init__(self):
        self.writes = []  # (thread ident, bytes, monotonic time)

    def write(self, data):
        self.writes.append((threading.get_ident(), bytes(data), time.monotonic()))

    @property
    def data(self):
        return b"".join(w[1] for w in self.writes)

    def lines(self):
        return self.data.decode().splitlines(keepends=True)

    def writers(self):
        return {w[0] for w in self.writes}


class Host:
    def __init__(self, ctx, sink, trigger):
        self.ctx = ctx
        self.sink = sink
        self.trigger = trigger

    def interrupt(self):
        """Fire the source and let the host notice it."""
        self.trigger.fire()
        assert host_sync.is_interrupted()


@pytest.fixture
def host():
    sink = RecordingSink()
    trigger = host_sync.ManualTrigger()
    ctx = host_sync.init_host(source=trigger, sink=sink)
    yield Host(ctx, sink, trigger)
    host_sync.init_host()  # fresh state, default sink


def run_in_thread(fn, *args):
    """Run fn on a plain thread and return its result (or raise its error)."""
    out = {}

    def target():
        try:
            out["value"] = fn(*args)
        except BaseException as exc:  # noqa: BLE001
            out["error"] = exc

    t = threading.Thread(target=target)
    t.start()
    t.join()
    if "error" in out:
        raise out["error"]
    return out.get("value")
