"""Pure-Python twin of the compiled ``_flagcore`` extension.

Used when the extension is not built.  Same semantics, roughly three times
slower per child-side check.
"""
from threading import get_ident

from .errors import HostNotInitialized, Interrupted

_host = 0
_ready = False
_flag = False
_source = None


def configure(host, source):
    global _host, _ready, _flag, _source
    _host = host
    _source = source
    _flag = False
    _ready = True


def host_ident():
    return _host if _ready else None


def get_flag():
    return _flag


def set_flag(value):
    global _flag
    _flag = bool(value)


def _poll():
    global _flag
    try:
        fired = _source()
    except KeyboardInterrupt:
        fired = True
    if fired:
        _flag = True
    return _flag


def is_interrupted(condition=True):
    """Return whether the computation should stop.

    On the host this polls the interrupt source and publishes a positive
    answer through the global flag.  On child threads it only reads the
    flag, so it never blocks and never touches the message buffer.  With
    ``condition`` false nothing is checked at all.
    """
    if not condition:
        return False
    if not _ready:
        raise HostNotInitialized("call init_host() on the host thread first")
    if _flag:
        return True
    if get_ident() == _host:
        return _poll()
    return False


def check_interrupt(condition=True):
    """Raise :class:`Interrupted` if :func:`is_interrupted` says so."""
    if condition:
        if not _ready:
            raise HostNotInitialized("call init_host() on the host thread first")
        if _flag or (get_ident() == _host and _poll()):
            raise Interrupted()
