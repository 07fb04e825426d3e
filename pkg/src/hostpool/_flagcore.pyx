# cython: language_level=3
"""Compiled interrupt flag: host identity, global flag and source polling.

Child threads read a C-level flag, so a check from a worker costs one
function call and no locking.  Behaviour matches ``_flagcore_py``.
"""
from cpython.pythread cimport PyThread_get_thread_ident

from .errors import HostNotInitialized, Interrupted

cdef unsigned long _host = 0
cdef bint _ready = False
cdef bint _flag = False
cdef object _source = None


def configure(unsigned long host, source):
    global _host, _ready, _flag, _source
    _host = host
    _source = source
    _flag = False
    _ready = True


def host_ident():
    return _host if _ready else None


def get_flag():
    return bool(_flag)


def set_flag(bint value):
    global _flag
    _flag = value


cdef bint _poll() except -1:
    global _flag
    cdef bint fired
    try:
        fired = _source()
    except KeyboardInterrupt:
        fired = True
    if fired:
        _flag = True
    return _flag


def is_interrupted(bint condition=True):
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
    if PyThread_get_thread_ident() == _host:
        return bool(_poll())
    return False


def check_interrupt(bint condition=True):
    """Raise :class:`Interrupted` if :func:`is_interrupted` says so."""
    if condition:
        if not _ready:
            raise HostNotInitialized("call init_host() on the host thread first")
        if _flag or (PyThread_get_thread_ident() == _host and _poll()):
            raise Interrupted()
