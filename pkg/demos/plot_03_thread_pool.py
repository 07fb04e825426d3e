"""
A reusable thread pool
======================

ThreadPool runs pushed tasks on a fixed set of workers.  wait() blocks
until the queue is empty and keeps the pool; join() also retires the
workers.
"""

import threading

import numpy as np

from hostpool import TaskFailed, ThreadPool, host_sync

host_sync.init_host()

# %%
# Fill an array, one task per slot.  Slots are disjoint, so no locking.
out = np.zeros(10)
pool = ThreadPool(2)
for i in range(10):
    pool.push(lambda i: out.__setitem__(i, i ** 2), i)
pool.wait()
print(out)

# %%
# The same pool takes more work after wait().  push_return gives a handle
# whose get() returns the value once.
handles = [pool.push_return(pow, 2, k) for k in range(5)]
print([h.get() for h in handles])
pool.join()

# %%
# With zero workers every task runs right away on the pushing thread.
# Handy to switch parallelism off without touching the calling code.
serial = ThreadPool(0)
serial.push(lambda: print("ran on the host:", threading.current_thread().name))
serial.join()

# %%
# The first failing task wins; later tasks are skipped and wait() reports
# the error.
with ThreadPool(2) as pool:
    pool.push(lambda: 1 / 0)
    try:
        pool.wait()
    except TaskFailed as exc:
        print("pool reported", repr(exc.error))
