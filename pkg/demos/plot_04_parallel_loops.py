"""
Parallel loops in batches
=========================

parallel_for splits a range into contiguous batches, one pool task each,
so that cheap loop bodies are not drowned by queue overhead.
"""

import numpy as np

from hostpool import ThreadPool, auto_batch_count, host_sync, make_plan
from hostpool import parallel_for, parallel_for_each

host_sync.init_host()

# %%
# How a range is cut.  Batches differ in size by one at most.
plan = make_plan(0, 10, 3)
print(list(plan.ranges()))
print("default batch count for 10^4 iterations on 4 workers:",
      auto_batch_count(10**4, 4))

# %%
# A loop over indices.  The body writes only its own slot.
x = np.linspace(0, 1, 1_000)
y = np.empty_like(x)


def body(i):
    y[i] = np.sin(x[i]) ** 2


parallel_for(0, x.size, body, n_workers=2)
print("max error:", np.abs(y - np.sin(x) ** 2).max())

# %%
# A loop over elements.  Returning a value replaces the element.
words = ["pool", "thread", "host"]
parallel_for_each(words, str.upper, n_workers=2)
print(words)

# %%
# On an existing pool the loop only enqueues work, so loops can nest
# without deadlock.  The host waits once at the end.
grid = np.zeros((4, 5), dtype=int)
with ThreadPool(2) as pool:
    def row(i):
        pool.parallel_for(0, 5, lambda j: grid.__setitem__((i, j), 10 * i + j))

    pool.parallel_for(0, 4, row)
    pool.wait()
print(grid)
