"""
Measuring the overheads
=======================

The bench module times each workload under a sequential loop, a pool of
single tasks and parallel_for, and writes CSV.  The same runs are
available from the command line, e.g. ``bench kendall --dims 2,10``.
"""

import io
import statistics

from hostpool import bench, host_sync

host_sync.init_host()

# %%
# Checking for interruption is cheap on a child (a flag read) and dearer
# on the host (it also asks the interrupt source).
host, child = bench.interrupt_check_costs(10**5, reps=5)
print(f"host {statistics.median(host):.0f} ns, child {statistics.median(child):.0f} ns")

# %%
# Empty jobs show the price of the queue, and why batching pays off.
config = bench.BenchConfig(workloads=["empty_jobs", "kendall"], sizes=[1_000],
                           dims=[4], workers=[2], reps=3)
out = io.StringIO()
bench.write_csv(bench.run(config), out)
print(out.getvalue())
