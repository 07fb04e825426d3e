"""
GuestThread: a thread whose join keeps the host alive
=====================================================

GuestThread works like threading.Thread but returns the body's value, and
its join pumps messages and interruptions when called on the host.
"""

import time

from hostpool import GuestThread, TaskFailed, host_sync, spawn

host_sync.init_host()

# %%
# Return values come back through join.
t = spawn(sum, [1, 2, 3])
print("sum computed on another thread:", t.join())

# %%
# Errors in the body are wrapped in TaskFailed; the original is in .error.
try:
    spawn(int, "not a number").join()
except TaskFailed as exc:
    print("body failed with", repr(exc.error))

# %%
# Long jobs can report progress while the host is blocked in join.


def work():
    for step in range(3):
        time.sleep(0.3)
        host_sync.print(f"step {step} done at {time.strftime('%X')}\n")
    return "finished"


print(GuestThread(work, pump_interval=0.1).join())

# %%
# A handle is joined once.  The context manager joins on exit.
with GuestThread(time.sleep, 0.1) as t:
    print("joinable inside the block:", t.joinable())
print("joinable after the block:", t.joinable())
