"""
Talking to the user from worker threads
=======================================

Only one thread, the host, may write to the console or ask whether the
user wants to stop.  Other threads hand their messages to the host, which
releases them in one piece while it waits.
"""

import threading
import time

from hostpool import GuestThread, host_sync

# The thread that calls init_host becomes the host.  Messages go to stdout
# by default and nobody ever interrupts, unless we say otherwise.
trigger = host_sync.ManualTrigger()
host_sync.init_host(source=trigger)

# %%
# A child prints.  Nothing reaches the console until the host flushes,
# which join does for us, every 250 ms and once more at the end.


def greet(i):
    host_sync.print(f"thread {i} says hello\n")


GuestThread(greet, 1).join()

# %%
# Two chatty threads.  Each line arrives whole, so there is no garbled
# output even though both threads print at the same time.


def count(name):
    for i in range(3):
        host_sync.print(f"{name} counts {i}\n")


a, b = GuestThread(count, "a"), GuestThread(count, "b")
a.join()
b.join()

# %%
# Interruption.  Here a timer plays the user pressing Ctrl+C half way
# through the first nap.  The host notices on its next pump, raises the
# global flag, and the children stop at their next check.


def nap(i):
    time.sleep(1.0)
    host_sync.print(f"{i} slept for one second\n")
    host_sync.check_interrupt()
    time.sleep(1.0)
    host_sync.print(f"{i} slept for another second\n")


t1, t2 = GuestThread(nap, 1), GuestThread(nap, 2)
threading.Timer(0.5, trigger.fire).start()
for t in (t1, t2):
    try:
        t.join()
    except host_sync.Interrupted:
        print("join raised Interrupted")

# The flag stays up until the host clears it.
print("flag after the interruption:", host_sync.get_host().flag)
host_sync.reset_interrupt()
print("flag after reset:", host_sync.get_host().flag)

# %%
# check_interrupt(condition) only looks at the flag when condition is
# true, which is handy to check every 1000th iteration or so.
for i in range(5):
    host_sync.check_interrupt(i % 1000 == 0)
