"""
Statistical kernels: density estimates and Kendall's tau
========================================================

Two workloads that are worth parallelizing: a Gaussian kernel density
estimate per variable, and a matrix of Kendall rank correlations.
"""

import numpy as np

from hostpool import ThreadPool, host_sync
from hostpool import kernels

host_sync.init_host()
rng = np.random.default_rng(0)

# %%
# Kernel density estimate with Silverman's bandwidth.  The grid reaches
# three bandwidths past the data on both sides.
x = rng.standard_normal(1_000)
est = kernels.kde_gauss(x)
print(f"bandwidth {est.bandwidth:.3f}, mass on grid {est.integral():.4f}")
print(f"density near 0: {est.density[np.argmin(np.abs(est.grid))]:.3f}")

# %%
# Kendall's tau-b.  The brute force version looks at every pair; Knight's
# version sorts and counts merge exchanges.  Both agree, ties included.
a = np.array([1, 2, 3, 4])
b = np.array([2, 1, 4, 3])
print("tau by brute force:", kernels.kendall_tau_brute(a, b))
print("tau by merge sort:", kernels.kendall_tau_knight(a, b))

u = rng.integers(0, 5, 300)
v = u + rng.integers(0, 3, 300)
print("tied samples:", kernels.kendall_tau_brute(u, v), kernels.kendall_tau_knight(u, v))

# %%
# A correlation matrix, one row per pool task.  Same numbers as the
# sequential loop, to the last bit.
data = rng.standard_normal((6, 500))
data[1] += data[0]
with ThreadPool(2) as pool:
    tau = kernels.kendall_matrix(data, pool)
print(np.round(tau, 2))
print("equals sequential:", np.array_equal(tau, kernels.kendall_matrix(data)))
