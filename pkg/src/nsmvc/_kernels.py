"""Compiled inner kernel for the sequential assignment pass."""

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _pow(x, eta):
    if x <= 0.0:
        return 0.0
    if eta == 1.0:
        return x
    return math.exp(eta * math.log(x))


@njit(cache=True, nogil=True)
def sequential_assign(dist, weights, etas, assignments, phis):
    """Reassign samples one at a time, in index order.

    dist: (m, n, k) squared distances, weights: (m, n), etas: (m,),
    assignments: (n,) int64 updated in place, phis: (m,) per-view masked
    losses consistent with ``assignments`` on entry, updated in place.
    Returns the number of samples that changed cluster.
    """
    m, n, k = dist.shape
    theta = np.empty(m)
    changed = 0
    for i in range(n):
        prev = assignments[i]
        best_val = 0.0
        for v in range(m):
            own = weights[v, i] * dist[v, i, prev]
            theta[v] = phis[v] - own
            if theta[v] < 0.0:
                theta[v] = 0.0
            best_val += _pow(theta[v] + own, etas[v])
        best = prev
        for j in range(k):
            if j == prev:
                continue
            val = 0.0
            for v in range(m):
                val += _pow(theta[v] + weights[v, i] * dist[v, i, j], etas[v])
            if val < best_val:
                best_val = val
                best = j
        if best != prev:
            changed += 1
            assignments[i] = best
        for v in range(m):
            phis[v] = theta[v] + weights[v, i] * dist[v, i, best]
    return changed
