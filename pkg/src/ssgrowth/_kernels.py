"""Compiled BFS kernel for ball volumes (pure-Python fallback when numba is absent)."""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def ball_volumes(indptr, indices, deg, sources, limits, radii, out):
    """Fill ``out[i, j]`` with the volume of ``B(sources[i], radii[j])``, or -1 if ``radii[j] > limits[i]``.

    One truncated BFS per source; the distance and queue buffers are shared and
    only the visited entries are reset between sources.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    top = 0
    for i in range(limits.shape[0]):
        if limits[i] > top:
            top = limits[i]
    acc = np.zeros(top + 1, np.int64)
    for i in range(sources.shape[0]):
        s = sources[i]
        lim = limits[i]
        for r in range(lim + 1):
            acc[r] = 0
        head = 0
        tail = 1
        queue[0] = s
        dist[s] = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            acc[du] += deg[u]
            if du == lim:
                continue
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue[tail] = w
                    tail += 1
        total = 0
        for r in range(lim + 1):
            total += acc[r]
            acc[r] = total
        for j in range(radii.shape[0]):
            if radii[j] <= lim:
                out[i, j] = acc[radii[j]]
            else:
                out[i, j] = -1
        for q in range(tail):
            dist[queue[q]] = -1
