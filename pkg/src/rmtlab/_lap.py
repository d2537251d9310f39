"""Shortest-augmenting-path assignment (Hungarian / Jonker-Volgenant family).

Rows are inserted one at a time; each insertion runs a Dijkstra-like search
over columns with reduced costs ``c[i, j] - u[i] - v[j]``.  Ties pick the
smallest column index, so the result does not depend on anything but the
cost matrix.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def solve_assignment(cost):
    """Minimum-cost perfect matching for a square cost matrix.

    Returns ``(col, u, v)``: ``col[i]`` is the column matched to row ``i``;
    ``u``, ``v`` are dual potentials with ``u[i] + v[j] <= cost[i, j]`` and
    equality on matched pairs.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, np.int64)     # p[j]: row matched to column j (1-based, 0 = free)
    way = np.zeros(n + 1, np.int64)
    minv = np.empty(n + 1)
    used = np.zeros(n + 1, np.bool_)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv[:] = np.inf
        used[:] = False
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    col = np.empty(n, np.int64)
    for j in range(1, n + 1):
        col[p[j] - 1] = j - 1
    return col, u[1:].copy(), v[1:].copy()
