"""Pure-Python/NumPy fallback for the hot kernels.

This module mirrors the compiled extension ``nuvwalk._kernels`` exactly:
identical visit orders, identical float64 distances (same operation order,
no reassociation), identical tie-breaking.  The compiled module is preferred
at import time; this one exists so the package works without a C compiler
and as an executable reference for the extension's semantics.

Tie-breaking conventions shared by both backends:

* vertices settle in order of (distance, vertex index);
* a vertex's shortest-path predecessor is the smallest-indexed vertex among
  equal-distance predecessors;
* greedy cover picks the smallest-indexed vertex among maximal coverers.
"""

from __future__ import annotations

import heapq

import numpy as np

BACKEND = "python"


def _path_from_pred(pred, source, target):
    path = [int(target)]
    v = int(target)
    while v != source:
        v = int(pred[v])
        if v < 0:
            raise RuntimeError("broken predecessor chain")
        path.append(v)
    path.reverse()
    return path


# ---------------------------------------------------------------------------
# dense (complete-graph) kernels: array-scan Dijkstra, O(n) per settled vertex


def _scan_dense(matrix, source, visited, dist, pred, settled):
    """One truncated array-scan Dijkstra.  Returns the first settled vertex
    not in `visited` (or -1 with full arrays if `visited` is None)."""
    dist.fill(np.inf)
    pred.fill(-1)
    settled.fill(False)
    dist[source] = 0.0
    while True:
        cand = np.where(settled, np.inf, dist)
        u = int(np.argmin(cand))
        if cand[u] == np.inf:
            return -1
        settled[u] = True
        if visited is not None and not visited[u]:
            return u
        nd = dist[u] + matrix[u]
        better = ~settled & (nd < dist)
        dist[better] = nd[better]
        pred[better] = u
        tie = ~settled & (nd == dist) & (pred > u)
        pred[tie] = u


def sssp_dense(matrix, source):
    n = matrix.shape[0]
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    _scan_dense(matrix, source, None, dist, pred, settled)
    return dist, pred


def apsp_dense(matrix):
    """All rows of single-source distances (no predecessors).

    Settled entries can never be improved (positive lengths), so the
    unmasked minimum update leaves them untouched; rows are identical to
    sssp_dense output.
    """
    n = matrix.shape[0]
    out = np.empty((n, n))
    settled = np.empty(n, dtype=bool)
    for s in range(n):
        dist = out[s]
        dist.fill(np.inf)
        dist[s] = 0.0
        settled.fill(False)
        for _ in range(n):
            cand = np.where(settled, np.inf, dist)
            u = int(np.argmin(cand))
            if cand[u] == np.inf:
                break
            settled[u] = True
            np.minimum(dist, dist[u] + matrix[u], out=dist)
    return out


def nuv_step_dense(matrix, source, visited):
    n = matrix.shape[0]
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    t = _scan_dense(matrix, source, visited, dist, pred, settled)
    d = float(dist[t]) if t >= 0 else np.inf
    return t, d, pred


def walk_dense(matrix, start, want_paths=False):
    n = matrix.shape[0]
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    step_d = np.empty(max(n - 1, 0))
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    paths = [] if want_paths else None
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    cur = start
    for i in range(n - 1):
        t = _scan_dense(matrix, cur, visited, dist, pred, settled)
        if t < 0:
            raise RuntimeError("graph not connected")
        order[i + 1] = t
        step_d[i] = dist[t]
        visited[t] = True
        if want_paths:
            paths.append(_path_from_pred(pred, cur, t))
        cur = t
    return order, step_d, paths


# ---------------------------------------------------------------------------
# sparse (CSR adjacency) kernels: binary-heap Dijkstra with lazy deletion


def _scan_sparse(indptr, indices, weights, source, visited, dist, pred, settled):
    dist.fill(np.inf)
    pred.fill(-1)
    settled.fill(False)
    dist[source] = 0.0
    heap = [(0.0, int(source))]
    while heap:
        d, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if visited is not None and not visited[u]:
            return u
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and u < pred[v]:
                pred[v] = u
    return -1


def sssp_sparse(indptr, indices, weights, source):
    n = indptr.shape[0] - 1
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    _scan_sparse(indptr, indices, weights, source, None, dist, pred, settled)
    return dist, pred


def apsp_sparse(indptr, indices, weights):
    """All rows of single-source distances (scratch reused across sources)."""
    n = indptr.shape[0] - 1
    out = np.empty((n, n))
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    for s in range(n):
        _scan_sparse(indptr, indices, weights, s, None, out[s], pred, settled)
    return out


def nuv_step_sparse(indptr, indices, weights, source, visited):
    n = indptr.shape[0] - 1
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    t = _scan_sparse(indptr, indices, weights, source, visited, dist, pred, settled)
    d = float(dist[t]) if t >= 0 else np.inf
    return t, d, pred


def walk_sparse(indptr, indices, weights, start, want_paths=False):
    n = indptr.shape[0] - 1
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    step_d = np.empty(max(n - 1, 0))
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    paths = [] if want_paths else None
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=bool)
    cur = start
    for i in range(n - 1):
        t = _scan_sparse(indptr, indices, weights, cur, visited, dist, pred, settled)
        if t < 0:
            raise RuntimeError("graph not connected")
        order[i + 1] = t
        step_d[i] = dist[t]
        visited[t] = True
        if want_paths:
            paths.append(_path_from_pred(pred, cur, t))
        cur = t
    return order, step_d, paths


# ---------------------------------------------------------------------------
# Euclidean point-set kernel: the metric shortcut makes Dijkstra unnecessary


def walk_points(xy, start):
    n = xy.shape[0]
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    step_d = np.empty(max(n - 1, 0))
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    x = xy[:, 0]
    y = xy[:, 1]
    cur = start
    for i in range(n - 1):
        dx = x - x[cur]
        dy = y - y[cur]
        d = np.sqrt(dx * dx + dy * dy)
        d[visited] = np.inf
        t = int(np.argmin(d))
        order[i + 1] = t
        step_d[i] = d[t]
        visited[t] = True
        cur = t
    return order, step_d


# ---------------------------------------------------------------------------
# greedy ball cover


def greedy_cover(matrix, r):
    """Greedy set cover over radius-r balls; ties to the smallest index."""
    n = matrix.shape[0]
    cov = matrix <= r
    uncovered = np.ones(n, dtype=bool)
    centers = []
    while uncovered.any():
        counts = cov[:, uncovered].sum(axis=1)
        c = int(np.argmax(counts))
        if counts[c] == 0:
            raise RuntimeError("no progress in greedy cover")
        centers.append(c)
        uncovered &= ~cov[c]
    return np.asarray(centers, dtype=np.int64)
