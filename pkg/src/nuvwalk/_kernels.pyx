# cython: language_level=3
"""Compiled kernels for the walk engine and shortest-path machinery.

Must stay semantically identical to nuvwalk._kernels_py (the pure reference):
same settle order, same predecessor tie-breaks, same float64 operation order.
"""

from libc.math cimport INFINITY, sqrt

import numpy as np

BACKEND = "compiled"

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    static inline unsigned long long nuv_popcount(unsigned long long x) { return __popcnt64(x); }
    #else
    static inline unsigned long long nuv_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    #endif
    """
    unsigned long long nuv_popcount(unsigned long long x) nogil


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


cdef Py_ssize_t _scan_dense(const double[:, ::1] matrix, Py_ssize_t source,
                            const unsigned char[::1] visited, bint truncate,
                            double[::1] dist, long long[::1] pred,
                            unsigned char[::1] settled) noexcept nogil:
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t i, u, v
    cdef double best, du, nd
    for i in range(n):
        dist[i] = INFINITY
        pred[i] = -1
        settled[i] = 0
    dist[source] = 0.0
    while True:
        u = -1
        best = INFINITY
        for i in range(n):
            if not settled[i] and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0:
            return -1
        settled[u] = 1
        if truncate and not visited[u]:
            return u
        du = dist[u]
        for v in range(n):
            if settled[v]:
                continue
            nd = du + matrix[u, v]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
            elif nd == dist[v] and pred[v] > u:
                pred[v] = u


def sssp_dense(const double[:, ::1] matrix, source):
    cdef Py_ssize_t n = matrix.shape[0]
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=np.uint8)
    # `settled` doubles as a placeholder for the never-read visited buffer
    _scan_dense(matrix, source, settled, 0, dist, pred, settled)
    return dist, pred


cdef void _scan_dense_distonly(const double[:, ::1] matrix, Py_ssize_t source,
                               double[::1] dist, unsigned char[::1] settled) noexcept nogil:
    # settled entries can never be improved (positive lengths), so the
    # unguarded minimum update leaves them untouched; rows are identical to
    # the pred-tracking scan
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t i, u, v
    cdef double best, du, nd
    for i in range(n):
        dist[i] = INFINITY
        settled[i] = 0
    dist[source] = 0.0
    while True:
        u = -1
        best = INFINITY
        for i in range(n):
            if not settled[i] and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0:
            return
        settled[u] = 1
        du = dist[u]
        for v in range(n):
            nd = du + matrix[u, v]
            if nd < dist[v]:
                dist[v] = nd


def apsp_dense(const double[:, ::1] matrix):
    """All rows of single-source distances (no predecessors)."""
    cdef Py_ssize_t n = matrix.shape[0]
    out = np.empty((n, n))
    settled_arr = np.empty(n, dtype=np.uint8)
    cdef double[:, ::1] out_v = out
    cdef unsigned char[::1] settled = settled_arr
    cdef Py_ssize_t s
    for s in range(n):
        _scan_dense_distonly(matrix, s, out_v[s], settled)
    return out


def nuv_step_dense(const double[:, ::1] matrix, source, const unsigned char[::1] visited):
    cdef Py_ssize_t n = matrix.shape[0]
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=np.uint8)
    cdef Py_ssize_t t = _scan_dense(matrix, source, visited, 1, dist, pred, settled)
    d = float(dist[t]) if t >= 0 else np.inf
    return int(t), d, pred


def walk_dense(const double[:, ::1] matrix, start, want_paths=False):
    cdef Py_ssize_t n = matrix.shape[0]
    order = np.empty(n, dtype=np.int64)
    step_d = np.empty(max(n - 1, 0))
    visited_arr = np.zeros(n, dtype=np.uint8)
    dist_arr = np.empty(n)
    pred_arr = np.empty(n, dtype=np.int64)
    settled_arr = np.empty(n, dtype=np.uint8)

    cdef long long[::1] order_v = order
    cdef double[::1] step_v = step_d
    cdef unsigned char[::1] visited = visited_arr
    cdef double[::1] dist = dist_arr
    cdef long long[::1] pred = pred_arr
    cdef unsigned char[::1] settled = settled_arr

    cdef bint paths_flag = bool(want_paths)
    paths = [] if paths_flag else None

    cdef Py_ssize_t cur = start, t, i
    order_v[0] = start
    visited[start] = 1
    for i in range(n - 1):
        t = _scan_dense(matrix, cur, visited, 1, dist, pred, settled)
        if t < 0:
            raise RuntimeError("graph not connected")
        order_v[i + 1] = t
        step_v[i] = dist[t]
        visited[t] = 1
        if paths_flag:
            paths.append(_path_from_pred(pred_arr, cur, t))
        cur = t
    return order, step_d, paths


# ---------------------------------------------------------------------------
# sparse (CSR adjacency) kernels: binary heap keyed on (distance, vertex)


cdef inline Py_ssize_t _heap_push(double[::1] hd, long long[::1] hv,
                                  Py_ssize_t size, double d, long long v) noexcept nogil:
    cdef Py_ssize_t i = size, p
    cdef double td
    cdef long long tv
    hd[i] = d
    hv[i] = v
    while i > 0:
        p = (i - 1) >> 1
        if hd[p] > hd[i] or (hd[p] == hd[i] and hv[p] > hv[i]):
            td = hd[p]; hd[p] = hd[i]; hd[i] = td
            tv = hv[p]; hv[p] = hv[i]; hv[i] = tv
            i = p
        else:
            break
    return size + 1


cdef inline Py_ssize_t _heap_pop(double[::1] hd, long long[::1] hv,
                                 Py_ssize_t size, double* out_d, long long* out_v) noexcept nogil:
    cdef Py_ssize_t i = 0, c
    cdef double td
    cdef long long tv
    out_d[0] = hd[0]
    out_v[0] = hv[0]
    size -= 1
    hd[0] = hd[size]
    hv[0] = hv[size]
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and (hd[c + 1] < hd[c] or (hd[c + 1] == hd[c] and hv[c + 1] < hv[c])):
            c += 1
        if hd[c] < hd[i] or (hd[c] == hd[i] and hv[c] < hv[i]):
            td = hd[c]; hd[c] = hd[i]; hd[i] = td
            tv = hv[c]; hv[c] = hv[i]; hv[i] = tv
            i = c
        else:
            break
    return size


cdef Py_ssize_t _scan_sparse(const long long[::1] indptr, const int[::1] indices,
                             const double[::1] weights, Py_ssize_t source,
                             const unsigned char[::1] visited, bint truncate,
                             double[::1] dist, long long[::1] pred,
                             unsigned char[::1] settled,
                             double[::1] hd, long long[::1] hv) noexcept nogil:
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, k, heap_size
    cdef long long u, v
    cdef double d, nd
    for i in range(n):
        dist[i] = INFINITY
        pred[i] = -1
        settled[i] = 0
    dist[source] = 0.0
    heap_size = _heap_push(hd, hv, 0, 0.0, source)
    while heap_size > 0:
        heap_size = _heap_pop(hd, hv, heap_size, &d, &u)
        if settled[u]:
            continue
        settled[u] = 1
        if truncate and not visited[u]:
            return u
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heap_size = _heap_push(hd, hv, heap_size, nd, v)
            elif nd == dist[v] and u < pred[v]:
                pred[v] = u
    return -1


def sssp_sparse(const long long[::1] indptr, const int[::1] indices, const double[::1] weights, source):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = indices.shape[0] + 2
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=np.uint8)
    hd = np.empty(cap)
    hv = np.empty(cap, dtype=np.int64)
    _scan_sparse(indptr, indices, weights, source, settled, 0,
                 dist, pred, settled, hd, hv)
    return dist, pred


def apsp_sparse(const long long[::1] indptr, const int[::1] indices,
                const double[::1] weights):
    """All rows of single-source distances (scratch reused across sources)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = indices.shape[0] + 2
    out = np.empty((n, n))
    pred_arr = np.empty(n, dtype=np.int64)
    settled_arr = np.empty(n, dtype=np.uint8)
    hd_arr = np.empty(cap)
    hv_arr = np.empty(cap, dtype=np.int64)
    cdef double[:, ::1] out_v = out
    cdef long long[::1] pred = pred_arr
    cdef unsigned char[::1] settled = settled_arr
    cdef double[::1] hd = hd_arr
    cdef long long[::1] hv = hv_arr
    cdef Py_ssize_t s
    for s in range(n):
        _scan_sparse(indptr, indices, weights, s, settled, 0,
                     out_v[s], pred, settled, hd, hv)
    return out


def nuv_step_sparse(const long long[::1] indptr, const int[::1] indices, const double[::1] weights,
                    source, const unsigned char[::1] visited):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = indices.shape[0] + 2
    dist = np.empty(n)
    pred = np.empty(n, dtype=np.int64)
    settled = np.empty(n, dtype=np.uint8)
    hd = np.empty(cap)
    hv = np.empty(cap, dtype=np.int64)
    cdef Py_ssize_t t = _scan_sparse(indptr, indices, weights, source, visited, 1,
                                     dist, pred, settled, hd, hv)
    d = float(dist[t]) if t >= 0 else np.inf
    return int(t), d, pred


def walk_sparse(const long long[::1] indptr, const int[::1] indices, const double[::1] weights,
                start, want_paths=False):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = indices.shape[0] + 2
    order = np.empty(n, dtype=np.int64)
    step_d = np.empty(max(n - 1, 0))
    visited_arr = np.zeros(n, dtype=np.uint8)
    dist_arr = np.empty(n)
    pred_arr = np.empty(n, dtype=np.int64)
    settled_arr = np.empty(n, dtype=np.uint8)
    hd_arr = np.empty(cap)
    hv_arr = np.empty(cap, dtype=np.int64)

    cdef long long[::1] order_v = order
    cdef double[::1] step_v = step_d
    cdef unsigned char[::1] visited = visited_arr
    cdef double[::1] dist = dist_arr
    cdef long long[::1] pred = pred_arr
    cdef unsigned char[::1] settled = settled_arr
    cdef double[::1] hd = hd_arr
    cdef long long[::1] hv = hv_arr

    cdef bint paths_flag = bool(want_paths)
    paths = [] if paths_flag else None

    cdef Py_ssize_t cur = start, t, i
    order_v[0] = start
    visited[start] = 1
    for i in range(n - 1):
        t = _scan_sparse(indptr, indices, weights, cur, visited, 1,
                         dist, pred, settled, hd, hv)
        if t < 0:
            raise RuntimeError("graph not connected")
        order_v[i + 1] = t
        step_v[i] = dist[t]
        visited[t] = 1
        if paths_flag:
            paths.append(_path_from_pred(pred_arr, cur, t))
        cur = t
    return order, step_d, paths


# ---------------------------------------------------------------------------
# Euclidean point-set kernel


def walk_points(const double[:, ::1] xy, start):
    cdef Py_ssize_t n = xy.shape[0]
    order = np.empty(n, dtype=np.int64)
    step_d = np.empty(max(n - 1, 0))
    visited_arr = np.zeros(n, dtype=np.uint8)

    cdef long long[::1] order_v = order
    cdef double[::1] step_v = step_d
    cdef unsigned char[::1] visited = visited_arr

    cdef Py_ssize_t cur = start, i, j, t
    cdef double cx, cy, dx, dy, d, best
    order_v[0] = start
    visited[start] = 1
    for i in range(n - 1):
        cx = xy[cur, 0]
        cy = xy[cur, 1]
        best = INFINITY
        t = -1
        for j in range(n):
            if visited[j]:
                continue
            dx = xy[j, 0] - cx
            dy = xy[j, 1] - cy
            d = sqrt(dx * dx + dy * dy)
            if d < best:
                best = d
                t = j
        if t < 0:
            raise RuntimeError("no unvisited point left")
        order_v[i + 1] = t
        step_v[i] = best
        visited[t] = 1
        cur = t
    return order, step_d


# ---------------------------------------------------------------------------
# greedy ball cover over uint64 bitsets


def greedy_cover(const double[:, ::1] matrix, double r):
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t words = (n + 63) >> 6
    balls_arr = np.zeros((n, words), dtype=np.uint64)
    unc_arr = np.zeros(words, dtype=np.uint64)
    cdef unsigned long long[:, ::1] balls = balls_arr
    cdef unsigned long long[::1] unc = unc_arr

    cdef Py_ssize_t v, w, k
    for v in range(n):
        for w in range(n):
            if matrix[v, w] <= r:
                balls[v, w >> 6] |= (<unsigned long long>1) << (w & 63)
    for w in range(n):
        unc[w >> 6] |= (<unsigned long long>1) << (w & 63)

    centers = []
    cdef Py_ssize_t remaining = n
    cdef Py_ssize_t best_v
    cdef unsigned long long cnt, best_cnt
    while remaining > 0:
        best_v = -1
        best_cnt = 0
        for v in range(n):
            cnt = 0
            for k in range(words):
                cnt += nuv_popcount(balls[v, k] & unc[k])
            if cnt > best_cnt:
                best_cnt = cnt
                best_v = v
        if best_v < 0:
            raise RuntimeError("no progress in greedy cover")
        centers.append(best_v)
        for k in range(words):
            unc[k] &= ~balls[best_v, k]
        remaining -= <Py_ssize_t>best_cnt
    return np.asarray(centers, dtype=np.int64)
