"""Weighted-graph representation and shortest-path machinery.

Vertices are integers 0..n-1.  Edge lengths are positive finite float64.
Distance comparisons are exact float comparisons with vertex-index
tie-breaking; continuous random lengths make real ties almost surely absent,
and the tie-break makes degenerate inputs deterministic.

Two storage modes:

* sparse: CSR adjacency, binary-heap Dijkstra;
* dense: n x n length matrix for complete graphs, array-scan Dijkstra
  (O(n^2) per source, which beats the heap on complete graphs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels


class DisconnectedGraphError(ValueError):
    """Input graph is not connected."""


class ThresholdError(RuntimeError):
    """An exact algorithm was requested above its instance-size threshold."""


@dataclass(frozen=True)
class PathResult:
    """A shortest route to `target`: its length and the vertex sequence."""

    target: int
    distance: float
    path: list[int]


class WeightedGraph:
    """Immutable undirected graph with positive edge lengths."""

    __slots__ = ("n", "m", "dense", "_eu", "_ev", "_ew", "_matrix",
                 "_indptr", "_indices", "_weights", "_apd")

    def __init__(self, n, eu, ev, ew, matrix=None):
        # internal: use from_edges / from_dense
        self.n = int(n)
        self._eu = eu
        self._ev = ev
        self._ew = ew
        self.m = len(ew)
        self._matrix = matrix
        self.dense = matrix is not None
        if not self.dense:
            self._indptr, self._indices, self._weights = _build_csr(self.n, eu, ev, ew)
        else:
            self._indptr = self._indices = self._weights = None
        self._apd = None
        for a in (eu, ev, ew):
            a.setflags(write=False)
        if matrix is not None:
            matrix.setflags(write=False)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable of (u, v, length).

        Validates: indices in range, no self-loops, no parallel edges,
        lengths positive and finite, graph connected.  A complete edge set
        is stored densely.
        """
        n = int(n)
        if n < 1:
            raise ValueError("vertex count must be >= 1")
        edges = list(edges)
        if edges:
            eu = np.asarray([e[0] for e in edges], dtype=np.int64)
            ev = np.asarray([e[1] for e in edges], dtype=np.int64)
            ew = np.asarray([e[2] for e in edges], dtype=np.float64)
        else:
            eu = np.empty(0, dtype=np.int64)
            ev = np.empty(0, dtype=np.int64)
            ew = np.empty(0, dtype=np.float64)
        if len(eu) and (eu.min() < 0 or eu.max() >= n or ev.min() < 0 or ev.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(eu == ev):
            raise ValueError("self-loops are not allowed")
        if not np.all(np.isfinite(ew)) or np.any(ew <= 0.0):
            raise ValueError("edge lengths must be positive and finite")
        lo = np.minimum(eu, ev)
        hi = np.maximum(eu, ev)
        order = np.lexsort((hi, lo))
        lo, hi, ew = lo[order], hi[order], ew[order]
        if len(lo) > 1 and np.any((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])):
            raise ValueError("parallel edges are not allowed")
        _check_connected(n, lo, hi)
        if n > 1 and len(lo) == n * (n - 1) // 2:
            matrix = np.zeros((n, n))
            matrix[lo, hi] = ew
            matrix[hi, lo] = ew
            return cls(n, lo, hi, ew, matrix=matrix)
        return cls(n, lo, hi, ew)

    @classmethod
    def from_dense(cls, matrix):
        """Build a complete graph from a symmetric length matrix (zero diagonal)."""
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("length matrix must be square")
        n = matrix.shape[0]
        if n < 1:
            raise ValueError("vertex count must be >= 1")
        if np.any(np.diagonal(matrix) != 0.0):
            raise ValueError("length matrix diagonal must be zero")
        off = ~np.eye(n, dtype=bool)
        if not np.all(np.isfinite(matrix[off])) or np.any(matrix[off] <= 0.0):
            raise ValueError("edge lengths must be positive and finite")
        if not np.array_equal(matrix, matrix.T):
            raise ValueError("length matrix must be symmetric")
        lo, hi = np.triu_indices(n, 1)
        return cls(n, lo.astype(np.int64), hi.astype(np.int64), matrix[lo, hi],
                   matrix=matrix)

    # -- accessors -----------------------------------------------------------

    def edge_arrays(self):
        """(u, v, length) arrays with u < v, lexicographically sorted."""
        return self._eu, self._ev, self._ew

    @property
    def lengths_matrix(self):
        if not self.dense:
            raise ValueError("lengths_matrix is only stored for dense graphs")
        return self._matrix

    def edge_length(self, u, v):
        """Length of the edge (u, v); raises if the pair is not adjacent."""
        _check_vertex(self, u)
        _check_vertex(self, v)
        if u == v:
            raise ValueError("no self-loops")
        if self.dense:
            return float(self._matrix[u, v])
        lo, hi = (u, v) if u < v else (v, u)
        i = np.searchsorted(self._eu, lo)
        while i < self.m and self._eu[i] == lo:
            if self._ev[i] == hi:
                return float(self._ew[i])
            i += 1
        raise ValueError(f"vertices {u} and {v} are not adjacent")

    def csr(self):
        if self.dense:
            raise ValueError("dense graphs have no CSR form")
        return self._indptr, self._indices, self._weights

    def __repr__(self):
        mode = "dense" if self.dense else "sparse"
        return f"WeightedGraph(n={self.n}, m={self.m}, {mode})"


def _build_csr(n, eu, ev, ew):
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, eu, 1)
    np.add.at(deg, ev, 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(2 * len(ew), dtype=np.int32)
    weights = np.empty(2 * len(ew), dtype=np.float64)
    # neighbor lists in ascending order: emit (u,v) pairs sorted by source
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    www = np.concatenate([ew, ew])
    order = np.lexsort((dst, src))
    indices[:] = dst[order]
    weights[:] = www[order]
    for a in (indptr, indices, weights):
        a.setflags(write=False)
    return indptr, indices, weights


def _check_connected(n, lo, hi):
    parent = np.arange(n, dtype=np.int64)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for a, b in zip(lo.tolist(), hi.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    if comps != 1:
        raise DisconnectedGraphError(f"graph is disconnected ({comps} components)")


def _check_vertex(g, v):
    if not isinstance(v, (int, np.integer)) or not (0 <= v < g.n):
        raise ValueError(f"invalid vertex index {v!r} for n={g.n}")


def _sssp(g, source):
    """Full single-source shortest paths: (dist, pred) arrays."""
    if g.dense:
        return kernels.sssp_dense(g.lengths_matrix, int(source))
    indptr, indices, weights = g.csr()
    return kernels.sssp_sparse(indptr, indices, weights, int(source))


def shortest_path(g, source, target):
    """Minimum-length path between two vertices.

    Ties among equal-length paths are broken by preferring the smaller
    predecessor index at each settled vertex.  The search always runs from
    the smaller-indexed endpoint, so d(u, v) == d(v, u) exactly.
    """
    _check_vertex(g, source)
    _check_vertex(g, target)
    source = int(source)
    target = int(target)
    if source == target:
        return PathResult(target=target, distance=0.0, path=[source])
    lo, hi = (source, target) if source < target else (target, source)
    dist, pred = _sssp(g, lo)
    if not np.isfinite(dist[hi]):
        raise DisconnectedGraphError("target not reachable")  # cannot happen post-construction
    path = _pred_path(pred, lo, hi)
    if source > target:
        path.reverse()
    return PathResult(target=target, distance=float(dist[hi]), path=path)


def _pred_path(pred, source, target):
    path = [int(target)]
    v = int(target)
    while v != source:
        v = int(pred[v])
        path.append(v)
    path.reverse()
    return path


def nearest_unvisited(g, source, visited):
    """Closest vertex outside `visited`, found by a shortest-path search from
    `source` terminated when the first unvisited vertex is settled.

    Exact distance ties break to the smallest vertex index.  `source` must be
    in `visited`; raises ValueError when every vertex is visited.
    """
    _check_vertex(g, source)
    source = int(source)
    mask = np.zeros(g.n, dtype=np.uint8)
    for v in visited:
        _check_vertex(g, v)
        mask[v] = 1
    if not mask[source]:
        raise ValueError("source must be a visited vertex")
    if mask.all():
        raise ValueError("all vertices are visited")
    if g.dense:
        t, d, pred = kernels.nuv_step_dense(g.lengths_matrix, source, mask)
    else:
        indptr, indices, weights = g.csr()
        t, d, pred = kernels.nuv_step_sparse(indptr, indices, weights, source, mask)
    if t < 0:
        raise DisconnectedGraphError("no unvisited vertex reachable")
    return PathResult(target=int(t), distance=float(d), path=_pred_path(pred, source, t))


def all_pairs_distances(g):
    """Symmetric distance matrix (n single-source searches; meant for n <= ~2000).

    Each (i, j) entry comes from the search rooted at min(i, j), matching
    shortest_path, so the matrix is exactly symmetric.  Cached per graph.
    """
    if g._apd is not None:
        return g._apd
    if g.dense:
        rows = kernels.apsp_dense(g.lengths_matrix)
    else:
        indptr, indices, weights = g.csr()
        rows = kernels.apsp_sparse(indptr, indices, weights)
    out = np.triu(rows) + np.triu(rows, 1).T
    out.setflags(write=False)
    g._apd = out
    return out


def diameter(g):
    """Largest pairwise distance."""
    return float(all_pairs_distances(g).max())


# -- interchange format ------------------------------------------------------
# Line-oriented text: header "n m", then m lines "u v length" (0-based
# indices, decimal float lengths).


def write_graph_file(g, path):
    eu, ev, ew = g.edge_arrays()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v, w in zip(eu.tolist(), ev.tolist(), ew.tolist()):
            fh.write(f"{u} {v} {w!r}\n")


def read_graph_file(path):
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: bad header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'u v length'")
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
    if len(edges) != m:
        raise ValueError(f"{path}: header promised {m} edges, found {len(edges)}")
    return WeightedGraph.from_edges(n, edges)
