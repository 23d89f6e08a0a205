"""MST length and exact small-instance TSP walks.

The TSP here is the shortest *walk* from a fixed start visiting every vertex,
revisits allowed; that makes it an optimal path in the shortest-path metric
closure, solved by Held-Karp dynamic programming over (subset, last) states.
The tour variant closes the cycle back to the start.  Both conventions are
computed and labelled; no claim depends on which one is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graph import ThresholdError, _check_vertex, all_pairs_distances
from .walk import nuv_walk

EXACT_TSP_MAX_N = 15


@dataclass(frozen=True)
class BaselineResult:
    mst_length: float
    tsp_length: float | None = None
    tsp_order: tuple[int, ...] | None = None
    tsp_tour_length: float | None = None
    tsp_skipped_reason: str | None = None

    def to_json_dict(self):
        return {
            "mst_length": self.mst_length,
            "tsp_length": self.tsp_length,
            "tsp_order": None if self.tsp_order is None else list(self.tsp_order),
            "tsp_tour_length": self.tsp_tour_length,
            "tsp_skipped_reason": self.tsp_skipped_reason,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)


def mst_length(g):
    """Total length of the minimum spanning tree (Kruskal, index tie-break)."""
    if g.n == 1:
        return 0.0
    eu, ev, ew = g.edge_arrays()
    order = np.lexsort((ev, eu, ew))
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    accepted = 0
    eu_l, ev_l, ew_l = eu.tolist(), ev.tolist(), ew.tolist()
    for i in order.tolist():
        ra, rb = find(eu_l[i]), find(ev_l[i])
        if ra != rb:
            parent[ra] = rb
            total += ew_l[i]
            accepted += 1
            if accepted == g.n - 1:
                break
    if accepted != g.n - 1:
        raise AssertionError("unreachable: connected graphs always span")
    return total


def _held_karp(g, start, threshold, dist_matrix=None):
    """(others, dp_full, parents): optimal-path DP over the metric closure."""
    if g.n > threshold:
        raise ThresholdError(
            f"exact TSP needs n <= {threshold} (got n={g.n})")
    _check_vertex(g, start)
    start = int(start)
    D = (all_pairs_distances(g) if dist_matrix is None else dist_matrix).tolist()
    others = [v for v in range(g.n) if v != start]
    m = len(others)
    if m == 0:
        return others, [0.0], [[-1]]
    size = 1 << m
    INF = float("inf")
    dp = [[INF] * m for _ in range(size)]
    par = [[-1] * m for _ in range(size)]
    for j in range(m):
        dp[1 << j][j] = D[start][others[j]]
    for mask in range(1, size):
        row = dp[mask]
        for j in range(m):
            if not (mask >> j) & 1:
                continue
            cur = row[j]
            if cur == INF:
                continue
            Dj = D[others[j]]
            for k in range(m):
                if (mask >> k) & 1:
                    continue
                nm = mask | (1 << k)
                nd = cur + Dj[others[k]]
                if nd < dp[nm][k]:
                    dp[nm][k] = nd
                    par[nm][k] = j
    return others, dp, par


def _best_final(dp_row):
    best, bj = float("inf"), -1
    for j, v in enumerate(dp_row):
        if v < best:
            best, bj = v, j
    return best, bj


def _reconstruct(others, par, last, mask, start):
    seq = []
    j = last
    while j >= 0:
        seq.append(others[j])
        pj = par[mask][j]
        mask ^= 1 << j
        j = pj
    seq.reverse()
    return [start] + seq


def exact_tsp_walk(g, start, threshold=EXACT_TSP_MAX_N, dist_matrix=None):
    """Length and visit order of the shortest walk from `start` through all
    vertices (revisits allowed: evaluated on the metric closure)."""
    others, dp, par = _held_karp(g, start, threshold, dist_matrix)
    m = len(others)
    if m == 0:
        return 0.0, [int(start)]
    full = (1 << m) - 1
    best, bj = _best_final(dp[full])
    return best, _reconstruct(others, par, bj, full, int(start))


def exact_tsp_tour(g, start, threshold=EXACT_TSP_MAX_N, dist_matrix=None):
    """Length of the shortest closed tour from `start` through all vertices."""
    others, dp, par = _held_karp(g, start, threshold, dist_matrix)
    m = len(others)
    if m == 0:
        return 0.0
    D = (all_pairs_distances(g) if dist_matrix is None else dist_matrix).tolist()
    full = (1 << m) - 1
    best = float("inf")
    start = int(start)
    for j in range(m):
        v = dp[full][j]
        if v == float("inf"):
            continue
        cand = v + D[others[j]][start]
        if cand < best:
            best = cand
    return best


def nuv_tsp_ratio(g, start, threshold=EXACT_TSP_MAX_N):
    """L_NUV / L_TSP for the same start; always >= 1."""
    tsp_len, _ = exact_tsp_walk(g, start, threshold=threshold)
    walk_len = nuv_walk(g, start).total_length
    return walk_len / tsp_len


def compute_baselines(g, start=0, include_tsp="auto", threshold=EXACT_TSP_MAX_N):
    """MST length plus, when feasible or requested, the exact TSP walk/tour."""
    mst = mst_length(g)
    want = g.n <= threshold if include_tsp == "auto" else bool(include_tsp)
    if not want:
        return BaselineResult(mst_length=mst)
    try:
        tsp_len, order = exact_tsp_walk(g, start, threshold=threshold)
        tour_len = exact_tsp_tour(g, start, threshold=threshold)
    except ThresholdError as exc:
        return BaselineResult(mst_length=mst, tsp_skipped_reason=str(exc))
    return BaselineResult(mst_length=mst, tsp_length=tsp_len,
                          tsp_order=tuple(order), tsp_tour_length=tour_len)
