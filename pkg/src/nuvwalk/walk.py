"""The nearest-unvisited-vertex walk engine.

From a start vertex, repeatedly move along the shortest path to the closest
not-yet-visited vertex until every vertex is visited.  Deterministic given
(graph, start); exact distance ties break to the smallest vertex index.

The walk is recorded as vertex-visit events (visit order plus step
distances); per-step vertex paths are retained only on request since they
dominate memory on large instances.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .graph import WeightedGraph, _check_vertex, shortest_path
from .models import GeometricInstance


@dataclass(frozen=True, eq=False)
class WalkResult:
    """Visit order v_0..v_{n-1}, step distances d(v_i, v_{i+1}), total length."""

    start: int
    order: np.ndarray
    step_distances: np.ndarray
    step_paths: list[list[int]] | None
    total_length: float

    @property
    def n(self):
        return len(self.order)

    def prefix_lengths(self):
        """Walk length accumulated up to each visit (sequential summation)."""
        out = np.empty(self.n)
        acc = 0.0
        out[0] = 0.0
        for i, d in enumerate(self.step_distances.tolist()):
            acc += d
            out[i + 1] = acc
        return out

    def to_json_dict(self):
        d = {
            "start": int(self.start),
            "order": [int(v) for v in self.order],
            "step_distances": [float(x) for x in self.step_distances],
            "total_length": float(self.total_length),
        }
        if self.step_paths is not None:
            d["step_paths"] = [[int(v) for v in p] for p in self.step_paths]
        return d

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)

    def write_steps_csv(self, path):
        """One row per step: step index, endpoints, distance, prefix length."""
        zeta = self.prefix_lengths()
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "from", "to", "distance", "prefix_length"])
            for i, d in enumerate(self.step_distances.tolist()):
                w.writerow([i, int(self.order[i]), int(self.order[i + 1]),
                            repr(float(d)), repr(float(zeta[i + 1]))])


def nuv_walk(g, start, with_paths=False):
    """Run the NUV walk on a WeightedGraph or a GeometricInstance.

    Geometric instances use the metric shortcut (the shortest path between
    two points of a complete Euclidean graph is the direct edge), so no
    Dijkstra is needed and step paths are single edges.
    """
    if isinstance(g, GeometricInstance):
        n = g.n
        start = int(start)
        if not (0 <= start < n):
            raise ValueError(f"invalid start vertex {start} for n={n}")
        if n == 1:
            return _trivial_walk(start, with_paths)
        order, step_d = kernels.walk_points(np.ascontiguousarray(g.points), start)
        paths = None
        if with_paths:
            paths = [[int(order[i]), int(order[i + 1])] for i in range(n - 1)]
    elif isinstance(g, WeightedGraph):
        _check_vertex(g, start)
        start = int(start)
        if g.n == 1:
            return _trivial_walk(start, with_paths)
        if g.dense:
            order, step_d, paths = kernels.walk_dense(g.lengths_matrix, start, with_paths)
        else:
            indptr, indices, weights = g.csr()
            order, step_d, paths = kernels.walk_sparse(indptr, indices, weights,
                                                       start, with_paths)
    else:
        raise TypeError(f"cannot walk on {type(g).__name__}")
    total = 0.0
    for d in step_d.tolist():
        total += d
    return WalkResult(start=start, order=order, step_distances=step_d,
                      step_paths=paths, total_length=total)


def _trivial_walk(start, with_paths):
    return WalkResult(start=start, order=np.asarray([start], dtype=np.int64),
                      step_distances=np.empty(0),
                      step_paths=[] if with_paths else None, total_length=0.0)


def tour_length(g, walk):
    """Walk length plus the closing distance back to the start (tour convention)."""
    last = int(walk.order[-1])
    if last == walk.start:
        return walk.total_length
    if isinstance(g, GeometricInstance):
        dx = g.points[last, 0] - g.points[walk.start, 0]
        dy = g.points[last, 1] - g.points[walk.start, 1]
        closing = float(np.sqrt(dx * dx + dy * dy))
    else:
        closing = shortest_path(g, last, walk.start).distance
    return walk.total_length + closing


def walk_cover_selection(walk, r):
    """Centers selected along the walk: take the start, then repeatedly the
    first vertex more than r further along the walk than the last selection.

    The selected set covers every vertex within graph distance r and has at
    most 1 + total_length/r members.
    """
    from .cover import CoverResult  # CoverResult lives with the cover verifiers

    if not (r > 0.0):
        raise ValueError("radius must be positive")
    zeta = walk.prefix_lengths()
    centers = [int(walk.order[0])]
    last = 0.0
    for i in range(1, walk.n):
        if zeta[i] - last > r:
            centers.append(int(walk.order[i]))
            last = float(zeta[i])
    return CoverResult(radius=float(r), centers=tuple(sorted(centers)),
                       size=len(centers), method="walk-derived")


@dataclass(frozen=True)
class StepHistogram:
    """Counts of step distances per bin [k*width, (k+1)*width)."""

    bin_width: float
    counts: tuple[int, ...]

    @property
    def total(self):
        return sum(self.counts)

    def bin_edges(self):
        return [(k * self.bin_width, (k + 1) * self.bin_width)
                for k in range(len(self.counts))]

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_lo", "bin_hi", "count"])
            for (lo, hi), c in zip(self.bin_edges(), self.counts):
                w.writerow([repr(lo), repr(hi), c])


def step_histogram(walk, bin_width):
    if not (bin_width > 0.0):
        raise ValueError("bin width must be positive")
    steps = walk.step_distances
    if len(steps) == 0:
        return StepHistogram(bin_width=float(bin_width), counts=())
    idx = np.floor(steps / bin_width).astype(np.int64)
    counts = np.bincount(idx)
    return StepHistogram(bin_width=float(bin_width), counts=tuple(int(c) for c in counts))
