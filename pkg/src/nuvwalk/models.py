"""Random-instance generators: square, grid, mean-field, and the linear graph.

Reproducibility contract: every instance is a pure function of
(model, size, seed), independent of platform and worker count.

* RNG: NumPy's Philox4x64-10 counter-based generator, keyed through
  SeedSequence(seed).  Replicate/start streams are derived with
  SeedSequence(seed, spawn_key=...), i.e. hash(seed, index).
* Draw order is fixed: points in index order for the square model; edges in
  (u < v) lexicographic order for grid and mean-field.
* Exponential lengths via the inverse CDF, -mean*ln(1-U).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import WeightedGraph

MODELS = ("square", "grid", "mean_field", "linear")
SCALINGS = ("unit", "nearest-neighbor")
GRID_LENGTH_LAWS = ("exp1", "uniform")

# smallest positive quantile step; clamps the measure-zero U=0 draw so edge
# lengths stay strictly positive
_TINY_Q = 2.0 ** -53


def rng_from_seed(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def derive_seed(base, *path):
    """64-bit stream seed for (base, path), stable across platforms."""
    ss = np.random.SeedSequence(int(base), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])


def exponential_lengths(rng, size, mean):
    u = rng.random(size)
    return np.maximum(-mean * np.log1p(-u), mean * _TINY_Q)


@dataclass(frozen=True, eq=False)
class GeometricInstance:
    """Points in the plane plus their complete Euclidean graph (built lazily)."""

    points: np.ndarray
    _graph_box: list = field(default_factory=list, repr=False, compare=False)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def graph(self):
        if not self._graph_box:
            self._graph_box.append(WeightedGraph.from_dense(euclidean_matrix(self.points)))
        return self._graph_box[0]


def euclidean_matrix(points):
    x = points[:, 0]
    y = points[:, 1]
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    return np.sqrt(dx * dx + dy * dy)


def gen_square(n, seed, scaling="unit"):
    """n i.i.d. uniform points in the unit square (complete Euclidean graph).

    scaling="nearest-neighbor" multiplies coordinates by sqrt(n), giving the
    area-n square in which nearest-neighbor spacing is order 1.
    """
    if n < 2:
        raise ValueError("square model needs n >= 2")
    if scaling not in SCALINGS:
        raise ValueError(f"unknown scaling {scaling!r}")
    rng = rng_from_seed(seed)
    pts = rng.random((int(n), 2))
    if scaling == "nearest-neighbor":
        pts = pts * np.sqrt(float(n))
    pts.setflags(write=False)
    return GeometricInstance(points=pts)


def gen_grid(m, seed, lengths="exp1"):
    """m x m lattice with i.i.d. edge lengths (default Exponential(mean 1)).

    Vertex (row, col) is index row*m + col; the 2m(m-1) edges are drawn in
    (u < v) lexicographic order: for each u first the right neighbor, then
    the down neighbor.
    """
    m = int(m)
    if m < 2:
        raise ValueError("grid model needs m >= 2")
    if lengths not in GRID_LENGTH_LAWS:
        raise ValueError(f"unknown grid length law {lengths!r}")
    pairs = []
    for row in range(m):
        for col in range(m):
            u = row * m + col
            if col + 1 < m:
                pairs.append((u, u + 1))
            if row + 1 < m:
                pairs.append((u, u + m))
    pairs.sort()
    rng = rng_from_seed(seed)
    if lengths == "exp1":
        w = exponential_lengths(rng, len(pairs), 1.0)
    else:
        w = np.maximum(rng.random(len(pairs)), _TINY_Q)
    return WeightedGraph.from_edges(m * m, [(u, v, lw) for (u, v), lw in zip(pairs, w.tolist())])


def gen_mean_field(n, seed):
    """Complete graph with i.i.d. Exponential(mean n) edge lengths (dense)."""
    n = int(n)
    if n < 2:
        raise ValueError("mean-field model needs n >= 2")
    rng = rng_from_seed(seed)
    iu, iv = np.triu_indices(n, 1)
    w = exponential_lengths(rng, len(iu), float(n))
    matrix = np.zeros((n, n))
    matrix[iu, iv] = w
    matrix[iv, iu] = w
    return WeightedGraph.from_dense(matrix)


def gen_linear(n):
    """Path graph 0-1-...-(n-1) with slowly decreasing lengths 1 - i/n^2.

    Deterministic; the adversarial instance whose walk length varies by a
    factor approaching 2 over starting vertices.
    """
    n = int(n)
    if n < 2:
        raise ValueError("linear model needs n >= 2")
    nn = float(n) * float(n)
    return WeightedGraph.from_edges(
        n, [(i - 1, i, 1.0 - i / nn) for i in range(1, n)])


@dataclass(frozen=True)
class InstanceSpec:
    """Everything needed to regenerate one instance."""

    model: str
    n: int | None = None
    m: int | None = None
    seed: int | None = None
    scaling: str = "unit"
    grid_lengths: str = "exp1"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.model == "grid":
            if self.m is None or self.m < 2:
                raise ValueError("grid model needs m >= 2")
        else:
            if self.n is None or self.n < 2:
                raise ValueError(f"{self.model} model needs n >= 2")
        if self.model != "linear" and self.seed is None:
            raise ValueError(f"{self.model} model needs an explicit seed")
        if self.scaling not in SCALINGS:
            raise ValueError(f"unknown scaling {self.scaling!r}")
        if self.grid_lengths not in GRID_LENGTH_LAWS:
            raise ValueError(f"unknown grid length law {self.grid_lengths!r}")

    @property
    def size(self):
        """Vertex count of generated instances."""
        return self.m * self.m if self.model == "grid" else self.n

    def with_seed(self, seed):
        return InstanceSpec(model=self.model, n=self.n, m=self.m, seed=seed,
                            scaling=self.scaling, grid_lengths=self.grid_lengths)

    def generate(self):
        if self.model == "square":
            return gen_square(self.n, self.seed, self.scaling)
        if self.model == "grid":
            return gen_grid(self.m, self.seed, self.grid_lengths)
        if self.model == "mean_field":
            return gen_mean_field(self.n, self.seed)
        return gen_linear(self.n)


def normalization_factor(spec):
    """Per-record normalization matching the summary tables: L/sqrt(n) for the
    unit square, L/n for everything at nearest-neighbor scale."""
    n = spec.size
    if spec.model == "square" and spec.scaling == "unit":
        return 1.0 / np.sqrt(float(n))
    return 1.0 / float(n)
