"""Ball-covering numbers and the two-sided cover/length verification.

N(r) is the minimal number of radius-r balls (graph metric) covering every
vertex.  The walk length L and N are linked in both directions:

* N(r) <= 1 + L/r for every r > 0, certified constructively at any size by
  the centers selected along the walk (walk_cover_selection);
* L <= 2 * integral of N(r) dr over (0, diameter/2), checked exactly as a
  step-function integral over the pairwise-distance breakpoints.

Exact N(r) is set-cover-hard, so it is computed by increasing-cardinality
subset search only up to a size threshold; a greedy upper bound stands in
above it (greedy >= exact pointwise, which keeps the integral inequality a
valid, only weaker, check).
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .graph import ThresholdError, all_pairs_distances
from .walk import nuv_walk, walk_cover_selection

EXACT_COVER_MAX_N = 18

# absorbs ulp-level asymmetry between walk prefix sums and matrix distances
# when re-verifying walk-derived covers; exact/greedy covers verify with 0
_COVER_SLACK = 1e-9


@dataclass(frozen=True)
class CoverResult:
    """A set of centers whose radius-`radius` balls cover every vertex."""

    radius: float
    centers: tuple[int, ...]
    size: int
    method: str  # "exact", "greedy", or "walk-derived"

    def to_json_dict(self):
        return {"radius": self.radius, "centers": list(self.centers),
                "size": self.size, "method": self.method}


def verify_cover(dist_matrix, centers, r, slack=0.0):
    """True when every vertex is within r (+slack) of some center."""
    if not centers:
        return dist_matrix.shape[0] == 0
    sub = dist_matrix[np.asarray(centers, dtype=np.int64)]
    return bool(np.all(sub.min(axis=0) <= r + slack))


@lru_cache(maxsize=256)
def _combos(n, k):
    return np.asarray(list(itertools.combinations(range(n), k)), dtype=np.int64)


def _ball_masks(dist_matrix, r):
    n = dist_matrix.shape[0]
    cov = dist_matrix <= r
    bits = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    return (cov * bits).sum(axis=1, dtype=np.uint64)


def _min_cover_from_masks(masks, n, k_start=1):
    """Lexicographically-first minimum cover, scanning sizes k_start, k_start+1, ..."""
    full = np.uint64((1 << n) - 1)
    for k in range(k_start, n + 1):
        combos = _combos(n, k)
        unions = np.bitwise_or.reduce(masks[combos], axis=1)
        hit = unions == full
        if hit.any():
            return tuple(int(v) for v in combos[int(np.argmax(hit))])
    raise AssertionError("unreachable: the full vertex set always covers")


def exact_cover_number(g, r, threshold=EXACT_COVER_MAX_N, dist_matrix=None):
    """Minimum-cardinality center set by increasing-cardinality subset search.

    Ties among minimum covers break lexicographically.  Refuses instances
    above `threshold` vertices; use greedy_cover there.
    """
    if not (r >= 0.0):
        raise ValueError("radius must be nonnegative")
    if g.n > threshold:
        raise ThresholdError(
            f"exact cover needs n <= {threshold} (got n={g.n}); use greedy_cover")
    M = all_pairs_distances(g) if dist_matrix is None else dist_matrix
    centers = _min_cover_from_masks(_ball_masks(M, r), g.n)
    assert verify_cover(M, centers, r)
    return CoverResult(radius=float(r), centers=centers, size=len(centers),
                       method="exact")


def greedy_cover(g, r, dist_matrix=None):
    """Greedy upper bound on N(r): repeatedly take the vertex covering the
    most uncovered vertices (ties to the smallest index)."""
    if not (r >= 0.0):
        raise ValueError("radius must be nonnegative")
    M = all_pairs_distances(g) if dist_matrix is None else dist_matrix
    centers = kernels.greedy_cover(np.ascontiguousarray(M), float(r))
    centers = tuple(sorted(int(c) for c in centers))
    assert verify_cover(M, centers, r)
    return CoverResult(radius=float(r), centers=centers, size=len(centers),
                       method="greedy")


@dataclass(frozen=True, eq=False)
class CoverProfile:
    """Nonincreasing step function r -> N_hat(r).

    `sizes[k]` holds on [radii[k], radii[k+1]); the last value extends to
    infinity.  radii[0] is always 0 (where every ball is a single vertex).
    """

    radii: np.ndarray
    sizes: np.ndarray
    method: str

    def value_at(self, r):
        if r < self.radii[0]:
            raise ValueError("radius below profile range")
        k = int(np.searchsorted(self.radii, r, side="right")) - 1
        return int(self.sizes[k])

    def integral(self, upper):
        """Exact integral of the step function over [0, upper]."""
        total = 0.0
        radii = self.radii.tolist()
        sizes = self.sizes.tolist()
        for k, lo in enumerate(radii):
            if lo >= upper:
                break
            hi = radii[k + 1] if k + 1 < len(radii) else upper
            total += sizes[k] * (min(hi, upper) - lo)
        return total

    def fit_decay_exponent(self):
        """Least-squares slope alpha of log N_hat against -log r over the
        interior of the profile (1 < N_hat < n, r > 0).  Diagnostic only; no
        pass/fail semantics attached."""
        nmax = int(self.sizes[0])
        keep = (self.radii > 0) & (self.sizes > 1) & (self.sizes < nmax)
        if keep.sum() < 2:
            return None
        x = np.log(self.radii[keep])
        y = np.log(self.sizes[keep].astype(float))
        slope = np.polyfit(x, y, 1)[0]
        return float(-slope)

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "N_hat"])
            for r, s in zip(self.radii.tolist(), self.sizes.tolist()):
                w.writerow([repr(float(r)), int(s)])


def distance_breakpoints(dist_matrix):
    """Sorted distinct values of the distance matrix (always includes 0)."""
    return np.unique(dist_matrix)


def cover_profile(g, method="greedy", max_radii=None, dist_matrix=None,
                  exact_threshold=EXACT_COVER_MAX_N):
    """Evaluate N_hat at the pairwise-distance breakpoints.

    N(r) only changes at breakpoints, so the resulting step function is the
    whole profile with no discretization error.  `max_radii` subsamples the
    breakpoint grid (keeping 0 and the diameter); holding each value to the
    right keeps the profile a pointwise upper bound of N, so integral checks
    stay valid, just coarser.  The greedy profile is post-processed to its
    nonincreasing envelope (true N is nonincreasing; greedy alone need not
    be).
    """
    if method not in ("exact", "greedy"):
        raise ValueError(f"unknown profile method {method!r}")
    M = all_pairs_distances(g) if dist_matrix is None else dist_matrix
    radii = distance_breakpoints(M)
    if max_radii is not None and len(radii) > max_radii:
        idx = np.unique(np.round(np.linspace(0, len(radii) - 1, max_radii)).astype(int))
        radii = radii[idx]
    n = g.n
    sizes = np.empty(len(radii), dtype=np.int64)
    if method == "exact":
        if n > exact_threshold:
            raise ThresholdError(
                f"exact profile needs n <= {exact_threshold} (got n={n})")
        # descending radii with a warm start: N is nonincreasing in r, so the
        # minimum size found at a larger radius lower-bounds all smaller radii
        k_start = 1
        for i in range(len(radii) - 1, -1, -1):
            centers = _min_cover_from_masks(_ball_masks(M, radii[i]), n, k_start)
            sizes[i] = len(centers)
            k_start = len(centers)
    else:
        Mc = np.ascontiguousarray(M)
        for i in range(len(radii) - 1, -1, -1):
            sizes[i] = len(kernels.greedy_cover(Mc, float(radii[i])))
        sizes = np.minimum.accumulate(sizes[::-1])[::-1]
    return CoverProfile(radii=radii, sizes=sizes, method=method)


def ball_long_step_count(dist_matrix, walk, center, r):
    """Number of vertices within distance r of `center` whose walk step is
    longer than 2r.  At most one such vertex can exist (the last-visited
    vertex of the ball); everything else must hop at most 2r."""
    n = len(walk.order)
    step_of = np.zeros(n)
    step_of[walk.order[:-1]] = walk.step_distances
    in_ball = dist_matrix[center] <= r
    return int(np.count_nonzero(in_ball & (step_of > 2.0 * r)))


@dataclass(frozen=True)
class Proposition1Report:
    """Both halves of the cover/length relationship on one instance."""

    n: int
    start: int
    total_length: float
    graph_diameter: float
    profile_method: str
    radii: tuple[float, ...]
    bounds: tuple[float, ...]           # 1 + L/r per radius
    exact_sizes: tuple[int, ...] | None
    exact_pass: tuple[bool, ...] | None
    walk_sizes: tuple[int, ...]
    walk_cover_valid: tuple[bool, ...]
    walk_pass: tuple[bool, ...]
    cover_integral: float               # 2 * integral of N_hat over (0, diameter/2)
    integral_pass: bool

    @property
    def all_pass(self):
        checks = list(self.walk_pass) + list(self.walk_cover_valid) + [self.integral_pass]
        if self.exact_pass is not None:
            checks += list(self.exact_pass)
        return all(checks)

    def to_json_dict(self):
        return {
            "n": self.n,
            "start": self.start,
            "total_length": self.total_length,
            "graph_diameter": self.graph_diameter,
            "profile_method": self.profile_method,
            "radii": list(self.radii),
            "bounds": list(self.bounds),
            "exact_sizes": None if self.exact_sizes is None else list(self.exact_sizes),
            "exact_pass": None if self.exact_pass is None else list(self.exact_pass),
            "walk_sizes": list(self.walk_sizes),
            "walk_cover_valid": list(self.walk_cover_valid),
            "walk_pass": list(self.walk_pass),
            "cover_integral": self.cover_integral,
            "integral_pass": self.integral_pass,
            "all_pass": self.all_pass,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)


def verify_proposition1(g, start, radii=None, exact_threshold=EXACT_COVER_MAX_N,
                        profile_max_radii=None):
    """Check N(r) <= 1 + L/r (exact N where feasible, walk-derived cover at
    any size) and L <= 2 * integral of the cover profile up to diameter/2."""
    M = all_pairs_distances(g)
    delta = float(M.max())
    w = nuv_walk(g, start)
    L = w.total_length
    exact_mode = g.n <= exact_threshold
    if profile_max_radii is None and not exact_mode:
        profile_max_radii = 257
    profile = cover_profile(g, method="exact" if exact_mode else "greedy",
                            max_radii=profile_max_radii, dist_matrix=M,
                            exact_threshold=exact_threshold)
    if radii is None:
        if exact_mode:
            radii = [float(r) for r in profile.radii if r > 0]
        else:
            radii = [delta / (2.0 ** k) for k in range(1, 9)]
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")

    bounds, exact_sizes, exact_pass = [], [], []
    walk_sizes, walk_valid, walk_pass = [], [], []
    for r in radii:
        bound = 1.0 + L / r
        bounds.append(bound)
        if exact_mode:
            size = profile.value_at(r)
            exact_sizes.append(size)
            exact_pass.append(size <= bound)
        wc = walk_cover_selection(w, r)
        walk_sizes.append(wc.size)
        walk_valid.append(verify_cover(M, wc.centers, r, slack=_COVER_SLACK * (1.0 + r)))
        walk_pass.append(wc.size <= bound)

    integral = 2.0 * profile.integral(delta / 2.0)
    return Proposition1Report(
        n=g.n, start=int(start), total_length=L, graph_diameter=delta,
        profile_method=profile.method,
        radii=tuple(radii), bounds=tuple(bounds),
        exact_sizes=tuple(exact_sizes) if exact_mode else None,
        exact_pass=tuple(exact_pass) if exact_mode else None,
        walk_sizes=tuple(walk_sizes), walk_cover_valid=tuple(walk_valid),
        walk_pass=tuple(walk_pass),
        cover_integral=integral, integral_pass=bool(L <= integral))
