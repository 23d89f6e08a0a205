"""Monte-Carlo harness: replicated walks over random instances.

Replicate r regenerates its instance from the derived seed
hash(base_seed, r, 0) and draws its start vertices from hash(base_seed, r, 1),
so results are byte-identical at any worker count and replicates can run in
any order.  Aggregates are derived data only: everything in the summary is
recomputable from the per-walk records.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat

import numpy as np

from .cover import cover_profile
from .baselines import mst_length
from .graph import ThresholdError, diameter
from .models import (GeometricInstance, InstanceSpec, derive_seed,
                     normalization_factor, rng_from_seed)
from .walk import nuv_walk

STATISTICS = ("length", "normalized_length", "sd", "variance_decomposition",
              "start_ratio", "diameter", "mst", "cover_profile")
DEFAULT_STATISTICS = ("length", "normalized_length", "sd")

_PROFILE_MAX_RADII = 257  # breakpoint subsample for large-n cover profiles


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    seed: int
    n: int | None = None
    m: int | None = None
    replicates: int = 100
    starts: int = 1
    statistics: tuple[str, ...] = DEFAULT_STATISTICS
    out_dir: str | None = None
    scaling: str = "unit"
    grid_lengths: str = "exp1"
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        unknown = [s for s in self.statistics if s not in STATISTICS]
        if unknown:
            raise ValueError(f"unknown statistics {unknown}; choose from {STATISTICS}")
        self.instance_spec()  # validates model/size/seed combination

    def instance_spec(self):
        return InstanceSpec(model=self.model, n=self.n, m=self.m, seed=self.seed,
                            scaling=self.scaling, grid_lengths=self.grid_lengths)

    def to_json_dict(self):
        return {
            "model": self.model, "seed": self.seed, "n": self.n, "m": self.m,
            "replicates": self.replicates, "starts": self.starts,
            "statistics": list(self.statistics), "out_dir": self.out_dir,
            "scaling": self.scaling, "grid_lengths": self.grid_lengths,
            "workers": self.workers,
        }


_INT_KEYS = ("n", "m", "seed", "replicates", "starts", "workers")
_STR_KEYS = ("model", "out_dir", "scaling", "grid_lengths")


def config_from_file(path):
    """Flat key-value text: one `key = value` per line, # comments allowed."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _STR_KEYS:
                values[key] = val
            elif key == "statistics":
                values[key] = tuple(s.strip() for s in val.split(",") if s.strip())
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if "model" not in values or "seed" not in values:
        raise ValueError(f"{path}: 'model' and 'seed' are required")
    return ExperimentConfig(**values)


@dataclass(frozen=True)
class WalkRecord:
    replicate: int
    seed: int
    start: int
    length: float
    normalized: float


def _draw_starts(seed, n, k):
    """k starts, uniform without replacement while k <= n (argsort of one
    uniform vector per graph keeps the draw platform-stable)."""
    rng = rng_from_seed(seed)
    if k <= n:
        u = rng.random(n)
        return np.argsort(u, kind="stable")[:k].tolist()
    return np.minimum((rng.random(k) * n).astype(np.int64), n - 1).tolist()


def _as_graph(instance):
    return instance.graph if isinstance(instance, GeometricInstance) else instance


def _replicate_payload(cfg, r):
    spec = cfg.instance_spec().with_seed(derive_seed(cfg.seed, r, 0))
    instance = spec.generate()
    n = spec.size
    starts = _draw_starts(derive_seed(cfg.seed, r, 1), n, cfg.starts)
    lengths = [nuv_walk(instance, s).total_length for s in starts]
    payload = {"replicate": r, "seed": spec.seed, "starts": starts, "lengths": lengths}
    if "mst" in cfg.statistics:
        payload["mst"] = mst_length(_as_graph(instance))
    if "diameter" in cfg.statistics:
        payload["diameter"] = diameter(_as_graph(instance))
    if "cover_profile" in cfg.statistics and r == 0:
        profile = cover_profile(_as_graph(instance), method="greedy",
                                max_radii=_PROFILE_MAX_RADII)
        payload["cover_profile"] = (profile.radii.tolist(), profile.sizes.tolist())
    return payload


@dataclass(frozen=True, eq=False)
class ExperimentSummary:
    config: ExperimentConfig
    n_vertices: int
    records: tuple[WalkRecord, ...]
    aggregates: dict
    errors: dict

    def to_json_dict(self):
        return {
            "config": self.config.to_json_dict(),
            "n_vertices": self.n_vertices,
            "record_count": len(self.records),
            "aggregates": self.aggregates,
            "errors": self.errors,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)

    def write_records_csv(self, path):
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh)
            w.writerow(["replicate", "seed", "start", "length", "normalized_length"])
            for rec in self.records:
                w.writerow([rec.replicate, rec.seed, rec.start,
                            repr(rec.length), repr(rec.normalized)])


def variance_components(length_matrix):
    """Nested-design estimators from an R x K matrix of walk lengths.

    within  = mean over graphs of the sample variance over starts;
    between = variance of per-graph means minus within/K, floored at zero
    (the standard ANOVA estimator can go negative at small R).
    Returns (between, within, floored).
    """
    arr = np.asarray(length_matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError("variance decomposition needs R >= 2 and K >= 2")
    k = arr.shape[1]
    within = float(np.mean(np.var(arr, axis=1, ddof=1)))
    raw_between = float(np.var(arr.mean(axis=1), ddof=1)) - within / k
    return max(raw_between, 0.0), within, raw_between < 0.0


def run_experiment(cfg, workers=None):
    """Run all replicates, aggregate, and (when out_dir is set) write
    records.csv, summary.json, and any requested figure CSVs."""
    workers = cfg.workers if workers is None else workers
    reps = range(cfg.replicates)
    if workers <= 1:
        payloads = [_replicate_payload(cfg, r) for r in reps]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            payloads = list(pool.map(_replicate_payload, repeat(cfg), reps))

    spec = cfg.instance_spec()
    n = spec.size
    norm = normalization_factor(spec)
    records = []
    for p in payloads:
        for s, length in zip(p["starts"], p["lengths"]):
            records.append(WalkRecord(replicate=p["replicate"], seed=p["seed"],
                                      start=int(s), length=float(length),
                                      normalized=float(length * norm)))

    aggregates = {}
    errors = {}
    lengths = np.asarray([rec.length for rec in records])
    mean = float(lengths.mean())
    sd = float(lengths.std(ddof=1)) if len(lengths) > 1 else None
    se = sd / math.sqrt(len(lengths)) if sd is not None else None
    aggregates["length"] = {"mean": mean, "sd": sd, "se": se, "count": len(lengths)}
    normalized = lengths * norm
    aggregates["normalized_length"] = {
        "mean": float(normalized.mean()),
        "sd": float(normalized.std(ddof=1)) if len(normalized) > 1 else None,
        "factor": norm,
    }
    aggregates["sd_over_mean"] = sd / mean if sd is not None else None
    if "variance_decomposition" in cfg.statistics:
        if cfg.starts < 2 or cfg.replicates < 2:
            errors["variance_decomposition"] = "needs replicates >= 2 and starts >= 2"
        else:
            matrix = np.asarray([p["lengths"] for p in payloads])
            between, within, floored = variance_components(matrix)
            aggregates["variance_decomposition"] = {
                "between": between, "within": within,
                "ratio": between / within if within > 0 else None,
                "floored": floored,
            }
    if "start_ratio" in cfg.statistics:
        if cfg.starts < 2:
            errors["start_ratio"] = "needs starts >= 2"
        else:
            ratios = [max(p["lengths"]) / min(p["lengths"]) for p in payloads]
            aggregates["start_ratio"] = {
                "mean": float(np.mean(ratios)), "max": float(np.max(ratios)),
            }
    if "mst" in cfg.statistics:
        vals = [p["mst"] for p in payloads]
        aggregates["mst"] = {"mean": float(np.mean(vals)),
                             "mean_over_n": float(np.mean(vals)) / n,
                             "values": vals}
    if "diameter" in cfg.statistics:
        vals = [p["diameter"] for p in payloads]
        aggregates["diameter"] = {"mean": float(np.mean(vals)),
                                  "mean_over_log_n": float(np.mean(vals)) / math.log(n),
                                  "values": vals}

    summary = ExperimentSummary(config=cfg, n_vertices=n, records=tuple(records),
                                aggregates=aggregates, errors=errors)

    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        summary.write_records_csv(os.path.join(cfg.out_dir, "records.csv"))
        if "cover_profile" in cfg.statistics:
            radii, sizes = payloads[0]["cover_profile"]
            path = os.path.join(cfg.out_dir, "cover_profile.csv")
            with open(path, "w", newline="", encoding="ascii") as fh:
                w = csv.writer(fh)
                w.writerow(["r", "N_hat"])
                for r_val, s_val in zip(radii, sizes):
                    w.writerow([repr(float(r_val)), int(s_val)])
        with open(os.path.join(cfg.out_dir, "summary.json"), "w", encoding="ascii") as fh:
            fh.write(summary.to_json())
            fh.write("\n")
    elif "cover_profile" in cfg.statistics:
        errors["cover_profile"] = "needs out_dir to write cover_profile.csv"
    return summary


def variance_decomposition(cfg):
    """(between-graph, within-graph) variance components for a config with
    starts >= 2 and replicates >= 2."""
    if cfg.starts < 2 or cfg.replicates < 2:
        raise ValueError("variance decomposition needs replicates >= 2 and starts >= 2")
    stats = cfg.statistics if "variance_decomposition" in cfg.statistics \
        else cfg.statistics + ("variance_decomposition",)
    summary = run_experiment(replace(cfg, statistics=stats, out_dir=None))
    vd = summary.aggregates["variance_decomposition"]
    return vd["between"], vd["within"]


@dataclass(frozen=True)
class StartSensitivity:
    max_length: float
    min_length: float
    ratio: float
    max_start: int
    min_start: int


def start_sensitivity(g, max_sparse=2000, max_dense=500):
    """NUV length from every start vertex: (max, min, ratio) plus argmaxes.

    Runs n full walks, so it is capped by instance size (n walks on a dense
    graph cost O(n^3) scans).
    """
    if isinstance(g, GeometricInstance):
        n, cap, kind = g.n, max_sparse, "geometric"
    else:
        n = g.n
        cap, kind = (max_dense, "dense") if g.dense else (max_sparse, "sparse")
    if n > cap:
        raise ThresholdError(f"start sensitivity on a {kind} instance needs n <= {cap}")
    lengths = [nuv_walk(g, s).total_length for s in range(n)]
    mx, mn = max(lengths), min(lengths)
    return StartSensitivity(max_length=mx, min_length=mn, ratio=mx / mn,
                            max_start=lengths.index(mx), min_start=lengths.index(mn))


def _edge_length(g, u, v):
    if isinstance(g, GeometricInstance):
        dx = g.points[u, 0] - g.points[v, 0]
        dy = g.points[u, 1] - g.points[v, 1]
        return float(np.sqrt(dx * dx + dy * dy))
    return g.edge_length(u, v)


def _traversed_edges(walk):
    for path in walk.step_paths:
        for a, b in zip(path[:-1], path[1:]):
            yield (a, b) if a < b else (b, a)


def overlap_fraction(g, start_a, start_b):
    """Proportion of walk-a's travel time spent on edges walk-b also uses.

    Each of walk-a's edge traversals counts with multiplicity, so two walks
    from the same start overlap fully (fraction 1.0).
    """
    wa = nuv_walk(g, start_a, with_paths=True)
    wb = nuv_walk(g, start_b, with_paths=True)
    edges_b = set(_traversed_edges(wb))
    shared = 0.0
    for e in _traversed_edges(wa):
        if e in edges_b:
            shared += _edge_length(g, e[0], e[1])
    # ulp guard: per-edge sums may land a hair above the step-distance sums
    return min(shared / wa.total_length, 1.0)


# -- figure data -------------------------------------------------------------

_PALETTE = ("#1f6fb4", "#d0452d", "#2c8f4e", "#8f5fb0", "#b08b2c", "#3aa6a6")


def _segments(points, order):
    segs = []
    for i in range(len(order) - 1):
        a, b = int(order[i]), int(order[i + 1])
        segs.append((points[a, 0], points[a, 1], points[b, 0], points[b, 1]))
    return segs


def _write_segments_csv(path, rows, with_start_column):
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh)
        if with_start_column:
            w.writerow(["start", "step", "x0", "y0", "x1", "y1"])
        else:
            w.writerow(["step", "x0", "y0", "x1", "y1"])
        for row in rows:
            w.writerow(row)


def _write_walk_svg(path, points, walks_orders):
    xs, ys = points[:, 0], points[:, 1]
    lo = min(xs.min(), ys.min())
    hi = max(xs.max(), ys.max())
    span = hi - lo if hi > lo else 1.0
    size = 800.0
    pad = 0.04 * size

    def sx(x):
        return pad + (x - lo) / span * (size - 2 * pad)

    def sy(y):
        return size - (pad + (y - lo) / span * (size - 2 * pad))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" '
             f'height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">',
             f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>']
    for k, order in enumerate(walks_orders):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{sx(points[int(v), 0]):.2f},{sy(points[int(v), 1]):.2f}"
                          for v in order)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="1.2" opacity="0.85"/>')
    for x, y in zip(xs.tolist(), ys.tolist()):
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="#222"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


FIGURE_KINDS = ("walk_polyline", "step_histogram", "multi_start_overlay",
                "cover_profile")


def emit_figure_data(kind, out_dir, instance=None, walk=None, walks=None,
                     profile=None, bin_width=None, svg=False):
    """Write figure-ready CSVs (and optional SVG renderings) to out_dir.

    walk_polyline / multi_start_overlay need a geometric instance for the
    coordinates; step_histogram needs a walk and bin width; cover_profile
    needs a CoverProfile.
    """
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; choose from {FIGURE_KINDS}")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if kind in ("walk_polyline", "multi_start_overlay"):
        if not isinstance(instance, GeometricInstance):
            raise ValueError(f"{kind} needs point coordinates (geometric model)")
        if kind == "walk_polyline":
            if walk is None:
                raise ValueError("walk_polyline needs a walk")
            rows = [(i, repr(float(x0)), repr(float(y0)), repr(float(x1)), repr(float(y1)))
                    for i, (x0, y0, x1, y1) in enumerate(_segments(instance.points, walk.order))]
            path = os.path.join(out_dir, "walk_polyline.csv")
            _write_segments_csv(path, rows, with_start_column=False)
            written.append(path)
            if svg:
                path = os.path.join(out_dir, "walk_polyline.svg")
                _write_walk_svg(path, instance.points, [walk.order])
                written.append(path)
        else:
            if not walks:
                raise ValueError("multi_start_overlay needs walks")
            rows = []
            for w in walks:
                for i, (x0, y0, x1, y1) in enumerate(_segments(instance.points, w.order)):
                    rows.append((w.start, i, repr(float(x0)), repr(float(y0)),
                                 repr(float(x1)), repr(float(y1))))
            path = os.path.join(out_dir, "multi_start_overlay.csv")
            _write_segments_csv(path, rows, with_start_column=True)
            written.append(path)
            if svg:
                path = os.path.join(out_dir, "multi_start_overlay.svg")
                _write_walk_svg(path, instance.points, [w.order for w in walks])
                written.append(path)
    elif kind == "step_histogram":
        if walk is None or bin_width is None:
            raise ValueError("step_histogram needs a walk and a bin width")
        from .walk import step_histogram
        hist = step_histogram(walk, bin_width)
        path = os.path.join(out_dir, "step_histogram.csv")
        hist.write_csv(path)
        written.append(path)
    else:
        if profile is None:
            raise ValueError("cover_profile needs a profile")
        path = os.path.join(out_dir, "cover_profile.csv")
        profile.write_csv(path)
        written.append(path)
    return written
