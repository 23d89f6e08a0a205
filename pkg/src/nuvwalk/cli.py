"""Command-line interface.

Subcommands: walk, cover, verify-prop1, baseline, experiment, figure, gen.
JSON results go to stdout, diagnostics to stderr, files only under --out-dir
(or the paths given explicitly).  Exit codes: 0 success, 2 usage error,
1 computational failure (including failed verifications and statistics whose
size-threshold preconditions were violated).

All randomness flows from an explicit --seed; there is no time-based default.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .baselines import compute_baselines
from .cover import cover_profile, exact_cover_number, greedy_cover, verify_proposition1
from .experiments import (ExperimentConfig, config_from_file, emit_figure_data,
                          run_experiment)
from .graph import ThresholdError, read_graph_file, write_graph_file
from .models import (GRID_LENGTH_LAWS, MODELS, SCALINGS, GeometricInstance,
                     InstanceSpec)
from .walk import nuv_walk, tour_length


class UsageError(ValueError):
    pass


def _add_instance_args(p):
    g = p.add_argument_group("instance")
    g.add_argument("--model", choices=MODELS + ("mean-field",),
                   help="random model (or 'linear')")
    g.add_argument("--n", type=int, help="vertex count (square/mean_field/linear)")
    g.add_argument("--m", type=int, help="grid side length")
    g.add_argument("--seed", type=int, help="64-bit instance seed (required for random models)")
    g.add_argument("--scaling", choices=SCALINGS, default="unit",
                   help="square model coordinate scaling")
    g.add_argument("--grid-lengths", choices=GRID_LENGTH_LAWS, default="exp1",
                   help="grid edge-length law")
    g.add_argument("--graph-file", help="read the instance from an interchange file instead")


def _instance_from_args(args):
    if args.graph_file:
        if args.model:
            raise UsageError("give either --model or --graph-file, not both")
        return read_graph_file(args.graph_file)
    if not args.model:
        raise UsageError("an instance is required: --model or --graph-file")
    model = args.model.replace("-", "_")
    try:
        spec = InstanceSpec(model=model, n=args.n, m=args.m, seed=args.seed,
                            scaling=args.scaling, grid_lengths=args.grid_lengths)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return spec.generate()


def _as_graph(instance):
    return instance.graph if isinstance(instance, GeometricInstance) else instance


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _cmd_walk(args):
    instance = _instance_from_args(args)
    w = nuv_walk(instance, args.start, with_paths=args.paths)
    out = w.to_json_dict()
    if args.tour:
        out["tour_length"] = tour_length(instance, w)
    if args.steps_csv:
        w.write_steps_csv(args.steps_csv)
        print(f"wrote {args.steps_csv}", file=sys.stderr)
    _emit(out)
    return 0


def _cmd_cover(args):
    instance = _instance_from_args(args)
    g = _as_graph(instance)
    if args.r is not None:
        if args.method == "exact":
            result = exact_cover_number(g, args.r)
        else:
            result = greedy_cover(g, args.r)
        _emit(result.to_json_dict())
        return 0
    profile = cover_profile(g, method=args.method, max_radii=args.max_radii)
    print("r,N_hat")
    for r, s in zip(profile.radii.tolist(), profile.sizes.tolist()):
        print(f"{r!r},{int(s)}")
    alpha = profile.fit_decay_exponent()
    if alpha is not None:
        print(f"fitted decay exponent alpha ~ {alpha:.3f} (diagnostic only)",
              file=sys.stderr)
    return 0


def _cmd_verify_prop1(args):
    instance = _instance_from_args(args)
    g = _as_graph(instance)
    radii = None
    if args.radii:
        radii = [float(x) for x in args.radii.split(",") if x.strip()]
    report = verify_proposition1(g, args.start, radii=radii,
                                 profile_max_radii=args.profile_max_radii)
    _emit(report.to_json_dict())
    if not report.all_pass:
        print("proposition-1 check FAILED", file=sys.stderr)
        return 1
    return 0


def _cmd_baseline(args):
    instance = _instance_from_args(args)
    g = _as_graph(instance)
    include = "auto" if args.tsp is None else args.tsp
    result = compute_baselines(g, start=args.start, include_tsp=include)
    _emit(result.to_json_dict())
    return 0


def _cmd_experiment(args):
    cfg = config_from_file(args.config)
    if args.out_dir:
        from dataclasses import replace
        cfg = replace(cfg, out_dir=args.out_dir)
    summary = run_experiment(cfg, workers=args.workers)
    _emit(summary.to_json_dict())
    if summary.errors:
        for stat, msg in summary.errors.items():
            print(f"statistic {stat!r} failed its precondition: {msg}", file=sys.stderr)
        return 1
    return 0


def _cmd_figure(args):
    instance = _instance_from_args(args)
    kind = args.kind.replace("-", "_")
    kwargs = {"svg": args.svg}
    if kind == "walk_polyline":
        kwargs["instance"] = instance
        kwargs["walk"] = nuv_walk(instance, args.start)
    elif kind == "multi_start_overlay":
        starts = [int(s) for s in args.starts.split(",")] if args.starts else None
        if not starts:
            raise UsageError("multi-start-overlay needs --starts a,b,c")
        kwargs["instance"] = instance
        kwargs["walks"] = [nuv_walk(instance, s) for s in starts]
    elif kind == "step_histogram":
        kwargs["walk"] = nuv_walk(instance, args.start)
        kwargs["bin_width"] = args.bin_width
    else:
        kwargs["profile"] = cover_profile(_as_graph(instance), method="greedy",
                                          max_radii=args.max_radii)
    written = emit_figure_data(kind, args.out_dir, **kwargs)
    _emit({"written": written})
    return 0


def _cmd_gen(args):
    instance = _instance_from_args(args)
    if isinstance(instance, GeometricInstance):
        points_out = args.points_out or (args.out + ".points.csv")
        with open(points_out, "w", encoding="ascii") as fh:
            fh.write("x,y\n")
            for x, y in instance.points.tolist():
                fh.write(f"{x!r},{y!r}\n")
        print(f"wrote {points_out}", file=sys.stderr)
        g = instance.graph
    else:
        g = instance
    write_graph_file(g, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="nuvwalk",
        description="Nearest-unvisited-vertex walks: engine, cover checks, "
                    "baselines, and Monte-Carlo experiments.")
    p.add_argument("--version", action="version", version=f"nuvwalk {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("walk", help="run one NUV walk and print it as JSON")
    _add_instance_args(w)
    w.add_argument("--start", type=int, required=True, help="start vertex")
    w.add_argument("--paths", action="store_true", help="retain per-step vertex paths")
    w.add_argument("--tour", action="store_true",
                   help="also report the tour length (walk + closing distance)")
    w.add_argument("--steps-csv", help="write one row per step to this CSV file")
    w.set_defaults(func=_cmd_walk)

    c = sub.add_parser("cover", help="print a cover (JSON) or cover profile (CSV)")
    _add_instance_args(c)
    c.add_argument("--method", choices=("exact", "greedy"), default="greedy")
    c.add_argument("--r", type=float, help="single radius; omit for the full profile")
    c.add_argument("--max-radii", type=int, help="subsample the breakpoint grid")
    c.set_defaults(func=_cmd_cover)

    v = sub.add_parser("verify-prop1",
                       help="verify both cover/length inequalities on one instance")
    _add_instance_args(v)
    v.add_argument("--start", type=int, required=True)
    v.add_argument("--radii", help="comma-separated radii (default: automatic)")
    v.add_argument("--profile-max-radii", type=int)
    v.set_defaults(func=_cmd_verify_prop1)

    b = sub.add_parser("baseline", help="print MST length and exact TSP walk/tour")
    _add_instance_args(b)
    b.add_argument("--start", type=int, default=0, help="TSP start vertex")
    tsp = b.add_mutually_exclusive_group()
    tsp.add_argument("--tsp", dest="tsp", action="store_true", default=None)
    tsp.add_argument("--no-tsp", dest="tsp", action="store_false")
    b.set_defaults(func=_cmd_baseline)

    e = sub.add_parser("experiment", help="run a config-file experiment")
    e.add_argument("--config", required=True, help="key=value config file")
    e.add_argument("--workers", type=int, help="parallel replicate workers")
    e.add_argument("--out-dir", help="override the config out_dir")
    e.set_defaults(func=_cmd_experiment)

    f = sub.add_parser("figure", help="emit figure-ready CSV/SVG data")
    _add_instance_args(f)
    f.add_argument("--kind", required=True,
                   choices=("walk-polyline", "step-histogram",
                            "multi-start-overlay", "cover-profile"))
    f.add_argument("--start", type=int, default=0)
    f.add_argument("--starts", help="comma-separated starts (overlay)")
    f.add_argument("--bin-width", type=float, default=0.01)
    f.add_argument("--max-radii", type=int, default=257)
    f.add_argument("--svg", action="store_true", help="also render an SVG")
    f.add_argument("--out-dir", required=True)
    f.set_defaults(func=_cmd_figure)

    g = sub.add_parser("gen", help="write an instance in the interchange format")
    _add_instance_args(g)
    g.add_argument("--out", required=True, help="output graph file")
    g.add_argument("--points-out", help="points CSV for geometric models")
    g.set_defaults(func=_cmd_gen)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ThresholdError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
