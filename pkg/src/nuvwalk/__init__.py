"""nuvwalk: nearest-unvisited-vertex walks on finite weighted graphs.

The walk engine, ball-covering verifiers, random-graph models, MST/TSP
baselines, and a reproducible Monte-Carlo experiment harness.  Hot kernels
run in a compiled extension when available, with a bit-identical NumPy
fallback (see nuvwalk._backend; benchmark with `python -m nuvwalk.benchmark`).
"""

from ._backend import backend_name
from .baselines import (BaselineResult, compute_baselines, exact_tsp_tour,
                        exact_tsp_walk, mst_length, nuv_tsp_ratio)
from .cover import (CoverProfile, CoverResult, Proposition1Report,
                    ball_long_step_count, cover_profile, exact_cover_number,
                    greedy_cover, verify_cover, verify_proposition1)
from .experiments import (ExperimentConfig, ExperimentSummary, StartSensitivity,
                          WalkRecord, config_from_file, emit_figure_data,
                          overlap_fraction, run_experiment, start_sensitivity,
                          variance_components, variance_decomposition)
from .graph import (DisconnectedGraphError, PathResult, ThresholdError,
                    WeightedGraph, all_pairs_distances, diameter,
                    nearest_unvisited, read_graph_file, shortest_path,
                    write_graph_file)
from .models import (GeometricInstance, InstanceSpec, derive_seed, gen_grid,
                     gen_linear, gen_mean_field, gen_square)
from .walk import (StepHistogram, WalkResult, nuv_walk, step_histogram,
                   tour_length, walk_cover_selection)

__version__ = "0.1.0"

__all__ = [
    "BaselineResult", "CoverProfile", "CoverResult", "DisconnectedGraphError",
    "ExperimentConfig", "ExperimentSummary", "GeometricInstance", "InstanceSpec",
    "PathResult", "Proposition1Report", "StartSensitivity", "StepHistogram",
    "ThresholdError", "WalkRecord", "WalkResult", "WeightedGraph",
    "all_pairs_distances", "backend_name", "ball_long_step_count",
    "compute_baselines", "config_from_file", "cover_profile", "derive_seed",
    "diameter", "emit_figure_data", "exact_cover_number", "exact_tsp_tour",
    "exact_tsp_walk", "gen_grid", "gen_linear", "gen_mean_field", "gen_square",
    "greedy_cover", "mst_length", "nearest_unvisited", "nuv_tsp_ratio",
    "nuv_walk", "overlap_fraction", "read_graph_file", "run_experiment",
    "shortest_path", "start_sensitivity", "step_histogram", "tour_length",
    "variance_components", "variance_decomposition", "verify_cover",
    "verify_proposition1", "walk_cover_selection", "write_graph_file",
    "__version__",
]
