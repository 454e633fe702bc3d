"""Routing engine and deterministic flow simulator for cooperative UAV networks.

The package splits into a small stack of libraries:

* :mod:`fanetsim.kinematics` - motion state derivation, position
  extrapolation, link-lifetime prediction (plus the divided-difference
  extrapolation baseline)
* :mod:`fanetsim.topology`   - connectivity snapshots with per-edge lifetimes
* :mod:`fanetsim.router`     - the length/lifetime/load route optimizer, its
  pruning solver, and an exhaustive reference solver
* :mod:`fanetsim.loadtracker`- controller-side node-load accounting
* :mod:`fanetsim.mobility`   - seeded random-waypoint and Gauss-Markov models
* :mod:`fanetsim.simengine`  - the tick-driven flow simulation and harnesses
* :mod:`fanetsim.cli`        - the ``fanetsim`` command-line front end
"""

from .config import ConfigError, ScenarioConfig, default_weights, opar_weights
from .kinematics import (
    LifetimeEstimate,
    NodeState,
    PositionSample,
    derive_state,
    extrapolation_lifetime,
    link_lifetime,
    predict_position,
    traversed_distance,
)
from .loadtracker import LoadTracker, RouteLease
from .mobility import Arena, MobilityConfig, read_trace, trajectory, write_trace
from .router import Route, Weights, evaluate, oracle_solve, solve
from .simengine import (
    FlowRecord,
    FlowSpec,
    MetricsReport,
    PredictionReport,
    RouterKind,
    RunResult,
    route_request,
    run,
    run_prediction_eval,
    run_single,
    run_weight_sweep,
)
from .topology import ConnectivityGraph, build_graph, filter_by_lifetime, neighbors

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Arena",
    "ConfigError",
    "ConnectivityGraph",
    "FlowRecord",
    "FlowSpec",
    "LifetimeEstimate",
    "LoadTracker",
    "MetricsReport",
    "MobilityConfig",
    "NodeState",
    "PositionSample",
    "PredictionReport",
    "Route",
    "RouteLease",
    "RouterKind",
    "RunResult",
    "ScenarioConfig",
    "Weights",
    "build_graph",
    "default_weights",
    "derive_state",
    "evaluate",
    "extrapolation_lifetime",
    "filter_by_lifetime",
    "link_lifetime",
    "neighbors",
    "opar_weights",
    "oracle_solve",
    "predict_position",
    "read_trace",
    "route_request",
    "run",
    "run_prediction_eval",
    "run_single",
    "run_weight_sweep",
    "solve",
    "trajectory",
    "traversed_distance",
    "write_trace",
]
