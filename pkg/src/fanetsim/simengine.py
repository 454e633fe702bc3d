"""Deterministic tick-driven simulation of file transfers over a FANET.

Time advances in controller reporting periods (ticks). At every tick the
engine refreshes node positions, detects routes whose links drifted out of
range (tearing them down and asking the configured router for a
replacement), starts newly due flows, and delivers bytes along each active
route at the channel rate divided by the route's worst contention.

The transfer model is deliberately fluid: no packets, no MAC, no
retransmissions. A flow's first route install consumes its setup tick;
every later install (after a break) costs ``reroute_delay`` out of that
tick's delivery window. Contention is the highest load among the route's
non-destination nodes, where load counts active routes touching a node or
its one-hop vicinity.

Four router kinds are dispatched:

* ``lb_opar``       - pruning solver, full length/lifetime/load objective
* ``opar``          - same solver with the load weight forced to zero
* ``reactive_hop``  - fewest hops on the current snapshot, recomputed on
                      demand and after breaks
* ``proactive_hop`` - fewest hops on a snapshot refreshed every ``period``
                      seconds and stale in between

A run is a pure function of (scenario, router, seed): identical inputs give
identical metrics, byte for byte. Independent cells (router x replication)
may run in parallel processes; nothing is shared.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import router as routing
from .config import ScenarioConfig
from .kinematics import (
    NodeState,
    PositionSample,
    derive_state,
    extrapolation_lifetime,
    link_lifetime,
)
from .loadtracker import LoadTracker
from .mobility import read_trace, trajectory
from .router import Route, Weights
from .topology import ConnectivityGraph, build_graph, filter_by_lifetime

__all__ = [
    "FlowSpec",
    "FlowRecord",
    "RouterKind",
    "RunResult",
    "MetricsReport",
    "PredictionRow",
    "PredictionReport",
    "SweepPoint",
    "SweepReport",
    "route_request",
    "derive_cell_seed",
    "run_single",
    "run",
    "run_prediction_eval",
    "run_weight_sweep",
    "w3_grid",
    "w1w2_grid",
]

_HOP_WEIGHTS = Weights(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class FlowSpec:
    """One file-transfer flow: who sends what to whom, starting when."""

    flow_id: int
    src: int
    dst: int
    size_bytes: int
    start_time: float

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"flow {self.flow_id}: src and dst must differ")
        if self.size_bytes <= 0:
            raise ValueError(f"flow {self.flow_id}: size must be positive")


@dataclass
class FlowRecord:
    """Lifecycle outcome of one flow."""

    spec: FlowSpec
    bytes_delivered: float = 0.0
    reroute_count: int = 0
    completion_time: float = math.nan  # scenario duration when unsuccessful
    success: bool = False

    def fct(self, duration: float) -> float:
        """Completion time; failed flows are floored at the full duration."""
        if self.success:
            return self.completion_time - self.spec.start_time
        return duration


@dataclass(frozen=True)
class RouterKind:
    """Which routing policy the controller runs, plus its parameters."""

    name: str
    weights: Optional[Weights] = None
    period: Optional[float] = None

    @classmethod
    def lb_opar(cls, weights: Weights) -> "RouterKind":
        return cls("lb_opar", weights=weights)

    @classmethod
    def opar(cls, weights: Weights) -> "RouterKind":
        if weights.w3 != 0.0:
            raise ValueError(f"opar requires w3 = 0, got {weights.w3}")
        return cls("opar", weights=weights)

    @classmethod
    def reactive_hop(cls) -> "RouterKind":
        return cls("reactive_hop")

    @classmethod
    def proactive_hop(cls, period: float) -> "RouterKind":
        if period <= 0.0:
            raise ValueError(f"period must be positive, got {period}")
        return cls("proactive_hop", period=period)


def route_request(
    kind: RouterKind,
    g: ConnectivityGraph,
    loads: Mapping[int, float],
    src: int,
    dst: int,
) -> Optional[Route]:
    """Dispatch a route computation to the configured policy."""
    if kind.name in ("lb_opar", "opar"):
        return routing.solve(g, loads, src, dst, kind.weights)
    path = routing.bfs_shortest_path(g, src, dst)
    if path is None:
        return None
    return routing.evaluate(path, g, loads, _HOP_WEIGHTS)


@dataclass
class RunResult:
    """Metrics of one (router, replication) cell."""

    router: str
    replication: int
    seed: int
    flows: List[FlowRecord]
    duration: float
    success_rate: float = 0.0
    weighted_throughput_mbps: float = 0.0
    mean_fct: float = 0.0
    mean_fct_successful: Optional[float] = None
    reroutes_total: int = 0

    def finalize(self) -> "RunResult":
        n = len(self.flows)
        successes = [f for f in self.flows if f.success]
        self.success_rate = len(successes) / n if n else 0.0
        self.mean_fct = (
            sum(f.fct(self.duration) for f in self.flows) / n if n else 0.0
        )
        self.reroutes_total = sum(f.reroute_count for f in self.flows)
        if successes:
            fcts = [f.fct(self.duration) for f in successes]
            self.mean_fct_successful = sum(fcts) / len(fcts)
            raw = [
                f.spec.size_bytes * 8.0 / 1e6 / f.fct(self.duration)
                for f in successes
            ]
            self.weighted_throughput_mbps = (
                sum(raw) / len(raw) * self.success_rate
            )
        else:
            self.mean_fct_successful = None
            self.weighted_throughput_mbps = 0.0
        return self


@dataclass
class MetricsReport:
    """All cells of a campaign plus per-router aggregates."""

    cells: List[RunResult]

    def routers(self) -> List[str]:
        seen: List[str] = []
        for c in self.cells:
            if c.router not in seen:
                seen.append(c.router)
        return seen

    def aggregate(self, router_name: str) -> Dict[str, float]:
        cells = [c for c in self.cells if c.router == router_name]
        if not cells:
            raise KeyError(f"no cells for router {router_name!r}")
        out = {
            "success_rate": sum(c.success_rate for c in cells) / len(cells),
            "weighted_throughput_mbps": sum(
                c.weighted_throughput_mbps for c in cells
            ) / len(cells),
            "mean_fct": sum(c.mean_fct for c in cells) / len(cells),
        }
        with_succ = [c for c in cells if c.mean_fct_successful is not None]
        out["mean_fct_successful"] = (
            sum(c.mean_fct_successful for c in with_succ) / len(with_succ)
            if with_succ
            else math.nan
        )
        return out

    def to_text(self) -> str:
        """Canonical deterministic rendering (used for determinism checks)."""
        lines = []
        for c in self.cells:
            lines.append(
                f"cell router={c.router} rep={c.replication} seed={c.seed} "
                f"success_rate={c.success_rate!r} "
                f"wthr={c.weighted_throughput_mbps!r} "
                f"mean_fct={c.mean_fct!r} "
                f"mean_fct_ok={c.mean_fct_successful!r} "
                f"reroutes={c.reroutes_total}"
            )
            for fr in c.flows:
                lines.append(
                    f"  flow id={fr.spec.flow_id} src={fr.spec.src} "
                    f"dst={fr.spec.dst} bytes={fr.bytes_delivered!r} "
                    f"reroutes={fr.reroute_count} "
                    f"completion={fr.completion_time!r} success={fr.success}"
                )
        return "\n".join(lines) + "\n"


def derive_cell_seed(base_seed: int, replication: int) -> int:
    """Stable per-replication seed, recorded in every output row."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(replication,))
    return int(ss.generate_state(1, np.uint64)[0])


def _router_kinds(cfg: ScenarioConfig) -> List[RouterKind]:
    kinds = []
    for name in cfg.routers:
        if name == "lb_opar":
            kinds.append(RouterKind.lb_opar(cfg.lb_opar_weights()))
        elif name == "opar":
            kinds.append(RouterKind.opar(cfg.opar_weights()))
        elif name == "reactive_hop":
            kinds.append(RouterKind.reactive_hop())
        elif name == "proactive_hop":
            kinds.append(RouterKind.proactive_hop(cfg.proactive_period))
        else:
            raise ValueError(f"unknown router {name!r}")
    return kinds


def _flow_specs(cfg: ScenarioConfig, seed: int) -> List[FlowSpec]:
    if cfg.flow_pairs is not None:
        pairs = list(cfg.flow_pairs)
    else:
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(2,))
        )
        chosen = rng.permutation(cfg.nodes)[: 2 * cfg.flows]
        pairs = [
            (int(chosen[i]), int(chosen[cfg.flows + i]))
            for i in range(cfg.flows)
        ]
    starts = (
        list(cfg.flow_starts)
        if cfg.flow_starts is not None
        else [cfg.flow_start_time] * len(pairs)
    )
    return [
        FlowSpec(i, src, dst, cfg.file_size_bytes, starts[i])
        for i, (src, dst) in enumerate(pairs)
    ]


def _generated_positions(
    cfg: ScenarioConfig, seed: int, duration: float, lead_ticks: int = 2
) -> np.ndarray:
    """Positions array (nodes, ticks + lead_ticks + 1, 3).

    The mobility model is started ``lead_ticks`` reporting periods before
    t = 0 so the controller has a full three-sample history at the first
    tick; sample index k corresponds to scenario time (k - lead_ticks)*tick.
    """
    mob = cfg.mobility(seed)
    total = duration + lead_ticks * cfg.tick
    n_samples = int(round(total / cfg.tick)) + 1
    out = np.empty((cfg.nodes, n_samples, 3))
    for node in range(cfg.nodes):
        samples = trajectory(mob, cfg.arena, node, total, cfg.tick)
        out[node] = [(s.x, s.y, s.z) for s in samples]
    return out


def _trace_positions(
    cfg: ScenarioConfig, duration: float, lead_ticks: int = 2
) -> np.ndarray:
    """Replay positions from a trace file, padding the pre-scenario samples.

    The trace must cover [0, duration] for every node id below the
    configured node count; positions at tick times are linearly
    interpolated from the trace rows. The two lead-in samples replicate the
    first row (stationary lead-in).
    """
    with open(cfg.trace_file, "r", encoding="utf-8") as f:
        tracks = read_trace(f)
    n_ticks = int(round(duration / cfg.tick))
    times = np.arange(n_ticks + 1) * cfg.tick
    out = np.empty((cfg.nodes, n_ticks + 1 + lead_ticks, 3))
    for node in range(cfg.nodes):
        if node not in tracks:
            raise ValueError(f"trace file has no rows for node {node}")
        samples = tracks[node]
        ts = np.array([s.t for s in samples])
        if ts[0] > 0.0 or ts[-1] < duration:
            raise ValueError(
                f"trace for node {node} covers [{ts[0]}, {ts[-1]}], "
                f"need [0, {duration}]"
            )
        coords = np.array([[s.x, s.y, s.z] for s in samples])
        for ax in range(3):
            out[node, lead_ticks:, ax] = np.interp(times, ts, coords[:, ax])
        out[node, :lead_ticks] = out[node, lead_ticks]
    return out


@dataclass
class _FlowState:
    spec: FlowSpec
    record: FlowRecord
    started: bool = False
    pending: bool = False
    done: bool = False
    had_route: bool = False
    route: Optional[Route] = None
    lease: object = None
    window: float = 0.0  # delivery window within the current tick


class _Engine:
    """One simulation cell. Single-threaded; all state lives here."""

    LEAD = 2  # reporting periods of pre-scenario motion history

    def __init__(self, cfg: ScenarioConfig, kind: RouterKind, seed: int):
        self.cfg = cfg
        self.kind = kind
        self.seed = seed
        self.n_ticks = int(round(cfg.duration / cfg.tick))
        if cfg.trace_file is not None:
            self.positions = _trace_positions(cfg, cfg.duration, self.LEAD)
        else:
            self.positions = _generated_positions(cfg, seed, cfg.duration, self.LEAD)
        self.tracker = LoadTracker(range(cfg.nodes))
        self.flows = [
            _FlowState(spec, FlowRecord(spec))
            for spec in _flow_specs(cfg, seed)
        ]
        self.proactive_graph: Optional[ConnectivityGraph] = None
        self._tick_index = -1
        self._full_graph: Optional[ConnectivityGraph] = None
        self._pruned_graph: Optional[ConnectivityGraph] = None

    # -- geometry ---------------------------------------------------------

    def _sample_index(self, k: int) -> int:
        return k + self.LEAD

    def distance(self, i: int, j: int, k: int) -> float:
        pi = self.positions[i, self._sample_index(k)]
        pj = self.positions[j, self._sample_index(k)]
        return float(np.linalg.norm(pi - pj))

    def in_range(self, i: int, j: int, k: int) -> bool:
        return self.distance(i, j, k) <= self.cfg.comm_range

    def route_in_range(self, route: Route, k: int) -> bool:
        return all(
            self.in_range(i, j, k) for i, j in zip(route.nodes, route.nodes[1:])
        )

    def _states(self, k: int) -> List[NodeState]:
        base = self._sample_index(k)
        tick = self.cfg.tick
        states = []
        for node in range(self.cfg.nodes):
            samples = tuple(
                PositionSample(
                    (k + off - 2) * tick, *map(float, self.positions[node, base + off - 2])
                )
                for off in range(3)
            )
            states.append(derive_state(node, *samples))
        return states

    # -- per-tick snapshot caches ------------------------------------------

    def full_graph(self, k: int) -> ConnectivityGraph:
        if self._tick_index != k:
            self._tick_index = k
            self._full_graph = None
            self._pruned_graph = None
        if self._full_graph is None:
            remaining = self.cfg.duration - k * self.cfg.tick
            self._full_graph = build_graph(
                self._states(k),
                self.cfg.comm_range,
                lifetime_cutoff=0.0,
                horizon=max(remaining, self.cfg.tick),
            )
        return self._full_graph

    def pruned_graph(self, k: int) -> ConnectivityGraph:
        g = self.full_graph(k)
        if self._pruned_graph is None:
            remaining = self.cfg.duration - k * self.cfg.tick
            # The cutoff only makes sense while shorter than the horizon all
            # lifetimes are capped at; at the very end of a scenario it is
            # dropped rather than emptying the graph.
            cutoff = (
                self.cfg.lifetime_cutoff
                if self.cfg.lifetime_cutoff < remaining
                else 0.0
            )
            self._pruned_graph = filter_by_lifetime(g, cutoff)
        return self._pruned_graph

    def router_view(self, k: int) -> ConnectivityGraph:
        if self.kind.name in ("lb_opar", "opar"):
            return self.pruned_graph(k)
        if self.kind.name == "proactive_hop":
            return self.proactive_graph
        return self.full_graph(k)

    # -- event loop ---------------------------------------------------------

    def run(self) -> RunResult:
        cfg = self.cfg
        period_ticks = max(1, int(round(cfg.proactive_period / cfg.tick)))
        for k in range(self.n_ticks):
            t = k * cfg.tick
            if self.kind.name == "proactive_hop" and k % period_ticks == 0:
                self.proactive_graph = self.full_graph(k)

            # 1. Tear down routes whose links left range at this tick.
            for fs in self.flows:
                if fs.route is not None and not self.route_in_range(fs.route, k):
                    self.tracker.teardown(fs.lease)
                    fs.route = None
                    fs.lease = None
                    fs.record.reroute_count += 1
                    fs.pending = True

            # 2. Admit newly due flows.
            for fs in self.flows:
                if not fs.started and fs.spec.start_time <= t:
                    fs.started = True
                    fs.pending = True

            # 3. Route pending flows; one attempt per flow per tick.
            for fs in self.flows:
                if fs.done or not fs.pending:
                    continue
                view = self.router_view(k)
                route = route_request(
                    self.kind, view, self.tracker.loads, fs.spec.src, fs.spec.dst
                )
                if route is None or not self.route_in_range(route, k):
                    # A stale-snapshot route that is already broken counts
                    # as no route at all; the flow retries next tick.
                    continue
                fs.lease = self.tracker.install(route.nodes, view)
                fs.route = route
                fs.pending = False
                if fs.had_route:
                    fs.window = cfg.tick - cfg.reroute_delay
                else:
                    fs.window = 0.0  # setup tick: install now, deliver next
                    fs.had_route = True

            # 4. Fluid delivery under contention.
            for fs in self.flows:
                if fs.route is None or fs.done:
                    continue
                assert self.route_in_range(fs.route, k), "broken route in use"
                loads = self.tracker.loads
                contention = max(
                    1, max(loads[i] for i in fs.route.nodes[:-1])
                )
                rate_bytes = cfg.channel_rate_mbps * 1e6 / contention / 8.0
                fs.record.bytes_delivered = min(
                    float(fs.spec.size_bytes),
                    fs.record.bytes_delivered + rate_bytes * fs.window,
                )
                fs.window = cfg.tick
                if fs.record.bytes_delivered >= fs.spec.size_bytes:
                    fs.record.success = True
                    fs.record.completion_time = t + cfg.tick
                    fs.done = True
                    self.tracker.teardown(fs.lease)
                    fs.route = None
                    fs.lease = None

        # Finalize: unfinished flows fail with the duration as their floor.
        for fs in self.flows:
            if not fs.done:
                fs.record.success = False
                fs.record.completion_time = cfg.duration
                if fs.lease is not None:
                    self.tracker.teardown(fs.lease)
                    fs.route = None
                    fs.lease = None
        assert self.tracker.active_leases == 0, "leases leaked past scenario end"
        assert all(v == 0 for v in self.tracker.loads.values()), (
            "load vector non-zero at quiescence"
        )
        return RunResult(
            router=self.kind.name,
            replication=-1,
            seed=self.seed,
            flows=[fs.record for fs in self.flows],
            duration=cfg.duration,
        ).finalize()


def run_single(cfg: ScenarioConfig, kind: RouterKind, seed: int) -> RunResult:
    """Run one (router, seed) cell of a validated scenario."""
    return _Engine(cfg, kind, seed).run()


def _cell_worker(args) -> RunResult:
    cfg, kind, rep, seed = args
    result = run_single(cfg, kind, seed)
    result.replication = rep
    return result


def run(cfg: ScenarioConfig, jobs: int = 1) -> MetricsReport:
    """Run every (router x replication) cell of a scenario.

    Replication ``r`` uses the same derived seed for every router, pairing
    the comparison across routers. Cells are independent; ``jobs`` > 1
    distributes them over worker processes with deterministic ordering.
    """
    cfg.validate()
    tasks = []
    for kind in _router_kinds(cfg):
        for rep in range(cfg.replications):
            tasks.append((cfg, kind, rep, derive_cell_seed(cfg.seed, rep)))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_cell_worker, tasks))
    else:
        cells = [_cell_worker(t) for t in tasks]
    return MetricsReport(cells=cells)


# -- prediction-accuracy harness ---------------------------------------------


@dataclass(frozen=True)
class PredictionRow:
    """One link's predicted-versus-observed lifetime in one replication."""

    replication: int
    seed: int
    node_i: int
    node_j: int
    predicted_kinematic: float
    predicted_extrapolation: float
    observed: float


@dataclass
class PredictionReport:
    rows: List[PredictionRow]
    kinematic_mean: float = math.nan
    kinematic_std: float = math.nan
    extrapolation_mean: float = math.nan
    extrapolation_std: float = math.nan

    def finalize(self) -> "PredictionReport":
        if self.rows:
            kin = np.array(
                [abs(r.predicted_kinematic - r.observed) for r in self.rows]
            )
            ext = np.array(
                [abs(r.predicted_extrapolation - r.observed) for r in self.rows]
            )
            self.kinematic_mean = float(kin.mean())
            self.kinematic_std = float(kin.std())
            self.extrapolation_mean = float(ext.mean())
            self.extrapolation_std = float(ext.std())
        return self


def _observed_lifetime(
    rel: np.ndarray, comm_range: float, tick: float, observation: float
) -> float:
    """First time the relative track leaves the range, or the horizon.

    ``rel`` holds relative positions sampled every ``tick`` starting at the
    prediction instant. The crossing is refined by linear interpolation
    between the two bracketing samples (motion is piecewise linear between
    samples, so this is exact for straight segments).
    """
    dist = np.linalg.norm(rel, axis=1)
    outside = np.nonzero(dist > comm_range)[0]
    if outside.size == 0:
        return observation
    m = int(outside[0])
    p0 = rel[m - 1]
    d = rel[m] - p0
    a = float(np.dot(d, d))
    b = 2.0 * float(np.dot(p0, d))
    c = float(np.dot(p0, p0)) - comm_range * comm_range
    if a == 0.0:
        s = 1.0
    else:
        disc = max(0.0, b * b - 4.0 * a * c)
        roots = [(-b + math.sqrt(disc)) / (2.0 * a), (-b - math.sqrt(disc)) / (2.0 * a)]
        inside = [r for r in roots if 0.0 < r <= 1.0]
        s = min(inside) if inside else 1.0
    return min(observation, ((m - 1) + s) * tick)


def _prediction_rows(
    cfg: ScenarioConfig, rep: int, seed: int
) -> List[PredictionRow]:
    tick = cfg.tick
    warmup = cfg.predict_warmup
    observation = cfg.predict_observation
    k_pred = int(round(warmup / tick))
    if k_pred < 2:
        raise ValueError("predict_warmup must cover at least two ticks")
    mob = cfg.mobility(seed)
    total = warmup + observation
    n_samples = int(round(total / tick)) + 1
    positions = np.empty((cfg.nodes, n_samples, 3))
    for node in range(cfg.nodes):
        samples = trajectory(mob, cfg.arena, node, total, tick)
        positions[node] = [(s.x, s.y, s.z) for s in samples]

    def node_samples(node: int) -> Tuple[PositionSample, ...]:
        return tuple(
            PositionSample(
                (k_pred + off - 2) * tick, *map(float, positions[node, k_pred + off - 2])
            )
            for off in range(3)
        )

    states = {i: derive_state(i, *node_samples(i)) for i in range(cfg.nodes)}
    rows: List[PredictionRow] = []
    at_pred = positions[:, k_pred, :]
    for i in range(cfg.nodes):
        for j in range(i + 1, cfg.nodes):
            if float(np.linalg.norm(at_pred[i] - at_pred[j])) > cfg.comm_range:
                continue
            kin = link_lifetime(
                states[i], states[j], cfg.comm_range, observation
            ).lifetime
            ext = extrapolation_lifetime(
                node_samples(i), node_samples(j), cfg.comm_range, observation,
                link=(i, j),
            ).lifetime
            rel = positions[i, k_pred:] - positions[j, k_pred:]
            obs = _observed_lifetime(rel, cfg.comm_range, tick, observation)
            rows.append(PredictionRow(rep, seed, i, j, kin, ext, obs))
    return rows


def _prediction_worker(args) -> List[PredictionRow]:
    cfg, rep, seed = args
    return _prediction_rows(cfg, rep, seed)


def run_prediction_eval(cfg: ScenarioConfig, jobs: int = 1) -> PredictionReport:
    """Predicted-versus-observed link lifetimes over all replications.

    Nodes move for the warmup period, both predictors run once on the links
    alive at its end, and the links are then watched for the observation
    period. Lifetimes (predicted and observed) are censored at the
    observation horizon.
    """
    cfg.validate()
    tasks = [
        (cfg, rep, derive_cell_seed(cfg.seed, rep))
        for rep in range(cfg.replications)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_prediction_worker, tasks))
    else:
        chunks = [_prediction_worker(t) for t in tasks]
    rows: List[PredictionRow] = []
    for chunk in chunks:
        rows.extend(chunk)
    return PredictionReport(rows=rows).finalize()


# -- weight sweep -------------------------------------------------------------


@dataclass
class SweepPoint:
    """Aggregate metrics of one weight triple over all replications."""

    weights: Tuple[float, float, float]
    success_rate: float
    weighted_throughput_mbps: float
    mean_fct: float
    cells: List[RunResult]


@dataclass
class SweepReport:
    points: List[SweepPoint]
    best_by_metric: Dict[str, Tuple[float, float, float]] = field(
        default_factory=dict
    )
    best: Optional[Tuple[float, float, float]] = None

    def finalize(self) -> "SweepReport":
        # Composite ranking: success first, then completion time, then
        # throughput; the lightest load weight wins exact ties.
        def composite(p: SweepPoint):
            return (
                -p.success_rate,
                p.mean_fct,
                -p.weighted_throughput_mbps,
                p.weights[2],
            )

        self.best_by_metric = {
            "success_rate": max(
                self.points, key=lambda p: (p.success_rate, -p.weights[2])
            ).weights,
            "weighted_throughput_mbps": max(
                self.points,
                key=lambda p: (p.weighted_throughput_mbps, -p.weights[2]),
            ).weights,
            "mean_fct": min(
                self.points, key=lambda p: (p.mean_fct, p.weights[2])
            ).weights,
        }
        self.best = min(self.points, key=composite).weights
        return self


def w3_grid(step: float = 0.1) -> List[Tuple[float, float, float]]:
    """Load-weight sweep: w3 from 0 to 1, remaining mass split evenly."""
    n = int(round(1.0 / step))
    grid = []
    for k in range(n + 1):
        w3 = k * step
        w12 = (1.0 - w3) / 2.0
        grid.append((w12, w12, w3))
    return grid


def w1w2_grid(w3: float, step: float = 0.1) -> List[Tuple[float, float, float]]:
    """Length-versus-lifetime sweep at a fixed load weight."""
    rest = 1.0 - w3
    n = int(round(rest / step))
    grid = []
    for k in range(n + 1):
        w1 = min(k * step, rest)
        grid.append((w1, max(rest - w1, 0.0), w3))
    return grid


def run_weight_sweep(
    cfg: ScenarioConfig,
    grid: Sequence[Tuple[float, float, float]],
    jobs: int = 1,
) -> SweepReport:
    """Run the load-balancing router over a grid of weight triples."""
    points = []
    for triple in grid:
        sub = replace(cfg, routers=("lb_opar",), weights=triple).validate()
        report = run(sub, jobs=jobs)
        cells = report.cells
        points.append(
            SweepPoint(
                weights=triple,
                success_rate=sum(c.success_rate for c in cells) / len(cells),
                weighted_throughput_mbps=sum(
                    c.weighted_throughput_mbps for c in cells
                ) / len(cells),
                mean_fct=sum(c.mean_fct for c in cells) / len(cells),
                cells=cells,
            )
        )
    return SweepReport(points=points).finalize()
