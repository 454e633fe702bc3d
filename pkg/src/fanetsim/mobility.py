"""Seeded 3D mobility models sampled at the controller reporting period.

Two generators are provided. Random waypoint picks a uniform target in the
arena and a uniform speed, flies straight, optionally pauses, and repeats.
Gauss-Markov evolves speed and heading with a first-order autoregressive
recurrence whose memory parameter damps abrupt turns; boundaries reflect.

Every trajectory is a pure function of (config, arena, node id, duration,
sampling period): identical inputs give bit-identical samples. Per-node
streams are decorrelated by folding the node id into the seed, so
trajectories for different nodes can be generated independently and in any
order.

Trajectories can be exported to / replayed from a plain-text table with
columns (time, node, x, y, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, TextIO

import numpy as np
from scipy.signal import lfilter

from .kinematics import PositionSample

__all__ = [
    "Arena",
    "MobilityConfig",
    "trajectory",
    "write_trace",
    "read_trace",
]

MODELS = ("rwp3d", "gauss_markov3d")


@dataclass(frozen=True)
class Arena:
    """Axis-aligned flight volume [0, x_max] x [0, y_max] x [0, z_max]."""

    x_max: float
    y_max: float
    z_max: float

    def __post_init__(self):
        for name, v in (("x_max", self.x_max), ("y_max", self.y_max),
                        ("z_max", self.z_max)):
            if v <= 0.0:
                raise ValueError(f"{name} must be positive, got {v}")

    @property
    def bounds(self) -> np.ndarray:
        return np.array([self.x_max, self.y_max, self.z_max])


@dataclass(frozen=True)
class MobilityConfig:
    """Mobility model selection and parameters.

    ``pause`` applies to random waypoint only; ``gm_alpha`` (memory) and
    ``gm_update`` (recurrence interval, seconds) to Gauss-Markov only.
    """

    model: str = "rwp3d"
    v_min: float = 0.0
    v_max: float = 50.0
    pause: float = 0.0
    gm_alpha: float = 0.85
    gm_update: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if not (0.0 <= self.v_min <= self.v_max):
            raise ValueError(
                f"need 0 <= v_min <= v_max, got {self.v_min}, {self.v_max}"
            )
        if self.pause < 0.0:
            raise ValueError(f"pause must be >= 0, got {self.pause}")
        if not (0.0 <= self.gm_alpha <= 1.0):
            raise ValueError(f"gm_alpha must be in [0, 1], got {self.gm_alpha}")
        if self.gm_update <= 0.0:
            raise ValueError(f"gm_update must be positive, got {self.gm_update}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


def _node_rng(cfg: MobilityConfig, node_id: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(node_id,))
    )


def _sample_times(duration: float, sample_dt: float) -> np.ndarray:
    n = int(math.floor(duration / sample_dt + 1e-9)) + 1
    return np.arange(n) * sample_dt


def _fold(u: np.ndarray, span: float) -> np.ndarray:
    """Reflect an unconstrained coordinate into [0, span] (triangle wave)."""
    m = np.mod(u, 2.0 * span)
    return np.where(m <= span, m, 2.0 * span - m)


def _rwp_positions(
    cfg: MobilityConfig, arena: Arena, rng: np.random.Generator,
    times: np.ndarray,
) -> np.ndarray:
    lo = np.zeros(3)
    hi = arena.bounds
    pos = rng.uniform(lo, hi)
    duration = float(times[-1])
    if cfg.v_max == 0.0:
        return np.tile(pos, (len(times), 1))
    knot_t: List[float] = [0.0]
    knot_p: List[np.ndarray] = [pos]
    t = 0.0
    while t < duration:
        target = rng.uniform(lo, hi)
        speed = rng.uniform(cfg.v_min, cfg.v_max)
        if speed <= 0.0:
            speed = 1e-12
        leg = float(np.linalg.norm(target - knot_p[-1]))
        if leg == 0.0:
            continue
        t += leg / speed
        knot_t.append(t)
        knot_p.append(target)
        if cfg.pause > 0.0:
            t += cfg.pause
            knot_t.append(t)
            knot_p.append(target)
    kt = np.array(knot_t)
    kp = np.vstack(knot_p)
    return np.column_stack(
        [np.interp(times, kt, kp[:, ax]) for ax in range(3)]
    )


def _ar1(alpha: float, x0: float, mean: float, sigma: float,
         noise: np.ndarray) -> np.ndarray:
    """Exact AR(1) sequence x_k = a*x_{k-1} + (1-a)*mean + s*sqrt(1-a^2)*n_k."""
    n = len(noise)
    drive = (1.0 - alpha) * mean + sigma * math.sqrt(
        max(0.0, 1.0 - alpha * alpha)
    ) * noise
    response = lfilter([1.0], [1.0, -alpha], drive)
    powers = np.power(alpha, np.arange(1, n + 1))
    return powers * x0 + response


def _gauss_markov_positions(
    cfg: MobilityConfig, arena: Arena, rng: np.random.Generator,
    times: np.ndarray,
) -> np.ndarray:
    duration = float(times[-1])
    pos0 = rng.uniform(np.zeros(3), arena.bounds)
    mean_speed = 0.5 * (cfg.v_min + cfg.v_max)
    sigma_speed = 0.25 * (cfg.v_max - cfg.v_min)
    mean_az = rng.uniform(-math.pi, math.pi)
    sigma_az = math.pi / 8.0
    mean_el = 0.0
    sigma_el = math.pi / 16.0

    n_updates = max(1, int(math.ceil(duration / cfg.gm_update - 1e-9)))
    speed0 = float(np.clip(rng.normal(mean_speed, sigma_speed),
                           cfg.v_min, cfg.v_max))
    az0 = float(rng.normal(mean_az, sigma_az))
    el0 = float(rng.normal(mean_el, sigma_el))
    noise = rng.standard_normal((n_updates, 3))

    speeds = np.clip(
        _ar1(cfg.gm_alpha, speed0, mean_speed, sigma_speed, noise[:, 0]),
        cfg.v_min, cfg.v_max,
    )
    azimuths = _ar1(cfg.gm_alpha, az0, mean_az, sigma_az, noise[:, 1])
    elevations = np.clip(
        _ar1(cfg.gm_alpha, el0, mean_el, sigma_el, noise[:, 2]),
        -math.pi / 2.0, math.pi / 2.0,
    )
    # Per-interval velocities; interval k covers [k*dt, (k+1)*dt).
    speeds = np.concatenate([[speed0], speeds[:-1]])
    azimuths = np.concatenate([[az0], azimuths[:-1]])
    elevations = np.concatenate([[el0], elevations[:-1]])
    vel = np.column_stack(
        [
            speeds * np.cos(elevations) * np.cos(azimuths),
            speeds * np.cos(elevations) * np.sin(azimuths),
            speeds * np.sin(elevations),
        ]
    )
    # Unconstrained piecewise-linear path, then reflect into the arena.
    starts = np.vstack(
        [pos0, pos0 + np.cumsum(vel * cfg.gm_update, axis=0)]
    )
    idx = np.minimum(
        np.floor(times / cfg.gm_update + 1e-9).astype(int), n_updates - 1
    )
    offsets = times - idx * cfg.gm_update
    unfolded = starts[idx] + vel[idx] * offsets[:, None]
    folded = np.column_stack(
        [_fold(unfolded[:, ax], float(arena.bounds[ax])) for ax in range(3)]
    )
    return folded


def trajectory(
    cfg: MobilityConfig,
    arena: Arena,
    node_id: int,
    duration: float,
    sample_dt: float,
) -> List[PositionSample]:
    """Generate one node's samples at t = 0, dt, 2dt, ... <= duration."""
    if duration <= 0.0:
        raise ValueError(f"duration must be positive, got {duration}")
    if sample_dt <= 0.0:
        raise ValueError(f"sample_dt must be positive, got {sample_dt}")
    times = _sample_times(duration, sample_dt)
    rng = _node_rng(cfg, node_id)
    if cfg.model == "rwp3d":
        pos = _rwp_positions(cfg, arena, rng, times)
    else:
        pos = _gauss_markov_positions(cfg, arena, rng, times)
    return [
        PositionSample(float(t), float(p[0]), float(p[1]), float(p[2]))
        for t, p in zip(times, pos)
    ]


def write_trace(
    f: TextIO, trajectories: Mapping[int, Sequence[PositionSample]]
) -> None:
    """Write trajectories as a plain-text table (time, node, x, y, z)."""
    f.write("time node x y z\n")
    for node_id in sorted(trajectories):
        for s in trajectories[node_id]:
            f.write(f"{s.t!r} {node_id} {s.x!r} {s.y!r} {s.z!r}\n")


def read_trace(f: TextIO) -> Dict[int, List[PositionSample]]:
    """Read a table written by :func:`write_trace` (or any equivalent)."""
    out: Dict[int, List[PositionSample]] = {}
    for lineno, line in enumerate(f, start=1):
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("time"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"trace line {lineno}: expected 5 columns, got {len(parts)}")
        t, node, x, y, z = parts
        out.setdefault(int(node), []).append(
            PositionSample(float(t), float(x), float(y), float(z))
        )
    for node_id, samples in out.items():
        samples.sort(key=lambda s: s.t)
    return out
