"""Motion estimation and link-lifetime prediction from position reports.

Each node periodically reports its three most recent 3D position samples.
From one report we derive the node's heading (azimuth + polar angle), speed,
and acceleration, extrapolate its future position under a straight-line
constant-acceleration model, and predict when a currently-connected pair of
nodes will first move out of communication range of each other.

A Newton divided-difference extrapolation of the raw samples is provided as
a baseline predictor; it fits a full quadratic per coordinate instead of
constraining motion to the last observed heading.

All functions here are pure: no shared state, safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

__all__ = [
    "PositionSample",
    "NodeState",
    "LifetimeEstimate",
    "traversed_distance",
    "derive_state",
    "predict_position",
    "motion_coefficients",
    "newton_coefficients",
    "link_lifetime",
    "extrapolation_lifetime",
    "first_range_exit",
]

DEFAULT_TOL = 1e-3      # bisection tolerance, seconds
DEFAULT_SCAN_STEP = 1.0  # bracketing scan step, seconds


@dataclass(frozen=True)
class PositionSample:
    """One timestamped 3D position report (seconds, meters)."""

    t: float
    x: float
    y: float
    z: float

    def coords(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class NodeState:
    """Derived motion state of a node at its latest sample.

    ``azimuth`` is in (-pi, pi], ``polar`` in [0, pi] (angle from +z), and
    ``speed``/``acceleration`` are signed along the fixed heading: speed is
    the mean speed over the last sample interval, acceleration the speed
    change rate over the full three-sample window.
    """

    node_id: int
    samples: Tuple[PositionSample, PositionSample, PositionSample]
    azimuth: float
    polar: float
    speed: float
    acceleration: float

    @property
    def position(self) -> Tuple[float, float, float]:
        return self.samples[2].coords()


@dataclass(frozen=True)
class LifetimeEstimate:
    """Predicted remaining lifetime of one link.

    ``converged`` is False when no range exit was found within the horizon,
    in which case ``lifetime`` equals the horizon itself.
    """

    link: Tuple[int, int]
    lifetime: float
    converged: bool


def traversed_distance(s1: PositionSample, s2: PositionSample) -> float:
    """Euclidean distance between two position samples, in meters."""
    return math.sqrt(
        (s2.x - s1.x) ** 2 + (s2.y - s1.y) ** 2 + (s2.z - s1.z) ** 2
    )


def derive_state(
    node_id: int,
    s0: PositionSample,
    s1: PositionSample,
    s2: PositionSample,
) -> NodeState:
    """Derive heading, speed, and acceleration from three ordered samples.

    The heading comes from the displacement between the last two samples,
    using the two-argument arctangent so all quadrants are covered. Speeds
    are mean speeds over each interval; acceleration is their change over
    the full window. A node whose last two samples coincide is treated as
    stationary (azimuth 0, polar pi/2, zero speed and acceleration) so that
    its predicted position is a fixed point.

    Raises ValueError if the timestamps are not strictly increasing.
    """
    if not (s0.t < s1.t < s2.t):
        raise ValueError(
            f"sample timestamps must be strictly increasing, "
            f"got {s0.t}, {s1.t}, {s2.t}"
        )
    dx = s2.x - s1.x
    dy = s2.y - s1.y
    dz = s2.z - s1.z
    d12 = math.sqrt(dx * dx + dy * dy + dz * dz)
    if d12 == 0.0:
        return NodeState(node_id, (s0, s1, s2), 0.0, math.pi / 2, 0.0, 0.0)
    azimuth = math.atan2(dy, dx)
    if azimuth == -math.pi:
        azimuth = math.pi
    polar = math.acos(max(-1.0, min(1.0, dz / d12)))
    v1 = traversed_distance(s0, s1) / (s1.t - s0.t)
    v2 = d12 / (s2.t - s1.t)
    accel = (v2 - v1) / (s2.t - s0.t)
    return NodeState(node_id, (s0, s1, s2), azimuth, polar, v2, accel)


def predict_position(state: NodeState, dt: float) -> Tuple[float, float, float]:
    """Extrapolate the node ``dt`` seconds past its last sample.

    Motion is along the fixed derived heading with constant acceleration:
    displacement v*dt + a*dt^2/2 resolved through the polar and azimuthal
    angles. ``dt`` = 0 returns the last sample position exactly.
    """
    disp = state.speed * dt + 0.5 * state.acceleration * dt * dt
    sin_p = math.sin(state.polar)
    x2, y2, z2 = state.samples[2].coords()
    return (
        x2 + disp * sin_p * math.cos(state.azimuth),
        y2 + disp * sin_p * math.sin(state.azimuth),
        z2 + disp * math.cos(state.polar),
    )


def motion_coefficients(state: NodeState) -> np.ndarray:
    """Per-axis quadratic coefficients of the predicted position.

    Returns a (3, 3) array ``c`` with position(dt) = c[:,0] + c[:,1]*dt +
    c[:,2]*dt^2, identical to :func:`predict_position`.
    """
    sin_p = math.sin(state.polar)
    u = np.array(
        [
            sin_p * math.cos(state.azimuth),
            sin_p * math.sin(state.azimuth),
            math.cos(state.polar),
        ]
    )
    c = np.empty((3, 3))
    c[:, 0] = state.samples[2].coords()
    c[:, 1] = state.speed * u
    c[:, 2] = 0.5 * state.acceleration * u
    return c


def newton_coefficients(
    samples: Sequence[PositionSample],
) -> np.ndarray:
    """Quadratic fit of three samples by Newton divided differences.

    Returns (3, 3) coefficients in the same layout as
    :func:`motion_coefficients`, with dt measured from the last sample time.
    The fit passes through all three samples exactly; dt = 0 reproduces the
    last sample.
    """
    s0, s1, s2 = samples
    if not (s0.t < s1.t < s2.t):
        raise ValueError(
            f"sample timestamps must be strictly increasing, "
            f"got {s0.t}, {s1.t}, {s2.t}"
        )
    p0 = np.array(s0.coords())
    p1 = np.array(s1.coords())
    p2 = np.array(s2.coords())
    f01 = (p1 - p0) / (s1.t - s0.t)
    f12 = (p2 - p1) / (s2.t - s1.t)
    f012 = (f12 - f01) / (s2.t - s0.t)
    # Re-center p(t) = p0 + f01*(t-t0) + f012*(t-t0)(t-t1) at t = t2 + dt.
    a = s2.t - s0.t
    b = s2.t - s1.t
    c = np.empty((3, 3))
    c[:, 0] = p0 + f01 * a + f012 * a * b
    c[:, 1] = f01 + f012 * (a + b)
    c[:, 2] = f012
    return c


def _separation_quartic(ci: np.ndarray, cj: np.ndarray) -> Tuple[float, ...]:
    """Coefficients k0..k4 of squared separation between two quadratics."""
    d = ci - cj
    a0, a1, a2 = d[:, 0], d[:, 1], d[:, 2]
    k0 = float(np.dot(a0, a0))
    k1 = float(2.0 * np.dot(a0, a1))
    k2 = float(np.dot(a1, a1) + 2.0 * np.dot(a0, a2))
    k3 = float(2.0 * np.dot(a1, a2))
    k4 = float(np.dot(a2, a2))
    return k0, k1, k2, k3, k4


def first_range_exit(
    ci: np.ndarray,
    cj: np.ndarray,
    comm_range: float,
    horizon: float,
    tol: float = DEFAULT_TOL,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> Tuple[float, bool]:
    """First time two quadratic trajectories separate beyond a range.

    ``ci``/``cj`` are (3, 3) coefficient arrays as produced by
    :func:`motion_coefficients` or :func:`newton_coefficients`. The squared
    separation is a quartic in dt; it is scanned in ``scan_step`` increments
    up to ``horizon`` and the first sign-changing bracket is bisected down
    to ``tol``. Returns (horizon, False) when the pair stays within range at
    every scanned point.
    """
    if horizon <= 0.0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    k0, k1, k2, k3, k4 = _separation_quartic(ci, cj)
    r2 = comm_range * comm_range

    def over_range(t: float) -> float:
        return (((k4 * t + k3) * t + k2) * t + k1) * t + k0 - r2

    grid = np.arange(0.0, horizon, scan_step)
    if grid[-1] < horizon:
        grid = np.append(grid, horizon)
    vals = (((k4 * grid + k3) * grid + k2) * grid + k1) * grid + k0 - r2
    outside = np.nonzero(vals > 0.0)[0]
    if outside.size == 0:
        return float(horizon), False
    hit = int(outside[0])
    if hit == 0:
        raise ValueError("pair is already out of range at dt = 0")
    lo = float(grid[hit - 1])
    hi = float(grid[hit])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if over_range(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), True


def link_lifetime(
    si: NodeState,
    sj: NodeState,
    comm_range: float,
    horizon: float,
    tol: float = DEFAULT_TOL,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> LifetimeEstimate:
    """Predict how long two currently-connected nodes stay within range.

    Both nodes follow their derived constant-acceleration headings. The
    returned lifetime is the first dt > 0 with separation > ``comm_range``,
    located to within ``tol``; pairs that never separate within ``horizon``
    are reported as (horizon, converged=False).

    Raises ValueError if the pair is already out of range at dt = 0.
    """
    d0 = traversed_distance(si.samples[2], sj.samples[2])
    if d0 > comm_range:
        raise ValueError(
            f"nodes {si.node_id} and {sj.node_id} are already out of range "
            f"({d0:.3f} m > {comm_range:.3f} m)"
        )
    tau, converged = first_range_exit(
        motion_coefficients(si),
        motion_coefficients(sj),
        comm_range,
        horizon,
        tol,
        scan_step,
    )
    return LifetimeEstimate((si.node_id, sj.node_id), tau, converged)


def extrapolation_lifetime(
    samples_i: Sequence[PositionSample],
    samples_j: Sequence[PositionSample],
    comm_range: float,
    horizon: float,
    tol: float = DEFAULT_TOL,
    scan_step: float = DEFAULT_SCAN_STEP,
    link: Tuple[int, int] = (0, 1),
) -> LifetimeEstimate:
    """Baseline lifetime predictor using divided-difference extrapolation.

    Each node's three raw samples are fit with a quadratic per coordinate
    and extrapolated; the range-exit search is identical to
    :func:`link_lifetime`.
    """
    ci = newton_coefficients(samples_i)
    cj = newton_coefficients(samples_j)
    d0 = traversed_distance(samples_i[2], samples_j[2])
    if d0 > comm_range:
        raise ValueError(
            f"nodes {link[0]} and {link[1]} are already out of range "
            f"({d0:.3f} m > {comm_range:.3f} m)"
        )
    tau, converged = first_range_exit(ci, cj, comm_range, horizon, tol, scan_step)
    return LifetimeEstimate(link, tau, converged)
