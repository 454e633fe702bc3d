"""Route optimization over connectivity snapshots.

A route is scored on three axes: its length (hop count), the inverse of its
lifetime (a path dies with its shortest-lived link), and its load (the most
contended node it transits). Two aggregate objectives are defined:

* ``objective_blp``        = w1*hops + w2*max(1/tau) + w3*max(load)
* ``objective_bottleneck`` = w1*hops + max over edges of the per-edge
  lifetime-load cost  w2/tau_ij + w3*load_j.

``solve`` runs the iterative BFS-and-prune search: find the shortest path,
score it, delete every edge whose lifetime-load cost is at least the path's
bottleneck cost, and repeat until source and destination disconnect. For
the bottleneck objective this provably returns the optimum: any path that
survives a pruning round is no shorter than the path that triggered it and
has a strictly smaller bottleneck cost, so the best candidate is always
enumerated before the graph falls apart. Each round deletes at least one
edge, bounding the rounds by |E|.

``oracle_solve`` exhaustively enumerates all simple paths on small graphs
and is the reference the solver is validated against.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .topology import ConnectivityGraph

__all__ = [
    "Weights",
    "Route",
    "SolveStats",
    "edge_cost",
    "evaluate",
    "bfs_shortest_path",
    "solve",
    "oracle_solve",
]

ORACLE_MAX_NODES = 14


@dataclass(frozen=True)
class Weights:
    """Importance weights for path length, lifetime, and load; they sum to 1."""

    w1: float
    w2: float
    w3: float

    def __post_init__(self):
        for name, w in (("w1", self.w1), ("w2", self.w2), ("w3", self.w3)):
            if not (0.0 <= w <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {w}")
        total = self.w1 + self.w2 + self.w3
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class Route:
    """A simple path plus the decomposition of both objectives."""

    nodes: Tuple[int, ...]
    hop_count: int
    inverse_lifetime: float   # max over edges of 1/tau
    path_load: float          # max load over nodes with an outgoing edge
    bottleneck_cost: float    # max over edges of w2/tau + w3*load(head)
    objective_blp: float
    objective_bottleneck: float

    @property
    def src(self) -> int:
        return self.nodes[0]

    @property
    def dst(self) -> int:
        return self.nodes[-1]


@dataclass
class SolveStats:
    """Per-call diagnostics of the pruning loop."""

    iterations: int = 0
    edges_total: int = 0
    candidates: List[Tuple[int, float]] = field(default_factory=list)
    # (hop_count, bottleneck_cost) of each BFS candidate, in order


def edge_cost(
    g: ConnectivityGraph, loads: Mapping[int, float], w: Weights, i: int, j: int
) -> float:
    """Lifetime-load cost of edge (i, j): w2/tau + w3 * load of the head."""
    return w.w2 / g.lifetime(i, j) + w.w3 * loads.get(j, 0)


def evaluate(
    path: Tuple[int, ...] | List[int],
    g: ConnectivityGraph,
    loads: Mapping[int, float],
    w: Weights,
) -> Route:
    """Score a path under both objectives.

    The path load maximizes over all path nodes except the destination: the
    destination only receives, so it has no outgoing path edge. The
    bottleneck cost maximizes the per-edge cost, which charges each edge's
    head-node load (the source's own load is never charged).

    Raises ValueError unless the input is a simple path in ``g``.
    """
    nodes = tuple(path)
    if len(nodes) < 2:
        raise ValueError("a path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise ValueError(f"path revisits a node: {nodes}")
    inv_life = 0.0
    cost = 0.0
    for i, j in zip(nodes, nodes[1:]):
        if not g.has_edge(i, j):
            raise ValueError(f"({i}, {j}) is not an edge of the graph")
        inv_life = max(inv_life, 1.0 / g.lifetime(i, j))
        cost = max(cost, edge_cost(g, loads, w, i, j))
    load = max(loads.get(i, 0) for i in nodes[:-1])
    hops = len(nodes) - 1
    return Route(
        nodes=nodes,
        hop_count=hops,
        inverse_lifetime=inv_life,
        path_load=load,
        bottleneck_cost=cost,
        objective_blp=w.w1 * hops + w.w2 * inv_life + w.w3 * load,
        objective_bottleneck=w.w1 * hops + cost,
    )


def bfs_shortest_path(
    g: ConnectivityGraph,
    src: int,
    dst: int,
    dead: Optional[set] = None,
) -> Optional[List[int]]:
    """Fewest-hop path from src to dst, or None if disconnected.

    Neighbors are expanded in ascending id order and each node keeps its
    first discoverer as parent, which makes the result the lexicographically
    smallest among all fewest-hop paths. ``dead`` is an optional set of
    directed edges to treat as removed.
    """
    if not g.has_node(src):
        raise KeyError(f"unknown node {src}")
    if not g.has_node(dst):
        raise KeyError(f"unknown node {dst}")
    parent: Dict[int, int] = {src: src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v in parent or (dead is not None and (u, v) in dead):
                continue
            parent[v] = u
            if v == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(v)
    return None


def solve(
    g: ConnectivityGraph,
    loads: Mapping[int, float],
    src: int,
    dst: int,
    w: Weights,
    objective: str = "bottleneck",
    stats: Optional[SolveStats] = None,
) -> Optional[Route]:
    """Find the minimum-objective route by iterative BFS and edge pruning.

    ``objective`` selects the incumbent comparison: "bottleneck" (default,
    for which the search is exactly optimal) or "blp" (the decomposed
    objective, for which pruning is a heuristic; see ``oracle_solve`` for
    measuring the gap). Ties are broken toward fewer hops, then the
    lexicographically smallest node sequence.

    Returns None when no path exists at all. Pass a ``SolveStats`` to
    collect iteration diagnostics.
    """
    if objective not in ("bottleneck", "blp"):
        raise ValueError(f"unknown objective {objective!r}")
    if src == dst:
        raise ValueError("source and destination must differ")
    if not g.has_node(src):
        raise KeyError(f"unknown node {src}")
    if not g.has_node(dst):
        raise KeyError(f"unknown node {dst}")

    # Pre-compute every edge cost once and keep a descending-cost index so
    # each pruning round is a pointer advance over the sorted list.
    by_cost = sorted(
        ((edge_cost(g, loads, w, i, j), i, j) for i, j, _ in g.edges()),
        key=lambda e: (-e[0], e[1], e[2]),
    )
    total_edges = len(by_cost)
    dead: set = set()
    cursor = 0

    best: Optional[Route] = None
    best_key: Optional[Tuple[float, int, Tuple[int, ...]]] = None
    iterations = 0
    while True:
        path = bfs_shortest_path(g, src, dst, dead)
        if path is None:
            break
        iterations += 1
        route = evaluate(path, g, loads, w)
        obj = (
            route.objective_bottleneck
            if objective == "bottleneck"
            else route.objective_blp
        )
        key = (obj, route.hop_count, route.nodes)
        if best_key is None or key < best_key:
            best, best_key = route, key
        if stats is not None:
            stats.candidates.append((route.hop_count, route.bottleneck_cost))
        # Drop every edge at least as costly as this path's bottleneck; the
        # path's own worst edge always qualifies, so each round removes >= 1.
        threshold = route.bottleneck_cost
        while cursor < total_edges and by_cost[cursor][0] >= threshold:
            _, i, j = by_cost[cursor]
            dead.add((i, j))
            cursor += 1
        assert iterations <= total_edges, "pruning loop exceeded edge count"
    if stats is not None:
        stats.iterations = iterations
        stats.edges_total = total_edges
    return best


def oracle_solve(
    g: ConnectivityGraph,
    loads: Mapping[int, float],
    src: int,
    dst: int,
    w: Weights,
    objective_kind: str = "bottleneck",
    max_nodes: int = ORACLE_MAX_NODES,
) -> Optional[Route]:
    """Exhaustive reference solver: enumerate every simple src-dst path.

    Realizes the exact optimization the pruning solver approximates (and,
    for the bottleneck objective, matches): minimize the selected objective
    over all simple paths, with the same tie-breaking as ``solve``. Refuses
    graphs with more than ``max_nodes`` nodes.
    """
    if objective_kind not in ("bottleneck", "blp"):
        raise ValueError(f"unknown objective {objective_kind!r}")
    if src == dst:
        raise ValueError("source and destination must differ")
    if not g.has_node(src):
        raise KeyError(f"unknown node {src}")
    if not g.has_node(dst):
        raise KeyError(f"unknown node {dst}")
    if g.num_nodes > max_nodes:
        raise ValueError(
            f"graph too large for enumeration ({g.num_nodes} > {max_nodes})"
        )

    best: Optional[Route] = None
    best_key: Optional[Tuple[float, int, Tuple[int, ...]]] = None
    path: List[int] = [src]
    on_path = {src}

    def visit(u: int):
        nonlocal best, best_key
        if u == dst:
            route = evaluate(path, g, loads, w)
            obj = (
                route.objective_bottleneck
                if objective_kind == "bottleneck"
                else route.objective_blp
            )
            key = (obj, route.hop_count, route.nodes)
            if best_key is None or key < best_key:
                best, best_key = route, key
            return
        for v in g.neighbors(u):
            if v in on_path:
                continue
            path.append(v)
            on_path.add(v)
            visit(v)
            path.pop()
            on_path.remove(v)

    visit(src)
    return best
