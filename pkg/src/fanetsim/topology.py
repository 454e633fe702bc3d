"""Connectivity snapshots: which nodes can currently talk, and for how long.

A snapshot graph is built from the nodes' derived motion states: an edge
exists between two nodes when they are within communication range right now
and their predicted link lifetime exceeds a cutoff (links about to die are
useless for routing). Edges are stored directed, each annotated with the
predicted lifetime, so asymmetric ranges could be supported later; with a
uniform range the relation is symmetric and both directions carry the same
lifetime.

Snapshots are immutable once built: mobility produces new snapshots rather
than mutating old ones, so a snapshot can be shared freely across threads.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Set, Tuple

from .kinematics import NodeState, link_lifetime, traversed_distance

__all__ = ["ConnectivityGraph", "build_graph", "neighbors", "filter_by_lifetime"]


class ConnectivityGraph:
    """Immutable snapshot of node connectivity with per-edge lifetimes."""

    __slots__ = ("_nodes", "_adj", "_tau")

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Dict[Tuple[int, int], float],
    ):
        self._nodes: Tuple[int, ...] = tuple(sorted(set(nodes)))
        node_set = set(self._nodes)
        adj: Dict[int, List[int]] = {i: [] for i in self._nodes}
        for (i, j), tau in edges.items():
            if i not in node_set or j not in node_set:
                raise ValueError(f"edge ({i}, {j}) references unknown node")
            if tau <= 0.0:
                raise ValueError(f"edge ({i}, {j}) has non-positive lifetime {tau}")
            adj[i].append(j)
        self._adj: Dict[int, Tuple[int, ...]] = {
            i: tuple(sorted(js)) for i, js in adj.items()
        }
        self._tau: Dict[Tuple[int, int], float] = dict(edges)

    @property
    def nodes(self) -> Tuple[int, ...]:
        return self._nodes

    @property
    def num_nodes(self) -> int:
        return len(self._nodes)

    @property
    def num_edges(self) -> int:
        """Number of directed edges."""
        return len(self._tau)

    def has_node(self, i: int) -> bool:
        return i in self._adj

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self._tau

    def lifetime(self, i: int, j: int) -> float:
        return self._tau[(i, j)]

    def neighbors(self, i: int) -> Tuple[int, ...]:
        """Successors of node ``i``, ascending. Raises KeyError if unknown."""
        return self._adj[i]

    def edges(self) -> Iterable[Tuple[int, int, float]]:
        """Directed edges as (i, j, lifetime), in deterministic order."""
        for i in self._nodes:
            for j in self._adj[i]:
                yield i, j, self._tau[(i, j)]


def build_graph(
    states: Sequence[NodeState],
    comm_range: float,
    lifetime_cutoff: float,
    horizon: float,
    tol: float = 1e-3,
) -> ConnectivityGraph:
    """Build the connectivity snapshot for one set of motion states.

    An edge (i, j) exists iff the current distance between i and j is at
    most ``comm_range`` and the predicted link lifetime exceeds
    ``lifetime_cutoff``. Lifetimes are capped at ``horizon`` (typically the
    remaining scenario time).
    """
    if comm_range <= 0.0:
        raise ValueError(f"comm_range must be positive, got {comm_range}")
    if not (0.0 <= lifetime_cutoff < horizon):
        raise ValueError(
            f"need 0 <= lifetime_cutoff < horizon, got "
            f"{lifetime_cutoff} and {horizon}"
        )
    ids = [s.node_id for s in states]
    if len(set(ids)) != len(ids):
        raise ValueError("node ids must be distinct")
    edges: Dict[Tuple[int, int], float] = {}
    ordered = sorted(states, key=lambda s: s.node_id)
    for a in range(len(ordered)):
        si = ordered[a]
        for b in range(a + 1, len(ordered)):
            sj = ordered[b]
            if traversed_distance(si.samples[2], sj.samples[2]) > comm_range:
                continue
            est = link_lifetime(si, sj, comm_range, horizon, tol)
            if est.lifetime > lifetime_cutoff:
                edges[(si.node_id, sj.node_id)] = est.lifetime
                edges[(sj.node_id, si.node_id)] = est.lifetime
    return ConnectivityGraph(ids, edges)


def neighbors(g: ConnectivityGraph, i: int) -> Set[int]:
    """One-hop neighbor set of node ``i``. Raises KeyError if unknown."""
    return set(g.neighbors(i))


def filter_by_lifetime(
    g: ConnectivityGraph, lifetime_cutoff: float
) -> ConnectivityGraph:
    """Derive a snapshot keeping only edges with lifetime > the cutoff.

    Used to give lifetime-aware routers a pruned view of a snapshot that was
    built without a cutoff, without recomputing any lifetimes.
    """
    kept = {
        (i, j): tau for i, j, tau in g.edges() if tau > lifetime_cutoff
    }
    return ConnectivityGraph(g.nodes, kept)
