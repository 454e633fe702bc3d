"""Controller-side bookkeeping of per-node communication load.

The load of a node counts how many active routes contend for the medium in
its vicinity: installing a route increments the load of every node on the
route and every one-hop neighbor of a route node, exactly once per route;
tearing the route down decrements the same set. The affected set is frozen
at install time against the snapshot the route was computed on, so the
increments and decrements always cancel, whatever the nodes do in between.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

from .topology import ConnectivityGraph

__all__ = ["RouteLease", "LoadTracker"]


@dataclass
class RouteLease:
    """One installed route's claim on the load vector."""

    lease_id: int
    route_nodes: Tuple[int, ...]
    affected: FrozenSet[int]
    active: bool = True


class LoadTracker:
    """Single-writer load vector over a fixed node population.

    All loads start at zero. Only install/teardown mutate the vector; reads
    go through :attr:`loads` (live view, treat as read-only) or
    :meth:`snapshot`.
    """

    def __init__(self, nodes: Iterable[int]):
        self._loads: Dict[int, int] = {i: 0 for i in sorted(set(nodes))}
        self._next_lease = 0
        self._active: Dict[int, RouteLease] = {}

    @property
    def loads(self) -> Dict[int, int]:
        return self._loads

    def snapshot(self) -> Dict[int, int]:
        return dict(self._loads)

    def load(self, i: int) -> int:
        return self._loads[i]

    @property
    def active_leases(self) -> int:
        return len(self._active)

    def install(
        self, route_nodes: Sequence[int], g: ConnectivityGraph
    ) -> RouteLease:
        """Install a route: bump the load of it and its one-hop vicinity.

        The affected set is the union of the route's nodes with every route
        node's neighbors in ``g``; a node reachable from several hops still
        counts once. Nodes outside this tracker's population are ignored.
        """
        affected = set(route_nodes)
        for v in route_nodes:
            affected.update(g.neighbors(v))
        affected &= self._loads.keys()
        lease = RouteLease(self._next_lease, tuple(route_nodes), frozenset(affected))
        self._next_lease += 1
        for v in affected:
            self._loads[v] += 1
        self._active[lease.lease_id] = lease
        return lease

    def teardown(self, lease: RouteLease) -> None:
        """Release a lease, decrementing its frozen affected set.

        Raises ValueError on a second teardown of the same lease.
        """
        if not lease.active:
            raise ValueError(f"lease {lease.lease_id} already torn down")
        lease.active = False
        del self._active[lease.lease_id]
        for v in lease.affected:
            self._loads[v] -= 1
