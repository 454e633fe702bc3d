"""Router tests: objective evaluation, the pruning solver, and its oracle.

The exhaustive enumeration solver is the ground truth for the bottleneck
objective: every random instance must match it exactly. The diamond-graph
hand oracle pins the weighted trade-off arithmetic.
"""

import math

import numpy as np
import pytest

from fanetsim.router import (
    SolveStats,
    Weights,
    bfs_shortest_path,
    evaluate,
    oracle_solve,
    solve,
)
from fanetsim.topology import ConnectivityGraph


def graph_from(edges):
    """Undirected helper: {(i, j): tau} -> both directions."""
    full = {}
    nodes = set()
    for (i, j), tau in edges.items():
        full[(i, j)] = tau
        full[(j, i)] = tau
        nodes.update((i, j))
    return ConnectivityGraph(nodes, full)


def random_connected_graph(rng, n_lo=4, n_hi=12, extra_factor=1.0,
                           tau_lo=1.0, tau_hi=500.0):
    n = int(rng.integers(n_lo, n_hi + 1))
    edges = {}
    order = list(rng.permutation(n))
    for a, b in zip(order, order[1:]):  # random spanning tree
        edges[(min(a, b), max(a, b))] = float(rng.uniform(tau_lo, tau_hi))
    extra = int(rng.integers(0, max(1, int(n * extra_factor)) + 1))
    for _ in range(extra):
        i, j = rng.choice(n, size=2, replace=False)
        edges[(min(i, j), max(i, j))] = float(rng.uniform(tau_lo, tau_hi))
    loads = {i: int(rng.integers(0, 11)) for i in range(n)}
    raw = rng.uniform(0.05, 1.0, 3)
    raw /= raw.sum()
    w = Weights(float(raw[0]), float(raw[1]), float(1.0 - raw[0] - raw[1]))
    src, dst = (int(x) for x in rng.choice(n, size=2, replace=False))
    return graph_from(edges), loads, w, src, dst


class TestWeights:
    def test_must_sum_to_one(self):
        Weights(0.5, 0.3, 0.2)
        with pytest.raises(ValueError):
            Weights(0.5, 0.3, 0.3)

    def test_range_checked(self):
        with pytest.raises(ValueError):
            Weights(1.2, -0.2, 0.0)


class TestEvaluate:
    def test_single_edge_hand_values(self):
        g = graph_from({(0, 1): 10.0})
        loads = {0: 2, 1: 7}
        w = Weights(0.5, 0.3, 0.2)
        r = evaluate([0, 1], g, loads, w)
        assert r.hop_count == 1
        assert r.inverse_lifetime == pytest.approx(0.1)
        assert r.path_load == 2  # destination excluded
        assert r.objective_blp == pytest.approx(0.93)
        # bottleneck cost charges the head load: 0.3/10 + 0.2*7 = 1.43
        assert r.bottleneck_cost == pytest.approx(1.43)
        assert r.objective_bottleneck == pytest.approx(1.93)

    def test_pure_hop_weights(self):
        g = graph_from({(0, 1): 3.0, (1, 2): 9.0, (2, 3): 27.0})
        r = evaluate([0, 1, 2, 3], g, {i: 5 for i in range(4)}, Weights(1, 0, 0))
        assert r.objective_blp == 3.0 == r.hop_count
        assert r.objective_bottleneck == 3.0

    def test_inverse_lifetime_is_order_free_max(self):
        w = Weights(0.5, 0.5, 0.0)
        g = graph_from({(0, 1): 5.0, (1, 2): 20.0})
        fwd = evaluate([0, 1, 2], g, {}, w)
        g2 = graph_from({(0, 1): 20.0, (1, 2): 5.0})
        rev = evaluate([0, 1, 2], g2, {}, w)
        assert fwd.inverse_lifetime == rev.inverse_lifetime == pytest.approx(0.2)

    def test_rejects_non_paths(self):
        g = graph_from({(0, 1): 5.0, (1, 2): 5.0})
        with pytest.raises(ValueError):
            evaluate([0, 2], g, {}, Weights(1, 0, 0))
        with pytest.raises(ValueError):
            evaluate([0, 1, 0], g, {}, Weights(1, 0, 0))
        with pytest.raises(ValueError):
            evaluate([0], g, {}, Weights(1, 0, 0))


class TestBfs:
    def test_fewest_hops_and_lexicographic_tie_break(self):
        g = graph_from({(0, 2): 1.0, (2, 4): 1.0, (0, 3): 1.0, (3, 4): 1.0})
        assert bfs_shortest_path(g, 0, 4) == [0, 2, 4]

    def test_disconnected_returns_none(self):
        g = ConnectivityGraph([0, 1, 2], {(0, 1): 5.0, (1, 0): 5.0})
        assert bfs_shortest_path(g, 0, 2) is None

    def test_unknown_nodes_raise(self):
        g = graph_from({(0, 1): 5.0})
        with pytest.raises(KeyError):
            bfs_shortest_path(g, 0, 99)


class TestSolve:
    def test_single_path_graph(self):
        g = graph_from({(0, 1): 7.0, (1, 2): 3.0})
        stats = SolveStats()
        r = solve(g, {0: 1, 1: 2, 2: 3}, 0, 2, Weights(0.4, 0.4, 0.2), stats=stats)
        assert r.nodes == (0, 1, 2)
        assert stats.iterations <= 2

    def test_pure_hop_weights_match_bfs(self):
        rng = np.random.default_rng(51)
        for _ in range(50):
            g, loads, _, src, dst = random_connected_graph(rng)
            r = solve(g, loads, src, dst, Weights(1, 0, 0))
            bfs = bfs_shortest_path(g, src, dst)
            assert r.hop_count == len(bfs) - 1

    def test_diamond_tradeoff_hand_oracle(self):
        # Short route: 2 hops, min lifetime 2 (T = 0.5). Long route: 4 hops,
        # lifetime 100 (T = 0.01). Loads all zero.
        g = graph_from({
            (0, 1): 2.0, (1, 5): 500.0,          # short, short-lived
            (0, 2): 100.0, (2, 3): 100.0, (3, 4): 100.0, (4, 5): 100.0,
        })
        loads = {i: 0 for i in range(6)}
        r = solve(g, loads, 0, 5, Weights(0.2, 0.8, 0.0))
        # 0.2*2 + 0.8*0.5 = 0.8 beats 0.2*4 + 0.8*0.01 = 0.808
        assert r.nodes == (0, 1, 5)
        assert r.objective_bottleneck == pytest.approx(0.8)
        r = solve(g, loads, 0, 5, Weights(0.1, 0.9, 0.0))
        # 0.1*2 + 0.9*0.5 = 0.65 loses to 0.1*4 + 0.9*0.01 = 0.409
        assert r.nodes == (0, 2, 3, 4, 5)
        assert r.objective_bottleneck == pytest.approx(0.409)

    def test_no_path_returns_none(self):
        g = ConnectivityGraph([0, 1, 2], {(0, 1): 5.0, (1, 0): 5.0})
        assert solve(g, {}, 0, 2, Weights(1, 0, 0)) is None

    def test_same_src_dst_rejected(self):
        g = graph_from({(0, 1): 5.0})
        with pytest.raises(ValueError):
            solve(g, {}, 0, 0, Weights(1, 0, 0))

    def test_unknown_ids_raise(self):
        g = graph_from({(0, 1): 5.0})
        with pytest.raises(KeyError):
            solve(g, {}, 0, 9, Weights(1, 0, 0))
        with pytest.raises(KeyError):
            oracle_solve(g, {}, 9, 0, Weights(1, 0, 0))

    def test_matches_oracle_on_random_graphs(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            g, loads, w, src, dst = random_connected_graph(rng, n_hi=8)
            got = solve(g, loads, src, dst, w)
            want = oracle_solve(g, loads, src, dst, w, "bottleneck")
            assert got is not None and want is not None
            assert got.objective_bottleneck == pytest.approx(
                want.objective_bottleneck, rel=1e-9, abs=1e-12
            )

    def test_iteration_bound_and_pruning_monotonicity(self):
        rng = np.random.default_rng(101)
        for _ in range(100):
            g, loads, w, src, dst = random_connected_graph(rng)
            stats = SolveStats()
            solve(g, loads, src, dst, w, stats=stats)
            assert stats.iterations <= stats.edges_total
            hops = [h for h, _ in stats.candidates]
            costs = [c for _, c in stats.candidates]
            assert hops == sorted(hops)
            assert all(b < a for a, b in zip(costs, costs[1:]))

    def test_scaling_invariance(self):
        # Scaling loads and 1/tau by c scales the cost term affinely and
        # preserves the bottleneck-argmin path set.
        rng = np.random.default_rng(103)
        for _ in range(30):
            g, loads, w, src, dst = random_connected_graph(rng, n_hi=7)
            for c in (0.5, 3.0):
                scaled_edges = {
                    (i, j): tau / c for i, j, tau in g.edges()
                }
                g_scaled = ConnectivityGraph(g.nodes, scaled_edges)
                loads_scaled = {k: v * c for k, v in loads.items()}
                base = solve(g, loads, src, dst, w)
                scaled = solve(g_scaled, loads_scaled, src, dst, w)
                want = (base.objective_bottleneck - w.w1 * base.hop_count) * c
                got = scaled.objective_bottleneck - w.w1 * scaled.hop_count
                assert got == pytest.approx(want, rel=1e-9)
                oracle_base = oracle_solve(g, loads, src, dst, w)
                oracle_scaled = oracle_solve(
                    g_scaled, loads_scaled, src, dst, w
                )
                assert oracle_base.nodes == oracle_scaled.nodes

    def test_blp_objective_flag(self):
        g = graph_from({(0, 1): 10.0, (1, 2): 10.0})
        loads = {0: 0, 1: 4, 2: 0}
        r = solve(g, loads, 0, 2, Weights(0.3, 0.3, 0.4), objective="blp")
        assert r is not None
        with pytest.raises(ValueError):
            solve(g, loads, 0, 2, Weights(0.3, 0.3, 0.4), objective="widest")


class TestOracle:
    def test_single_edge(self):
        g = graph_from({(0, 1): 5.0})
        r = oracle_solve(g, {0: 0, 1: 0}, 0, 1, Weights(0.5, 0.25, 0.25))
        assert r.nodes == (0, 1)

    def test_pure_hop_equals_bfs_distance(self):
        rng = np.random.default_rng(107)
        for _ in range(30):
            g, loads, _, src, dst = random_connected_graph(rng, n_hi=8)
            r = oracle_solve(g, loads, src, dst, Weights(1, 0, 0))
            bfs = bfs_shortest_path(g, src, dst)
            assert r.objective_bottleneck == pytest.approx(len(bfs) - 1)

    def test_size_bound_enforced(self):
        edges = {(i, i + 1): 5.0 for i in range(20)}
        g = graph_from(edges)
        with pytest.raises(ValueError):
            oracle_solve(g, {}, 0, 20, Weights(1, 0, 0))
        assert oracle_solve(g, {}, 0, 20, Weights(1, 0, 0), max_nodes=30) is not None
