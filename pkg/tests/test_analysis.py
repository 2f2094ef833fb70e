import math
import random

import pytest

from conftest import make_net
from oracles import brute_force_min_cut, enumerate_shortest, random_network
from spatnet.analysis import (
    WeightSpec,
    all_pairs_floyd_warshall,
    max_flow_ford_fulkerson,
    point_no_flow,
    reachable_set,
    shortest_path_bellman_ford,
    shortest_path_dijkstra,
)
from spatnet.errors import (
    NegativeCapacityError,
    NegativeCycleError,
    NegativeWeightError,
    SchemaMismatchError,
    UnknownObjectError,
)
from spatnet.model import Link

UNIT = WeightSpec.unit()


def weighted_net(pairs_with_w):
    net = make_net(max(max(a, b) for a, b, _ in pairs_with_w), [])
    for idx, (a, b, w) in enumerate(pairs_with_w, start=1):
        net.add_link(Link(link_id=idx, from_id=a, to_id=b, params={"w": w}))
    return net


class TestDijkstra:
    def test_sample_network(self, water_net):
        result = shortest_path_dijkstra(water_net, 1, 6, UNIT)
        assert result.distance == 3
        assert result.path == (1, 2, 3, 6)

    def test_source_equals_target(self, water_net):
        result = shortest_path_dijkstra(water_net, 3, 3, UNIT)
        assert result.distance == 0 and result.path == (3,)

    def test_unreachable(self, water_net):
        # object 4 never appears in the FROM column
        assert shortest_path_dijkstra(water_net, 4, 1, UNIT) is None

    def test_lexicographic_tie_break(self):
        net = make_net(4, [(1, 3), (1, 2), (2, 4), (3, 4)])
        result = shortest_path_dijkstra(net, 1, 4, UNIT)
        assert result.path == (1, 2, 4)

    def test_negative_weight_rejected(self):
        net = weighted_net([(1, 2, -1.0)])
        with pytest.raises(NegativeWeightError):
            shortest_path_dijkstra(net, 1, 2, WeightSpec.link_param("w"))

    def test_unknown_object(self, water_net):
        with pytest.raises(UnknownObjectError):
            shortest_path_dijkstra(water_net, 99, 1, UNIT)

    def test_missing_weight_param(self, water_net):
        with pytest.raises(SchemaMismatchError):
            shortest_path_dijkstra(water_net, 1, 6, WeightSpec.link_param("nope"))


class TestBellmanFord:
    def test_sample_network(self, water_net):
        result = shortest_path_bellman_ford(water_net, 1, 6, UNIT)
        assert result.distance == 3
        assert result.path == (1, 2, 3, 6)

    def test_negative_cycle(self):
        net = weighted_net([(1, 2, 1.0), (2, 3, -2.0), (3, 2, 0.5), (3, 4, 1.0)])
        with pytest.raises(NegativeCycleError):
            shortest_path_bellman_ford(net, 1, 4, WeightSpec.link_param("w"))

    def test_unreachable(self, water_net):
        assert shortest_path_bellman_ford(water_net, 5, 1, UNIT) is None

    def test_negative_weights_allowed(self):
        net = weighted_net([(1, 2, 5.0), (1, 3, 2.0), (3, 2, -1.0)])
        result = shortest_path_bellman_ford(net, 1, 2, WeightSpec.link_param("w"))
        assert result.distance == pytest.approx(1.0)
        assert result.path == (1, 3, 2)

    def test_unreachable_negative_cycle_ignored(self):
        # a negative cycle that src cannot reach must not trip detection
        net = weighted_net([(1, 2, 1.0), (3, 4, -2.0), (4, 3, 1.0)])
        result = shortest_path_bellman_ford(net, 1, 2, WeightSpec.link_param("w"))
        assert result.distance == pytest.approx(1.0)


class TestFloydWarshall:
    def test_sample_entries(self, water_net):
        dist = all_pairs_floyd_warshall(water_net, UNIT)
        assert dist[1][6] == 3
        assert dist[1][4] == 1
        assert dist[5][6] == 1

    def test_diagonal_zero(self, water_net):
        dist = all_pairs_floyd_warshall(water_net, UNIT)
        assert all(dist[i][i] == 0 for i in water_net.object_ids())

    def test_sink_row_unreachable(self, water_net):
        dist = all_pairs_floyd_warshall(water_net, UNIT)
        assert all(math.isinf(dist[4][j]) for j in water_net.object_ids() if j != 4)

    def test_negative_cycle(self):
        net = weighted_net([(1, 2, 1.0), (2, 1, -2.0)])
        with pytest.raises(NegativeCycleError):
            all_pairs_floyd_warshall(net, WeightSpec.link_param("w"))


class TestReachability:
    def test_from_source(self, water_net):
        assert reachable_set(water_net, 1) == {1, 2, 3, 4, 5, 6}

    def test_from_sink(self, water_net):
        assert reachable_set(water_net, 4) == {4}

    def test_partial(self, water_net):
        assert reachable_set(water_net, 5) == {5, 6}

    def test_bfs_equals_dfs(self):
        rand = random.Random(5)
        for _ in range(30):
            net = random_network(rand, max_objects=10, max_links=25, k=1)
            for src in net.object_ids():
                assert reachable_set(net, src, "bfs") == reachable_set(net, src, "dfs")


class TestMaxFlow:
    def test_sample_network(self, water_net):
        value, flows = max_flow_ford_fulkerson(water_net, 1, 6, UNIT)
        assert value == 1
        # all routes 1 -> 6 share the single link 2 -> 3
        assert flows[3] == 1

    def test_no_outgoing_links(self, water_net):
        value, _ = max_flow_ford_fulkerson(water_net, 4, 6, UNIT)
        assert value == 0

    def test_two_disjoint_paths(self):
        net = make_net(4, [(1, 2), (2, 4), (1, 3), (3, 4)])
        value, _ = max_flow_ford_fulkerson(net, 1, 4, UNIT)
        assert value == 2

    def test_flow_feasibility(self, water_net):
        value, flows = max_flow_ford_fulkerson(water_net, 1, 6, UNIT)
        for link in water_net.registry.values():
            assert 0 <= flows[link.link_id] <= 1
        for oid in water_net.object_ids():
            if oid in (1, 6):
                continue
            inflow = sum(flows[l.link_id] for l in water_net.in_links(oid))
            outflow = sum(flows[l.link_id] for l in water_net.out_links(oid))
            assert inflow == pytest.approx(outflow)

    def test_negative_capacity(self):
        net = weighted_net([(1, 2, -3.0)])
        with pytest.raises(NegativeCapacityError):
            max_flow_ford_fulkerson(net, 1, 2, WeightSpec.link_param("w"))

    def test_same_endpoints_rejected(self, water_net):
        with pytest.raises(ValueError):
            max_flow_ford_fulkerson(water_net, 1, 1, UNIT)

    def test_matches_min_cut_spot(self):
        rand = random.Random(99)
        spec = WeightSpec.link_param("cap")
        for _ in range(25):
            net = random_network(rand, max_objects=7, max_links=18, k=1,
                                 weight_param="cap", max_weight=8)
            ids = net.object_ids()
            if len(ids) < 2:
                continue
            src, dst = ids[0], ids[-1]
            value, _ = max_flow_ford_fulkerson(net, src, dst, spec)
            cut = brute_force_min_cut(net, src, dst, spec.weight)
            assert value == pytest.approx(cut, abs=1e-9)


class TestPointNoFlow:
    def test_sample_network(self, water_net):
        assert point_no_flow(water_net) == [1, 4, 6]

    def test_cycle_has_none(self):
        net = make_net(3, [(1, 2), (2, 3), (3, 1)])
        assert point_no_flow(net) == []

    def test_single_link(self):
        net = make_net(2, [(1, 2)])
        assert point_no_flow(net) == [1, 2]

    def test_isolated_objects_excluded(self):
        net = make_net(3, [(1, 2)])
        assert point_no_flow(net) == [1, 2]

    def test_invariant_under_link_renumbering(self, water_net):
        renumbered = make_net(6, [])
        for new_id, link in enumerate(reversed(water_net.links_sorted()), start=10):
            renumbered.add_link(Link(link_id=new_id, from_id=link.from_id,
                                     to_id=link.to_id))
        assert point_no_flow(renumbered) == point_no_flow(water_net)


def assert_path_valid(net, result, weight_of):
    """PathResult contract: consecutive hops are registry links and the
    distance is the sum of the traversed weights."""
    rows = {(l.from_id, l.to_id): l for l in net.registry.values()}
    total = 0.0
    for a, b in zip(result.path, result.path[1:]):
        assert (a, b) in rows
        total += weight_of(rows[(a, b)])
    assert abs(total - result.distance) <= 1e-9


class TestAlgorithmAgreement:
    def test_three_algorithms_and_oracle_agree(self):
        rand = random.Random(1234)
        spec = WeightSpec.link_param("w")
        for _ in range(20):
            net = random_network(rand, max_objects=8, max_links=20, k=1,
                                 weight_param="w", max_weight=9)
            matrix = all_pairs_floyd_warshall(net, spec)
            for src in net.object_ids():
                for dst in net.object_ids():
                    d = shortest_path_dijkstra(net, src, dst, spec)
                    b = shortest_path_bellman_ford(net, src, dst, spec)
                    oracle = enumerate_shortest(net, src, dst, spec.weight)
                    if d is None:
                        assert b is None and oracle is None
                        assert math.isinf(matrix[src][dst])
                        continue
                    assert abs(d.distance - b.distance) <= 1e-9
                    assert abs(d.distance - matrix[src][dst]) <= 1e-9
                    assert abs(d.distance - oracle[0]) <= 1e-9
                    assert d.path == oracle[1]
                    assert_path_valid(net, d, spec.weight)
                    assert_path_valid(net, b, spec.weight)
