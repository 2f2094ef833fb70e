"""Network analysis: shortest paths, reachability, maximum flow, and the
point-no-flow scan.

All algorithms break ties toward the smallest object id so repeated runs
produce identical results. Shortest-path ties are resolved to the
lexicographically smallest node sequence. Unreachable results are reported
as None (single target) or math.inf (distance matrix), never as a sentinel
written to output files.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

from .errors import (
    NegativeCapacityError,
    NegativeCycleError,
    NegativeWeightError,
    SchemaMismatchError,
    UnknownObjectError,
)
from .model import Link, Network


@dataclass(frozen=True)
class WeightSpec:
    """Where link weights come from: every link 1, or a named link parameter."""

    source: str = "unit"
    param: str | None = None

    @classmethod
    def unit(cls) -> "WeightSpec":
        return cls("unit")

    @classmethod
    def link_param(cls, name: str) -> "WeightSpec":
        return cls("param", name)

    @classmethod
    def parse(cls, text: str) -> "WeightSpec":
        if text == "unit":
            return cls.unit()
        if text.startswith("param:") and len(text) > 6:
            return cls.link_param(text[6:])
        raise ValueError(f"bad weight spec {text!r}, expected 'unit' or 'param:NAME'")

    def weight(self, link: Link) -> float:
        if self.source == "unit":
            return 1.0
        try:
            value = link.params[self.param]
        except KeyError:
            raise SchemaMismatchError(
                f"link {link.link_id} has no parameter {self.param!r}") from None
        if isinstance(value, str):
            raise SchemaMismatchError(
                f"link {link.link_id}: parameter {self.param!r} is not numeric")
        return float(value)


@dataclass(frozen=True)
class PathResult:
    distance: float
    path: tuple[int, ...]


def _check_object(net: Network, oid: int) -> None:
    if oid not in net.objects:
        raise UnknownObjectError(f"no object with id {oid}")


def _adjacency(net: Network, w: WeightSpec) -> dict[int, list[tuple[int, float]]]:
    adj: dict[int, list[tuple[int, float]]] = {oid: [] for oid in net.objects}
    for link in net.links_sorted():
        adj[link.from_id].append((link.to_id, w.weight(link)))
    for neighbours in adj.values():
        neighbours.sort()
    return adj


def _dijkstra_all(net: Network, src: int, w: WeightSpec) -> dict[int, PathResult]:
    """Single-source shortest paths; ties to the lexicographically smallest path."""
    adj = _adjacency(net, w)
    for neighbours in adj.values():
        for _, weight in neighbours:
            if weight < 0:
                raise NegativeWeightError("negative link weight; use bellman_ford")
    settled: dict[int, PathResult] = {}
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (src,))]
    while heap:
        dist, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled[node] = PathResult(dist, path)
        for nbr, weight in adj[node]:
            if nbr not in settled:
                heapq.heappush(heap, (dist + weight, path + (nbr,)))
    return settled


def single_source_dijkstra(net: Network, src: int,
                           w: WeightSpec = WeightSpec.unit()) -> dict[int, PathResult]:
    """Shortest paths from src to every reachable object."""
    _check_object(net, src)
    return _dijkstra_all(net, src, w)


def shortest_path_dijkstra(net: Network, src: int, dst: int,
                           w: WeightSpec = WeightSpec.unit()) -> PathResult | None:
    _check_object(net, src)
    _check_object(net, dst)
    return _dijkstra_all(net, src, w).get(dst)


def single_source_bellman_ford(net: Network, src: int,
                               w: WeightSpec = WeightSpec.unit()) -> dict[int, PathResult]:
    """Shortest paths from src allowing negative weights; raises
    NegativeCycleError when a negative cycle is reachable from src."""
    _check_object(net, src)
    edges = [(l.from_id, l.to_id, w.weight(l)) for l in net.links_sorted()]
    edges.sort()
    best: dict[int, tuple[float, tuple[int, ...]]] = {src: (0.0, (src,))}
    for _ in range(max(len(net.objects) - 1, 1)):
        changed = False
        for u, v, weight in edges:
            if u not in best:
                continue
            dist_u, path_u = best[u]
            candidate = (dist_u + weight, path_u + (v,))
            if v not in best or candidate < best[v]:
                best[v] = candidate
                changed = True
        if not changed:
            break
    for u, v, weight in edges:
        if u in best and (v not in best or best[u][0] + weight < best[v][0] - 1e-12):
            raise NegativeCycleError("negative cycle reachable from source")
    return {oid: PathResult(dist, path) for oid, (dist, path) in best.items()}


def shortest_path_bellman_ford(net: Network, src: int, dst: int,
                               w: WeightSpec = WeightSpec.unit()) -> PathResult | None:
    _check_object(net, dst)
    return single_source_bellman_ford(net, src, w).get(dst)


def all_pairs_floyd_warshall(net: Network,
                             w: WeightSpec = WeightSpec.unit()) -> dict[int, dict[int, float]]:
    """Shortest distance matrix; math.inf marks unreachable pairs."""
    ids = net.object_ids()
    dist = {i: {j: (0.0 if i == j else math.inf) for j in ids} for i in ids}
    for link in net.links_sorted():
        weight = w.weight(link)
        if weight < dist[link.from_id][link.to_id]:
            dist[link.from_id][link.to_id] = weight
    for k in ids:
        row_k = dist[k]
        for i in ids:
            d_ik = dist[i][k]
            if math.isinf(d_ik):
                continue
            row_i = dist[i]
            for j in ids:
                alt = d_ik + row_k[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    for i in ids:
        if dist[i][i] < 0:
            raise NegativeCycleError("negative cycle detected")
    return dist


def reachable_set(net: Network, src: int, mode: str = "bfs") -> set[int]:
    """Objects reachable from src along link direction, src included."""
    _check_object(net, src)
    if mode not in ("bfs", "dfs"):
        raise ValueError(f"mode must be 'bfs' or 'dfs', got {mode!r}")
    succ: dict[int, list[int]] = {oid: [] for oid in net.objects}
    for link in net.registry.values():
        succ[link.from_id].append(link.to_id)
    for nbrs in succ.values():
        nbrs.sort()
    seen = {src}
    if mode == "bfs":
        queue = deque([src])
        while queue:
            node = queue.popleft()
            for nbr in succ[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    queue.append(nbr)
    else:
        stack = [src]
        while stack:
            node = stack.pop()
            for nbr in reversed(succ[node]):
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
    return seen


def max_flow_ford_fulkerson(net: Network, src: int, dst: int,
                            cap: WeightSpec = WeightSpec.unit()
                            ) -> tuple[float, dict[int, float]]:
    """Maximum s-t flow with BFS augmentation (Edmonds-Karp order).

    Returns the flow value and the per-link flow keyed by link id.
    """
    _check_object(net, src)
    _check_object(net, dst)
    if src == dst:
        raise ValueError("source and target must differ")
    capacity: dict[int, dict[int, float]] = {oid: {} for oid in net.objects}
    link_of: dict[tuple[int, int], int] = {}
    for link in net.links_sorted():
        c = cap.weight(link)
        if c < 0:
            raise NegativeCapacityError(f"link {link.link_id}: negative capacity {c}")
        capacity[link.from_id][link.to_id] = c
        link_of[(link.from_id, link.to_id)] = link.link_id

    residual = {u: dict(vs) for u, vs in capacity.items()}
    for u, vs in capacity.items():
        for v in vs:
            residual[v].setdefault(u, 0.0)

    def bfs_path() -> list[int] | None:
        parent = {src: src}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            for nbr in sorted(residual[node]):
                if nbr not in parent and residual[node][nbr] > 0:
                    parent[nbr] = node
                    if nbr == dst:
                        path = [dst]
                        while path[-1] != src:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    queue.append(nbr)
        return None

    total = 0.0
    while True:
        path = bfs_path()
        if path is None:
            break
        bottleneck = min(residual[u][v] for u, v in zip(path, path[1:]))
        for u, v in zip(path, path[1:]):
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
        total += bottleneck

    flows = {link.link_id: 0.0 for link in net.registry.values()}
    for (u, v), link_id in link_of.items():
        net_uv = capacity[u][v] - residual[u][v]
        if net_uv > 0:
            flows[link_id] = net_uv
    return total, flows


def point_no_flow(net: Network) -> list[int]:
    """Objects through which flow cannot pass: present in only one registry
    column (FROM xor TO). Objects with no links at all are not reported here."""
    from_ids = {l.from_id for l in net.registry.values()}
    to_ids = {l.to_id for l in net.registry.values()}
    return sorted(from_ids.symmetric_difference(to_ids))
