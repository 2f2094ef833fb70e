"""Core data model: spatial objects, the directed link registry, and the
network container.

A network is a set of same-topology spatial objects plus a registry of
directed links; a bidirectional connection is stored as two opposite links.
Parameter vectors are schemaless ordered maps; scenario code declares the
names it needs and validates presence at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geometry as geo
from .errors import (
    DanglingEndpointError,
    DuplicateDirectedPairError,
    DuplicateIdError,
    FactorOutOfRangeError,
    MissingGeometryError,
    ParseError,
    ReceiveFactorSumError,
    SelfLoopError,
    SplitFactorSumError,
    TopologyMismatchError,
    UnknownObjectError,
    UnsupportedTopologyError,
)

ParamValue = int | float | str
Params = dict[str, ParamValue]

TOPOLOGY_KINDS = ("point", "polyline", "polygon")


def check_params(params: Params, where: str = "") -> None:
    """Reject parameter values outside {int, float, str} and non-finite reals."""
    for name, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ParseError(f"parameter {name!r} {where}: unsupported value {value!r}")
        if isinstance(value, float) and not math.isfinite(value):
            raise ParseError(f"parameter {name!r} {where}: non-finite value")


@dataclass
class SpatialObject:
    id: int
    geometry: geo.Geometry | None = None
    category_p: int | None = None
    params: Params = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id <= 0:
            raise ParseError(f"object id must be a positive integer, got {self.id!r}")
        if self.category_p is not None and self.category_p < 0:
            raise ParseError(f"object {self.id}: category p must be non-negative")
        check_params(self.params, f"of object {self.id}")


@dataclass
class Link:
    link_id: int
    from_id: int
    to_id: int
    category_l: int | None = None
    q: float = 1.0
    r: float = 1.0
    params: Params = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.link_id, int) or self.link_id <= 0:
            raise ParseError(f"link id must be a positive integer, got {self.link_id!r}")
        if self.from_id == self.to_id:
            raise SelfLoopError(f"link {self.link_id}: {self.from_id} -> itself")
        if not (0.0 <= self.q <= 1.0):
            raise FactorOutOfRangeError(f"link {self.link_id}: q={self.q} outside [0, 1]")
        if not (0.0 <= self.r <= 1.0):
            raise FactorOutOfRangeError(f"link {self.link_id}: r={self.r} outside [0, 1]")
        if self.category_l is not None and self.category_l <= 0:
            raise ParseError(f"link {self.link_id}: category l must be positive")
        check_params(self.params, f"of link {self.link_id}")


@dataclass(frozen=True)
class Violation:
    rule: str
    subject_id: int
    detail: str

    def sort_key(self) -> tuple[int, str]:
        return (self.subject_id, self.rule)


class Network:
    """Object store plus directed link registry.

    Mutations happen in a single-writer build phase; analysis and simulation
    treat the network as read-only.
    """

    def __init__(self, topology_kind: str = "polyline",
                 category_count_k: int | None = None,
                 link_category_count_c: int | None = None):
        if topology_kind not in TOPOLOGY_KINDS:
            raise ParseError(f"unknown topology kind {topology_kind!r}")
        self.topology_kind = topology_kind
        self.category_count_k = category_count_k
        self.link_category_count_c = link_category_count_c
        self.objects: dict[int, SpatialObject] = {}
        self.registry: dict[int, Link] = {}
        self._pairs: set[tuple[int, int]] = set()

    def add_object(self, obj: SpatialObject) -> None:
        if obj.id in self.objects:
            raise DuplicateIdError(f"object id {obj.id} already present")
        if obj.geometry is not None and geo.geometry_kind(obj.geometry) != self.topology_kind:
            raise TopologyMismatchError(
                f"object {obj.id}: {geo.geometry_kind(obj.geometry)} geometry in a "
                f"{self.topology_kind} network")
        if self.category_count_k is not None and obj.category_p is not None:
            if not (1 <= obj.category_p <= self.category_count_k):
                raise ParseError(
                    f"object {obj.id}: category p={obj.category_p} outside "
                    f"[1, {self.category_count_k}]")
        self.objects[obj.id] = obj

    def add_link(self, link: Link) -> None:
        for endpoint in (link.from_id, link.to_id):
            if endpoint not in self.objects:
                raise DanglingEndpointError(
                    f"link {link.link_id}: endpoint {endpoint} is not a stored object")
        if link.link_id in self.registry:
            raise DuplicateIdError(f"link id {link.link_id} already present")
        pair = (link.from_id, link.to_id)
        if pair in self._pairs:
            raise DuplicateDirectedPairError(
                f"link {link.link_id}: a link {pair[0]} -> {pair[1]} already exists")
        self.registry[link.link_id] = link
        self._pairs.add(pair)

    def object_ids(self) -> list[int]:
        return sorted(self.objects)

    def links_sorted(self) -> list[Link]:
        return [self.registry[i] for i in sorted(self.registry)]

    def out_links(self, object_id: int) -> list[Link]:
        return [l for l in self.links_sorted() if l.from_id == object_id]

    def in_links(self, object_id: int) -> list[Link]:
        return [l for l in self.links_sorted() if l.to_id == object_id]

    def degrees(self, object_id: int) -> tuple[int, int]:
        """(indegree, outdegree) of an object per the registry."""
        if object_id not in self.objects:
            raise UnknownObjectError(f"no object with id {object_id}")
        indeg = sum(1 for l in self.registry.values() if l.to_id == object_id)
        outdeg = sum(1 for l in self.registry.values() if l.from_id == object_id)
        return indeg, outdeg

    def validate_registry(self) -> list[Violation]:
        """One IsolatedObject violation per object that participates in no link."""
        linked: set[int] = set()
        for link in self.registry.values():
            linked.add(link.from_id)
            linked.add(link.to_id)
        return [
            Violation("IsolatedObject", oid, f"object {oid} participates in no link")
            for oid in self.object_ids() if oid not in linked
        ]

    def check_integrity(self) -> None:
        for link in self.registry.values():
            assert link.from_id in self.objects and link.to_id in self.objects, \
                f"link {link.link_id} references a missing object"


def validate_flow_factors(net: Network) -> None:
    """Enforce sum(q) <= 1 per source object and sum(r) <= 1 per target object.

    Only meaningful for networks whose links carry explicit splitting and
    receiving factors (the defaults of 1.0 fail this on any bifurcation).
    """
    tol = 1e-9
    for oid in net.object_ids():
        q_sum = sum(l.q for l in net.registry.values() if l.from_id == oid)
        if q_sum > 1.0 + tol:
            raise SplitFactorSumError(
                f"object {oid}: outgoing q factors sum to {q_sum:g} > 1")
        r_sum = sum(l.r for l in net.registry.values() if l.to_id == oid)
        if r_sum > 1.0 + tol:
            raise ReceiveFactorSumError(
                f"object {oid}: incoming r factors sum to {r_sum:g} > 1")


def build_registry_from_geometry(net: Network, eps: float = geo.DEFAULT_EPS,
                                 bidirectional: bool = True) -> None:
    """Populate the registry from line-feature contact.

    Every unordered object pair whose polylines touch (shared endpoint within
    eps) gets a link pair when bidirectional, else a single link from the
    lower id. Link ids are assigned from 1 in (from_id, to_id) order so the
    result does not depend on object insertion order.
    """
    if net.topology_kind != "polyline":
        raise UnsupportedTopologyError(
            f"geometric registry construction needs a polyline network, "
            f"got {net.topology_kind}")
    for obj in net.objects.values():
        if obj.geometry is None:
            raise MissingGeometryError(f"object {obj.id} has no geometry")

    ids = net.object_ids()
    pairs: list[tuple[int, int]] = []
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            ga = net.objects[a].geometry
            gb = net.objects[b].geometry
            if geo.touches_line_line(ga, gb, eps):
                pairs.append((a, b))
                if bidirectional:
                    pairs.append((b, a))

    net.registry.clear()
    net._pairs.clear()
    for link_id, (from_id, to_id) in enumerate(sorted(pairs), start=1):
        net.add_link(Link(link_id=link_id, from_id=from_id, to_id=to_id))
    net.check_integrity()
