"""Pairwise interaction framework, flow-splitting arithmetic, the
probabilistic unit-transfer procedures, and the two step-driven simulation
engines.

Update discipline: within one step every interaction reads the step-start
snapshot; numeric parameter changes accumulate additively and commit at the
end of the step, text parameters take the last written value. This makes a
step order-independent for conservative transfers. All randomness flows
through one seeded RandomStream per run.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import geometry as geo
from .errors import (
    DanglingCouplingReferenceError,
    MissingGeometryError,
    SchemaMismatchError,
    UnknownObjectError,
)
from .model import Network, Params
from .rng import RandomStream

PairFn = Callable[[Params, Params], Params]
TripleFn = Callable[[Params, Params, Params], Params]


@dataclass(frozen=True)
class InteractionSet:
    """Object interaction functions for one linked pair, applied source->target.

    ``f`` computes the target's new vector, ``e`` the source's, both from the
    original (pre-interaction) vectors. ``link_update``, when given, computes
    the link's new vector from the two object vectors; None leaves the link
    unchanged. ``max_interactions_per_object`` caps how many interactions one
    object may initiate during a frontier run, which is what breaks feedback
    on circular paths.
    """

    f: TripleFn
    e: TripleFn
    link_update: PairFn | None = None
    max_interactions_per_object: int | None = None


def _check_schema(old: Params, new: Params, what: str) -> None:
    if set(old) != set(new):
        raise SchemaMismatchError(
            f"{what}: interaction output names {sorted(new)} differ from"
            f" input names {sorted(old)}")


def apply_interaction(iset: InteractionSet, v_a: Params, v_b: Params,
                      v_e: Params) -> tuple[Params, Params, Params]:
    """One source->target interaction; returns (V_A', V_B', V_E')."""
    new_b = dict(iset.f(v_a, v_b, v_e))
    new_a = dict(iset.e(v_a, v_b, v_e))
    new_e = dict(iset.link_update(v_a, v_b)) if iset.link_update else dict(v_e)
    _check_schema(v_a, new_a, "source vector")
    _check_schema(v_b, new_b, "target vector")
    _check_schema(v_e, new_e, "link vector")
    return new_a, new_b, new_e


def split_outflow(p_a: float, q_factors: Sequence[float]) -> list[float]:
    """Amount of a quantitative parameter sent down each outgoing link."""
    return [p_a * q for q in q_factors]


def cap_inflow(max_p_a: float, contributions: Sequence[float],
               r_factors: Sequence[float]) -> list[float]:
    """Accepted amount per incoming contribution at a capacity-limited object.

    Uncapped when total inflow fits; otherwise each contribution is limited
    to max_p_a * r, never inflated above what the contributor offered.
    """
    if len(contributions) != len(r_factors):
        raise ValueError("contributions and r factors must align")
    if sum(contributions) <= max_p_a:
        return list(contributions)
    return [min(p, max_p_a * r) for p, r in zip(contributions, r_factors)]


def probabilistic_propagation(c_a: int, c_b: int, t_a: int, t_b: int,
                              q: float, rng: RandomStream) -> int:
    """Unit-by-unit candidate volume for propagation.

    Each of the sender's t_a units passes with probability q while the
    receiver has room (t_b plus accepted candidates below c_b).
    """
    volume = 0
    i = t_a
    k = t_b
    while i > 0 and c_a > 0 and k < c_b:
        if rng.uniform() <= q:
            volume += 1
            k += 1
        i -= 1
    return volume


def probabilistic_receiving(c_b: int, t_a: int, t_b: int, volume: int,
                            r: float, rng: RandomStream) -> tuple[int, int]:
    """Unit-by-unit acceptance at the receiver; returns (t_a', t_b').

    Transfers are unit-for-unit, so t_a + t_b is preserved exactly.
    """
    total_before = t_a + t_b
    d = c_b
    while d > 0 and volume > 0 and t_b < c_b:
        if rng.uniform() <= r:
            volume -= 1
            t_a -= 1
            t_b += 1
        d -= 1
    assert t_a + t_b == total_before
    return t_a, t_b


@dataclass
class NetworkState:
    """Mutable per-run snapshot of all parameter vectors of one network."""

    objects: dict[int, Params]
    links: dict[int, Params]

    @classmethod
    def of(cls, net: Network) -> "NetworkState":
        return cls(objects={oid: dict(net.objects[oid].params) for oid in net.objects},
                   links={lid: dict(net.registry[lid].params) for lid in net.registry})

    def copy(self) -> "NetworkState":
        return NetworkState(objects={k: dict(v) for k, v in self.objects.items()},
                            links={k: dict(v) for k, v in self.links.items()})


@dataclass(frozen=True)
class NetworkCoupling:
    """Effect of another network on the simulated one.

    The external network is N (source of the effect), the simulated network
    is D. ``object_pairs`` holds (id in N, id in D); with ``dynamic_range``
    set, related object pairs are instead resolved on every application as
    those whose geometries lie within the given Euclidean distance.
    ``f`` rewrites the D-object vector, ``g`` the N-object vector;
    ``k``/``m`` do the same for statically paired links. None means identity.
    """

    network: Network
    object_pairs: tuple[tuple[int, int], ...] = ()
    link_pairs: tuple[tuple[int, int], ...] = ()
    dynamic_range: float | None = None
    f: PairFn | None = None
    g: PairFn | None = None
    k: PairFn | None = None
    m: PairFn | None = None


def _dynamic_pairs(coupling: NetworkCoupling, d_net: Network) -> list[tuple[int, int]]:
    pairs = []
    for n_id in coupling.network.object_ids():
        n_geom = coupling.network.objects[n_id].geometry
        if n_geom is None:
            raise MissingGeometryError(f"coupling network object {n_id} has no geometry")
        for d_id in d_net.object_ids():
            d_geom = d_net.objects[d_id].geometry
            if d_geom is None:
                raise MissingGeometryError(f"object {d_id} has no geometry")
            if geo.geometry_distance(n_geom, d_geom) <= coupling.dynamic_range:
                pairs.append((n_id, d_id))
    return pairs


def apply_coupling(coupling: NetworkCoupling, d_net: Network,
                   n_state: NetworkState, d_state: NetworkState
                   ) -> tuple[NetworkState, NetworkState]:
    """Apply one coupling; every related pair reads pre-update vectors."""
    if coupling.dynamic_range is not None:
        object_pairs = _dynamic_pairs(coupling, d_net)
    else:
        object_pairs = list(coupling.object_pairs)
    new_n = n_state.copy()
    new_d = d_state.copy()
    for n_id, d_id in object_pairs:
        if n_id not in n_state.objects or d_id not in d_state.objects:
            raise DanglingCouplingReferenceError(
                f"coupling references objects ({n_id}, {d_id}) that do not exist")
        v_a = n_state.objects[n_id]
        v_b = d_state.objects[d_id]
        if coupling.f:
            new_d.objects[d_id] = dict(coupling.f(v_a, v_b))
        if coupling.g:
            new_n.objects[n_id] = dict(coupling.g(v_a, v_b))
    for e_id, l_id in coupling.link_pairs:
        if e_id not in n_state.links or l_id not in d_state.links:
            raise DanglingCouplingReferenceError(
                f"coupling references links ({e_id}, {l_id}) that do not exist")
        v_e = n_state.links[e_id]
        v_l = d_state.links[l_id]
        if coupling.k:
            new_d.links[l_id] = dict(coupling.k(v_e, v_l))
        if coupling.m:
            new_n.links[e_id] = dict(coupling.m(v_e, v_l))
    return new_n, new_d


@dataclass(frozen=True)
class SimulationState:
    step: int
    object_params: dict[int, Params]
    link_params: dict[int, Params]
    rng_seed: int
    rng_position: int


class _DeltaBuffer:
    """Accumulates per-element parameter writes against a fixed snapshot."""

    def __init__(self, snap: NetworkState):
        self.snap = snap
        self.num: dict[tuple[str, int, str], float] = {}
        self.text: dict[tuple[str, int, str], str] = {}

    def record(self, kind: str, eid: int, old: Params, new: Params) -> None:
        for name, new_value in new.items():
            old_value = old[name]
            if isinstance(new_value, str) or isinstance(old_value, str):
                if new_value != old_value:
                    self.text[(kind, eid, name)] = new_value
            else:
                delta = new_value - old_value
                if delta != 0:
                    key = (kind, eid, name)
                    self.num[key] = self.num.get(key, 0) + delta

    def commit(self) -> NetworkState:
        out = self.snap.copy()
        for (kind, eid, name), delta in self.num.items():
            store = out.objects if kind == "object" else out.links
            store[eid][name] = store[eid][name] + delta
        for (kind, eid, name), value in self.text.items():
            store = out.objects if kind == "object" else out.links
            store[eid][name] = value
        return out


class Simulation:
    """Step-driven engine over one network, with optional couplings."""

    def __init__(self, net: Network, iset: InteractionSet | None,
                 couplings: Sequence[NetworkCoupling] = (), seed: int = 0):
        self.net = net
        self.iset = iset
        self.couplings = list(couplings)
        self.coupling_states = [NetworkState.of(c.network) for c in self.couplings]
        self.rng = RandomStream(seed)
        self.state = NetworkState.of(net)
        self.step_count = 0

    def _apply_couplings(self) -> None:
        for i, coupling in enumerate(self.couplings):
            self.coupling_states[i], self.state = apply_coupling(
                coupling, self.net, self.coupling_states[i], self.state)

    def snapshot(self) -> SimulationState:
        return SimulationState(
            step=self.step_count,
            object_params=copy.deepcopy(self.state.objects),
            link_params=copy.deepcopy(self.state.links),
            rng_seed=self.rng.seed,
            rng_position=self.rng.position,
        )


def simulate_full(net: Network, iset: InteractionSet,
                  couplings: Sequence[NetworkCoupling] = (),
                  steps: int = 0, seed: int = 0) -> list[SimulationState]:
    """Whole-network simulation: every registry link interacts every step."""
    sim = Simulation(net, iset, couplings, seed)
    states = [sim.snapshot()]
    for _ in range(steps):
        sim._apply_couplings()
        snap = sim.state
        buffer = _DeltaBuffer(snap)
        for link in net.links_sorted():
            v_a = snap.objects[link.from_id]
            v_b = snap.objects[link.to_id]
            v_e = snap.links[link.link_id]
            new_a, new_b, new_e = apply_interaction(iset, v_a, v_b, v_e)
            buffer.record("object", link.from_id, v_a, new_a)
            buffer.record("object", link.to_id, v_b, new_b)
            buffer.record("link", link.link_id, v_e, new_e)
        sim.state = buffer.commit()
        sim.step_count += 1
        states.append(sim.snapshot())
    return states


def simulate_frontier(net: Network, iset: InteractionSet, initial_set: Sequence[int],
                      couplings: Sequence[NetworkCoupling] = (),
                      steps: int = 0, seed: int = 0,
                      cumulative: bool = False) -> list[SimulationState]:
    """Wavefront simulation: only objects affected in the previous step
    propagate, along their outgoing links.

    With ``cumulative=True`` the affected set grows monotonically instead of
    tracking just the latest wavefront.
    """
    if not initial_set:
        raise ValueError("initial set must not be empty")
    for oid in initial_set:
        if oid not in net.objects:
            raise UnknownObjectError(f"no object with id {oid}")
    sim = Simulation(net, iset, couplings, seed)
    frontier = set(initial_set)
    initiated: dict[int, int] = {}
    cap = iset.max_interactions_per_object
    states = [sim.snapshot()]
    for _ in range(steps):
        sim._apply_couplings()
        snap = sim.state
        buffer = _DeltaBuffer(snap)
        for oid in sorted(frontier):
            for link in net.out_links(oid):
                if cap is not None and initiated.get(oid, 0) >= cap:
                    break
                v_a = snap.objects[link.from_id]
                v_b = snap.objects[link.to_id]
                v_e = snap.links[link.link_id]
                new_a, new_b, new_e = apply_interaction(iset, v_a, v_b, v_e)
                buffer.record("object", link.from_id, v_a, new_a)
                buffer.record("object", link.to_id, v_b, new_b)
                buffer.record("link", link.link_id, v_e, new_e)
                initiated[oid] = initiated.get(oid, 0) + 1
        new_state = buffer.commit()
        changed = {oid for oid in net.objects
                   if new_state.objects[oid] != snap.objects[oid]}
        frontier = (frontier | changed) if cumulative else changed
        sim.state = new_state
        sim.step_count += 1
        states.append(sim.snapshot())
    return states


# --- Built-in interaction sets -------------------------------------------

def identity_interactions() -> InteractionSet:
    return InteractionSet(f=lambda va, vb, ve: dict(vb),
                          e=lambda va, vb, ve: dict(va))


def conservative_transfer(param: str, rate: float,
                          max_interactions_per_object: int | None = None) -> InteractionSet:
    """Move up to ``rate`` of one quantitative parameter per interaction.

    The moved amount is min(source value, rate), computed from the original
    vectors in both f and e so the pair conserves the total exactly.
    """

    def value_of(vector: Params) -> float:
        if param not in vector:
            raise SchemaMismatchError(f"object vector lacks parameter {param!r}")
        return vector[param]

    def moved(v_a: Params) -> float:
        return min(value_of(v_a), rate)

    return InteractionSet(
        f=lambda va, vb, ve: {**vb, param: value_of(vb) + moved(va)},
        e=lambda va, vb, ve: {**va, param: value_of(va) - moved(va)},
        max_interactions_per_object=max_interactions_per_object,
    )


INTERACTION_BUILTINS = {
    "identity": identity_interactions,
    "conservative_transfer": conservative_transfer,
}


# --- Built-in coupling function pairs -------------------------------------

def _flood_zero_capacity(v_a: Params, v_b: Params) -> Params:
    if v_a.get("flood", 0) >= 1:
        out = dict(v_b)
        for name in ("practical_capacity", "capacity"):
            if name in out:
                out[name] = 0
        return out
    return dict(v_b)


def _inject_volume(v_a: Params, v_b: Params) -> Params:
    amount = v_a.get("inject", 0)
    out = dict(v_b)
    new_volume = out.get("current_volume", 0) + amount
    if "practical_capacity" in out and "lanes" in out:
        new_volume = min(new_volume, out["practical_capacity"] * out["lanes"])
    out["current_volume"] = max(0, new_volume)
    return out


COUPLING_BUILTINS: dict[str, dict[str, PairFn | None]] = {
    "identity": {"f": None, "g": None},
    "flood_zero_capacity": {"f": _flood_zero_capacity, "g": None},
    "inject_volume": {"f": _inject_volume, "g": None},
}
