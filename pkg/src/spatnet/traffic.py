"""Road-traffic simulation over a line-feature network.

Roads are the network objects; a link means traffic can move from one road
onto another. Volumes are integer vehicle counts, speeds come from the BPR
volume-delay curve, and the time step is the free-flow crossing time of the
longest road so every vehicle can traverse its segment within one step.

Per step, in both modes: couplings first, then the oversubscription marking
pass, then one transfer per link in ascending link id, then volumes commit
and mean speeds are recomputed. Deterministic transfers read only the
step-start snapshot. Probabilistic transfers draw unit-by-unit from the run's
random stream; their capacity and availability guards track the units already
moved within the step, which is what keeps volumes in [0, capacity] exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyNetworkError, SchemaMismatchError, ZeroCapacityError
from .model import Network, Params, validate_flow_factors
from .propagation import (
    NetworkCoupling,
    NetworkState,
    Simulation,
    SimulationState,
    probabilistic_propagation,
    probabilistic_receiving,
)

BPR_ALPHA = 0.15
BPR_BETA = 4.0

ROAD_PARAM_NAMES = (
    "direction",
    "length_m",
    "lanes",
    "practical_capacity",
    "free_flow_speed_mps",
    "current_mean_speed_mps",
    "current_volume",
)


@dataclass(frozen=True)
class Road:
    """View over one road's parameter vector. practical_capacity is per lane;
    current_volume counts the whole road."""

    length: float
    lanes: int
    practical_capacity: int
    free_flow_speed: float
    mean_speed: float
    volume: int

    @classmethod
    def from_params(cls, params: Params) -> "Road":
        try:
            return cls(
                length=float(params["length_m"]),
                lanes=int(params["lanes"]),
                practical_capacity=int(params["practical_capacity"]),
                free_flow_speed=float(params["free_flow_speed_mps"]),
                mean_speed=float(params["current_mean_speed_mps"]),
                volume=int(params["current_volume"]),
            )
        except KeyError as exc:
            raise SchemaMismatchError(f"road vector lacks parameter {exc.args[0]!r}") from None

    @property
    def capacity_total(self) -> int:
        return self.practical_capacity * self.lanes


def validate_traffic_schema(net: Network) -> None:
    """Check every object carries a valid road vector and that the link
    q/r factors can never oversubscribe a road."""
    for oid in net.object_ids():
        params = net.objects[oid].params
        for name in ROAD_PARAM_NAMES:
            if name not in params:
                raise SchemaMismatchError(f"object {oid} lacks road parameter {name!r}")
        road = Road.from_params(params)
        if road.length <= 0:
            raise SchemaMismatchError(f"object {oid}: length must be positive")
        if road.lanes < 1:
            raise SchemaMismatchError(f"object {oid}: lanes must be >= 1")
        if road.practical_capacity < 0:
            raise SchemaMismatchError(f"object {oid}: practical capacity must be >= 0")
        if road.free_flow_speed <= 0:
            raise SchemaMismatchError(f"object {oid}: free flow speed must be positive")
        if not (0 < road.mean_speed <= road.free_flow_speed):
            raise SchemaMismatchError(
                f"object {oid}: need 0 < mean speed <= free flow speed")
        if not (0 <= road.volume <= road.capacity_total):
            raise SchemaMismatchError(
                f"object {oid}: volume {road.volume} outside [0, {road.capacity_total}]")
    validate_flow_factors(net)


def bpr_speed(free_flow_speed: float, volume: float, capacity_total: float,
              alpha: float = BPR_ALPHA, beta: float = BPR_BETA) -> float:
    """Mean speed from the BPR volume-delay curve."""
    if capacity_total <= 0:
        raise ZeroCapacityError("capacity must be positive")
    if volume < 0:
        raise ValueError("volume must be >= 0")
    return free_flow_speed / (1.0 + alpha * (volume / capacity_total) ** beta)


def derive_time_step(net: Network) -> float:
    """Seconds a vehicle needs to cross the longest road at free-flow speed."""
    if not net.objects:
        raise EmptyNetworkError("network has no roads")
    roads = (Road.from_params(net.objects[oid].params) for oid in net.objects)
    return max(road.length / road.free_flow_speed for road in roads)


def outgoing_volume(road: Road, t_s: float, t_v: float | None = None) -> int:
    """Vehicles able to leave the road within one time step.

    Vehicles are taken as uniformly spaced, so at the current mean speed one
    vehicle per lane exits every t_v seconds; t_v may be overridden.
    """
    if road.volume <= 0:
        return 0
    if t_v is None:
        per_lane = max(road.volume / road.lanes, 1)
        t_v = (road.length / road.mean_speed) / per_lane
    n_s = math.floor((t_s / t_v) * road.lanes)
    return road.volume if n_s > road.volume else n_s


def incoming_capacity(road: Road) -> int:
    """Vehicles the road can still accept: (capacity - volume per lane) x lanes."""
    return max(0, road.capacity_total - road.volume)


def mark_oversubscribed_links(net: Network, t_s: float,
                              state: NetworkState | None = None) -> set[int]:
    """Links whose receiving factor must be honoured this step.

    A target road whose feeders could jointly send more than its remaining
    capacity gets every incoming link marked.
    """
    if state is None:
        state = NetworkState.of(net)
    roads = {oid: Road.from_params(state.objects[oid]) for oid in net.objects}
    marked: set[int] = set()
    for oid in net.object_ids():
        incoming = net.in_links(oid)
        if not incoming:
            continue
        total = sum(outgoing_volume(roads[l.from_id], t_s) for l in incoming)
        if total > incoming_capacity(roads[oid]):
            marked.update(l.link_id for l in incoming)
    return marked


def _recompute_speed(road: Road, new_volume: int, alpha: float, beta: float) -> float:
    if road.capacity_total <= 0:
        # a road with no capacity (e.g. flooded) keeps its last speed while
        # occupied; empty it runs at free flow
        return road.free_flow_speed if new_volume == 0 else road.mean_speed
    return bpr_speed(road.free_flow_speed, new_volume, road.capacity_total, alpha, beta)


class TrafficSimulation(Simulation):
    """Traffic engine; reuses the generic coupling machinery and RNG stream."""

    def __init__(self, net: Network, mode: str = "deterministic", seed: int = 0,
                 alpha: float = BPR_ALPHA, beta: float = BPR_BETA,
                 couplings: Sequence[NetworkCoupling] = (),
                 time_step: float | None = None,
                 literal_receiver_cap: bool = False):
        if mode not in ("deterministic", "probabilistic"):
            raise ValueError(f"mode must be deterministic or probabilistic, got {mode!r}")
        validate_traffic_schema(net)
        super().__init__(net, iset=None, couplings=couplings, seed=seed)
        self.mode = mode
        self.alpha = alpha
        self.beta = beta
        self.t_s = derive_time_step(net) if time_step is None else time_step
        self.literal_receiver_cap = literal_receiver_cap

    def step(self) -> None:
        self._apply_couplings()
        snap = self.state
        roads = {oid: Road.from_params(snap.objects[oid]) for oid in self.net.objects}
        marked = mark_oversubscribed_links(self.net, self.t_s, snap)
        sent: dict[int, int] = {oid: 0 for oid in self.net.objects}
        received: dict[int, int] = {oid: 0 for oid in self.net.objects}

        for link in self.net.links_sorted():
            x, y = link.from_id, link.to_id
            v_o_full = outgoing_volume(roads[x], self.t_s)
            if self.mode == "deterministic":
                v_o = math.floor(v_o_full * link.q)
                v_i = incoming_capacity(roads[y])
                if link.link_id in marked:
                    v_i = math.floor(v_i * link.r)
                transfer = min(v_o, v_i)
            else:
                available = roads[x].volume - sent[x]
                live_volume_y = roads[y].volume + received[y]
                receiver_cap = roads[y].capacity_total
                c_b = v_o_full if self.literal_receiver_cap else receiver_cap
                candidate = probabilistic_propagation(
                    c_a=roads[x].capacity_total, c_b=c_b,
                    t_a=min(v_o_full, available), t_b=live_volume_y,
                    q=link.q, rng=self.rng)
                if link.link_id in marked:
                    _, t_b_after = probabilistic_receiving(
                        c_b=receiver_cap, t_a=available, t_b=live_volume_y,
                        volume=candidate, r=link.r, rng=self.rng)
                    transfer = t_b_after - live_volume_y
                else:
                    transfer = candidate
            sent[x] += transfer
            received[y] += transfer

        new_state = snap.copy()
        for oid, road in roads.items():
            new_volume = road.volume - sent[oid] + received[oid]
            params = new_state.objects[oid]
            params["current_volume"] = new_volume
            params["current_mean_speed_mps"] = _recompute_speed(
                road, new_volume, self.alpha, self.beta)
        self.state = new_state
        self.step_count += 1

    def run(self, steps: int) -> list[SimulationState]:
        states = [self.snapshot()]
        for _ in range(steps):
            self.step()
            states.append(self.snapshot())
        return states


def simulate_traffic(net: Network, steps: int, seed: int = 0,
                     mode: str = "deterministic",
                     alpha: float = BPR_ALPHA, beta: float = BPR_BETA,
                     couplings: Sequence[NetworkCoupling] = (),
                     time_step: float | None = None) -> list[SimulationState]:
    sim = TrafficSimulation(net, mode=mode, seed=seed, alpha=alpha, beta=beta,
                            couplings=couplings, time_step=time_step)
    return sim.run(steps)
