"""Scenario files: what to simulate on a loaded network.

A scenario is a JSON document:

    {"interaction": "identity" | "traffic" |
                    {"name": "conservative_transfer", "param": "v", "rate": 2},
     "algorithm": "full" | "frontier",
     "frontier_set": [ids],           # frontier only
     "cumulative": false,             # frontier: grow the affected set instead
     "steps": int, "seed": int,
     "mode": "deterministic" | "probabilistic",   # traffic only
     "bpr_alpha": float, "bpr_beta": float,       # traffic only
     "initial": {"<object id>": {param: value}},
     "couplings": [{"network": "other.json",
                    "relation": {"kind": "static",
                                 "object_pairs": [[n_id, d_id], ...],
                                 "link_pairs": [[n_link, d_link], ...]}
                              | {"kind": "dynamic", "range": 25.0},
                    "object_fns": "flood_zero_capacity",
                    "link_fns": "identity"}]}

Coupling network paths are resolved relative to the scenario file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any

from .errors import ScenarioParseError
from .model import Network
from .netio import load_network
from .propagation import (
    COUPLING_BUILTINS,
    InteractionSet,
    NetworkCoupling,
    SimulationState,
    conservative_transfer,
    identity_interactions,
    simulate_frontier,
    simulate_full,
)
from .traffic import BPR_ALPHA, BPR_BETA, TrafficSimulation


@dataclass
class Scenario:
    kind: str                       # "generic" or "traffic"
    iset: InteractionSet | None = None
    algorithm: str = "full"
    frontier_set: tuple[int, ...] = ()
    cumulative: bool = False
    steps: int = 0
    seed: int = 0
    mode: str = "deterministic"
    bpr_alpha: float = BPR_ALPHA
    bpr_beta: float = BPR_BETA
    initial: dict[int, dict] = field(default_factory=dict)
    couplings: list[NetworkCoupling] = field(default_factory=list)


def traffic_scenario(steps: int = 0, seed: int = 0, mode: str = "deterministic",
                     bpr_alpha: float = BPR_ALPHA, bpr_beta: float = BPR_BETA) -> Scenario:
    return Scenario(kind="traffic", steps=steps, seed=seed, mode=mode,
                    bpr_alpha=bpr_alpha, bpr_beta=bpr_beta)


def _build_interaction(doc: Any) -> tuple[str, InteractionSet | None]:
    if doc == "traffic":
        return "traffic", None
    if doc == "identity" or doc is None:
        return "generic", identity_interactions()
    if isinstance(doc, str):
        raise ScenarioParseError(f"unknown built-in interaction {doc!r}")
    if not isinstance(doc, dict) or "name" not in doc:
        raise ScenarioParseError("interaction must be a name or an object with 'name'")
    name = doc["name"]
    if name == "traffic":
        return "traffic", None
    if name == "identity":
        return "generic", identity_interactions()
    if name == "conservative_transfer":
        try:
            return "generic", conservative_transfer(
                param=doc["param"], rate=doc["rate"],
                max_interactions_per_object=doc.get("max_interactions_per_object"))
        except KeyError as exc:
            raise ScenarioParseError(
                f"conservative_transfer needs field {exc.args[0]!r}") from None
    raise ScenarioParseError(f"unknown built-in interaction {name!r}")


def _build_coupling(doc: Any, base_dir: str) -> NetworkCoupling:
    if not isinstance(doc, dict) or "network" not in doc:
        raise ScenarioParseError("coupling needs a 'network' path")
    path = doc["network"]
    if not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    other = load_network(path)

    relation = doc.get("relation", {})
    kind = relation.get("kind")
    object_pairs: tuple[tuple[int, int], ...] = ()
    link_pairs: tuple[tuple[int, int], ...] = ()
    dynamic_range = None
    if kind == "static":
        object_pairs = tuple((int(a), int(b)) for a, b in relation.get("object_pairs", []))
        link_pairs = tuple((int(a), int(b)) for a, b in relation.get("link_pairs", []))
    elif kind == "dynamic":
        if "range" not in relation:
            raise ScenarioParseError("dynamic relation needs a 'range'")
        dynamic_range = float(relation["range"])
    else:
        raise ScenarioParseError(f"relation kind must be static or dynamic, got {kind!r}")

    def fns(key: str) -> dict:
        name = doc.get(key, "identity")
        if name not in COUPLING_BUILTINS:
            raise ScenarioParseError(f"unknown coupling functions {name!r}")
        return COUPLING_BUILTINS[name]

    obj_fns = fns("object_fns")
    link_fns = fns("link_fns")
    return NetworkCoupling(network=other, object_pairs=object_pairs,
                           link_pairs=link_pairs, dynamic_range=dynamic_range,
                           f=obj_fns["f"], g=obj_fns["g"],
                           k=link_fns["f"], m=link_fns["g"])


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fp:
            doc = json.load(fp)
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"invalid scenario JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario document must be a JSON object")

    kind, iset = _build_interaction(doc.get("interaction"))
    base_dir = os.path.dirname(os.path.abspath(path))
    try:
        initial = {int(oid): dict(overrides)
                   for oid, overrides in doc.get("initial", {}).items()}
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"bad 'initial' section: {exc}") from exc

    scenario = Scenario(
        kind=kind,
        iset=iset,
        algorithm=doc.get("algorithm", "full"),
        frontier_set=tuple(int(v) for v in doc.get("frontier_set", [])),
        cumulative=bool(doc.get("cumulative", False)),
        steps=int(doc.get("steps", 0)),
        seed=int(doc.get("seed", 0)),
        mode=doc.get("mode", "deterministic"),
        bpr_alpha=float(doc.get("bpr_alpha", BPR_ALPHA)),
        bpr_beta=float(doc.get("bpr_beta", BPR_BETA)),
        initial=initial,
        couplings=[_build_coupling(c, base_dir) for c in doc.get("couplings", [])],
    )
    if scenario.algorithm not in ("full", "frontier"):
        raise ScenarioParseError(f"algorithm must be full or frontier, got {scenario.algorithm!r}")
    if scenario.algorithm == "frontier" and kind == "generic" and not scenario.frontier_set:
        raise ScenarioParseError("frontier algorithm needs a non-empty frontier_set")
    return scenario


def apply_initial(net: Network, initial: dict[int, dict]) -> None:
    for oid, overrides in initial.items():
        if oid not in net.objects:
            raise ScenarioParseError(f"initial overrides reference unknown object {oid}")
        net.objects[oid].params.update(overrides)


def run_scenario(net: Network, scenario: Scenario) -> list[SimulationState]:
    apply_initial(net, scenario.initial)
    if scenario.kind == "traffic":
        sim = TrafficSimulation(net, mode=scenario.mode, seed=scenario.seed,
                                alpha=scenario.bpr_alpha, beta=scenario.bpr_beta,
                                couplings=scenario.couplings)
        return sim.run(scenario.steps)
    if scenario.algorithm == "frontier":
        return simulate_frontier(net, scenario.iset, scenario.frontier_set,
                                 couplings=scenario.couplings, steps=scenario.steps,
                                 seed=scenario.seed, cumulative=scenario.cumulative)
    return simulate_full(net, scenario.iset, couplings=scenario.couplings,
                         steps=scenario.steps, seed=scenario.seed)
