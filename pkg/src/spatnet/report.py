"""Simulation output: delimited time series plus optional rendered figures.

CSV files start with ``# key=value`` comment lines recording the seed and run
settings, so a result file is self-describing and reruns can be compared
byte for byte.
"""

from __future__ import annotations

import csv
import json
from typing import IO, Sequence

from .model import Network
from .netio import network_to_obj
from .propagation import SimulationState


def _write_meta(fp: IO[str], meta: dict) -> None:
    for key, value in meta.items():
        fp.write(f"# {key}={value}\n")


def write_timeseries_csv(states: Sequence[SimulationState], fp: IO[str],
                         meta: dict) -> None:
    """Long-format series: one row per (step, element, parameter)."""
    _write_meta(fp, meta)
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["step", "element_kind", "id", "param", "value"])
    for state in states:
        for oid in sorted(state.object_params):
            for name, value in state.object_params[oid].items():
                writer.writerow([state.step, "object", oid, name, value])
        for lid in sorted(state.link_params):
            for name, value in state.link_params[lid].items():
                writer.writerow([state.step, "link", lid, name, value])


def write_traffic_csv(states: Sequence[SimulationState], fp: IO[str],
                      meta: dict) -> None:
    _write_meta(fp, meta)
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["step", "road_id", "current_volume", "current_mean_speed"])
    for state in states:
        for oid in sorted(state.object_params):
            params = state.object_params[oid]
            writer.writerow([state.step, oid,
                             params["current_volume"],
                             params["current_mean_speed_mps"]])


def write_final_state_json(net: Network, final: SimulationState, fp: IO[str],
                           meta: dict) -> None:
    """Final parameter vectors as a loadable network document plus run meta."""
    net_doc = network_to_obj(net)
    for entry in net_doc["objects"]:
        entry["params"] = dict(final.object_params[entry["id"]])
    for entry in net_doc["links"]:
        entry["params"] = dict(final.link_params[entry["link_id"]])
    doc = dict(meta)
    doc["final"] = net_doc
    json.dump(doc, fp, indent=2)
    fp.write("\n")


def _series(states: Sequence[SimulationState], param: str) -> dict[int, list]:
    out: dict[int, list] = {}
    for state in states:
        for oid, params in state.object_params.items():
            if param in params and not isinstance(params[param], str):
                out.setdefault(oid, []).append((state.step, params[param]))
    return out


def _plot_param(states, param: str, ylabel: str, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for oid, points in sorted(_series(states, param).items()):
        steps, values = zip(*points)
        ax.plot(steps, values, label=str(oid), linewidth=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel(ylabel)
    if len(states[0].object_params) <= 20:
        ax.legend(title="object", fontsize=8, ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(states: Sequence[SimulationState], out_stem: str,
                   traffic: bool) -> list[str]:
    """Render one per-object time-series figure per numeric parameter.

    Returns the written file paths.
    """
    written = []
    if traffic:
        params = [("current_volume", "vehicles"),
                  ("current_mean_speed_mps", "mean speed [m/s]")]
    else:
        names = sorted({name
                        for state in states
                        for p in state.object_params.values()
                        for name, value in p.items()
                        if not isinstance(value, str)})
        params = [(name, name) for name in names]
    for name, label in params:
        if not _series(states, name):
            continue
        path = f"{out_stem}_{name}.png"
        _plot_param(states, name, label, path)
        written.append(path)
    return written
