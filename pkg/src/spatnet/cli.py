"""Command-line front end.

Exit codes are a stable contract: 0 clean, 1 violations or findings,
2 malformed input. Violation reports are JSON lines (one object per line);
simulation time series are CSV with ``# key=value`` header comments; analysis
results are single JSON documents. All randomness enters via --seed, so any
command rerun with the same inputs produces identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import analysis
from .errors import ParseError, SpatNetError
from .model import build_registry_from_geometry
from .netio import load_network, save_network
from .report import (
    render_figures,
    write_final_state_json,
    write_timeseries_csv,
    write_traffic_csv,
)
from .rules import HierarchyConfig, detect_invalid_link_categories, detect_invalid_object_links
from .scenario import load_scenario, run_scenario, traffic_scenario


def _canon_number(value: float):
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _parse_hierarchy(text: str) -> HierarchyConfig:
    parts = text.split(",")
    if len(parts) not in (2, 4):
        raise ParseError("--hierarchy expects k,a or k,a,c,a_link")
    try:
        numbers = [int(p) for p in parts]
        if len(numbers) == 2:
            return HierarchyConfig(k=numbers[0], a=numbers[1])
        return HierarchyConfig(k=numbers[0], a=numbers[1], c=numbers[2], a_link=numbers[3])
    except ValueError as exc:
        raise ParseError(f"bad --hierarchy value: {exc}") from exc


def cmd_validate(args) -> int:
    net = load_network(args.file)
    violations = net.validate_registry()
    if args.hierarchy:
        cfg = _parse_hierarchy(args.hierarchy)
        violations += detect_invalid_object_links(net, cfg)
        if cfg.c is not None:
            violations += detect_invalid_link_categories(net, cfg)
    violations.sort(key=lambda v: v.sort_key())
    for v in violations:
        print(json.dumps({"rule": v.rule, "subject": v.subject_id, "detail": v.detail}))
    return 1 if violations else 0


def cmd_analyze(args) -> int:
    net = load_network(args.file)
    weights = analysis.WeightSpec.parse(args.weights)

    if args.operation == "point-no-flow":
        doc = {"objects": analysis.point_no_flow(net)}
    elif args.operation == "reachability":
        if args.src is None:
            raise ParseError("reachability needs --from")
        doc = {"objects": sorted(analysis.reachable_set(net, args.src, args.mode))}
    elif args.operation == "shortest-path":
        if args.src is None or args.dst is None:
            raise ParseError("shortest-path needs --from and --to")
        negative = any(weights.weight(l) < 0 for l in net.registry.values())
        if negative:
            result = analysis.shortest_path_bellman_ford(net, args.src, args.dst, weights)
        else:
            result = analysis.shortest_path_dijkstra(net, args.src, args.dst, weights)
        if result is None:
            doc = {"unreachable": True}
        else:
            doc = {"distance": _canon_number(result.distance), "path": list(result.path)}
    elif args.operation == "max-flow":
        if args.src is None or args.dst is None:
            raise ParseError("max-flow needs --from and --to")
        value, flows = analysis.max_flow_ford_fulkerson(net, args.src, args.dst, weights)
        doc = {"flow": _canon_number(value),
               "link_flows": {str(lid): _canon_number(f)
                              for lid, f in sorted(flows.items()) if f > 0}}
    else:
        raise ParseError(f"unknown analysis operation {args.operation!r}")

    text = json.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            fp.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_simulate(args) -> int:
    net = load_network(args.file)
    if args.scenario == "traffic":
        scenario = traffic_scenario()
    else:
        scenario = load_scenario(args.scenario)
    if args.steps is not None:
        scenario.steps = args.steps
    if args.seed is not None:
        scenario.seed = args.seed
    if args.algorithm is not None:
        scenario.algorithm = args.algorithm
    if args.mode is not None:
        scenario.mode = args.mode
    if args.bpr_alpha is not None:
        scenario.bpr_alpha = args.bpr_alpha
    if args.bpr_beta is not None:
        scenario.bpr_beta = args.bpr_beta

    states = run_scenario(net, scenario)

    traffic = scenario.kind == "traffic"
    meta = {"seed": scenario.seed,
            "algorithm": "traffic" if traffic else scenario.algorithm,
            "steps": scenario.steps}
    if traffic:
        meta["mode"] = scenario.mode
        meta["bpr_alpha"] = scenario.bpr_alpha
        meta["bpr_beta"] = scenario.bpr_beta
    writer = write_traffic_csv if traffic else write_timeseries_csv

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            writer(states, fp, meta)
        stem = os.path.splitext(args.out)[0]
        with open(stem + ".final.json", "w", encoding="utf-8") as fp:
            write_final_state_json(net, states[-1], fp, meta)
        if args.figures:
            for path in render_figures(states, stem, traffic):
                logging.getLogger("spatnet").info("wrote %s", path)
    else:
        writer(states, sys.stdout, meta)
    return 0


def cmd_build_registry(args) -> int:
    net = load_network(args.file)
    build_registry_from_geometry(net, eps=args.epsilon, bidirectional=args.bidirectional)
    if args.out:
        save_network(net, args.out)
    else:
        save_network(net, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spatnet",
        description="Networks of spatial objects: validation, analysis, simulation.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="registry and linkage-rule checks (JSON lines)")
    p.add_argument("file")
    p.add_argument("--hierarchy", metavar="k,a[,c,a_link]",
                   help="enable category rules with these thresholds")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="graph analysis (JSON result)")
    p.add_argument("file")
    p.add_argument("operation",
                   choices=["point-no-flow", "shortest-path", "reachability", "max-flow"])
    p.add_argument("--from", dest="src", type=int, default=None)
    p.add_argument("--to", dest="dst", type=int, default=None)
    p.add_argument("--weights", default="unit", metavar="unit|param:NAME",
                   help="link weights / capacities (default: unit)")
    p.add_argument("--mode", choices=["bfs", "dfs"], default="bfs",
                   help="traversal for reachability")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run a scenario (CSV series + final JSON)")
    p.add_argument("file")
    p.add_argument("--scenario", required=True,
                   help="scenario file, or the literal 'traffic'")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--algorithm", choices=["full", "frontier"], default=None)
    p.add_argument("--mode", choices=["deterministic", "probabilistic"], default=None)
    p.add_argument("--bpr-alpha", type=float, default=None)
    p.add_argument("--bpr-beta", type=float, default=None)
    p.add_argument("--out", default=None, help="CSV path; also writes <stem>.final.json")
    p.add_argument("--figures", action="store_true",
                   help="render per-parameter time-series figures next to --out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("build-registry", help="derive links from line-feature contact")
    p.add_argument("file")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--bidirectional", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build_registry)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpatNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
