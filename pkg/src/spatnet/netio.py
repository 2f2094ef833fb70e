"""Network file I/O.

The on-disk format is a single JSON document:

    {"topology": "point"|"polyline"|"polygon", "k": int?, "c": int?,
     "objects": [{"id": int, "p": int?, "geometry": {...}?, "params": {...}}],
     "links": [{"link_id": int, "from": int, "to": int,
                "l": int?, "q": float?, "r": float?, "params": {...}}]}

Geometry is {"type": "point", "coords": [x, y]},
{"type": "polyline", "coords": [[x, y], ...]} or
{"type": "polygon", "coords": [[x, y], ...]} (ring, optionally closed).
Unknown fields are ignored with a warning.
"""

from __future__ import annotations

import json
import logging
from typing import Any, IO

from . import geometry as geo
from .errors import ParseError, SpatNetError
from .model import Link, Network, SpatialObject, check_params

log = logging.getLogger("spatnet")

_NET_KEYS = {"topology", "k", "c", "objects", "links"}
_OBJ_KEYS = {"id", "p", "geometry", "params"}
_LINK_KEYS = {"link_id", "from", "to", "l", "q", "r", "params"}
_GEOM_KEYS = {"type", "coords"}


def _warn_unknown(mapping: dict, known: set[str], where: str) -> None:
    for key in mapping:
        if key not in known:
            log.warning("ignoring unknown field %r in %s", key, where)


def _reject_constant(name: str):
    raise ParseError(f"non-finite number {name} is not allowed")


def _parse_point(coords: Any, where: str) -> geo.Point:
    if (not isinstance(coords, (list, tuple)) or len(coords) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in coords)):
        raise ParseError(f"{where}: bad coordinate {coords!r}")
    return geo.Point(float(coords[0]), float(coords[1]))


def parse_geometry(doc: Any, where: str = "geometry") -> geo.Geometry:
    if not isinstance(doc, dict) or "type" not in doc or "coords" not in doc:
        raise ParseError(f"{where}: geometry needs 'type' and 'coords'")
    _warn_unknown(doc, _GEOM_KEYS, where)
    kind = doc["type"]
    coords = doc["coords"]
    if kind == "point":
        return _parse_point(coords, where)
    if not isinstance(coords, list):
        raise ParseError(f"{where}: coords must be a list")
    points = [_parse_point(c, where) for c in coords]
    if kind == "polyline":
        return geo.Polyline(tuple(points))
    if kind == "polygon":
        return geo.make_polygon(points)
    raise ParseError(f"{where}: unknown geometry type {kind!r}")


def _parse_params(doc: Any, where: str) -> dict:
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: params must be an object")
    check_params(doc, where)
    return dict(doc)


def _require_int(doc: dict, key: str, where: str) -> int:
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: field {key!r} must be an integer, got {value!r}")
    return value


def _optional_int(doc: dict, key: str, where: str) -> int | None:
    value = doc.get(key)
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: field {key!r} must be an integer, got {value!r}")
    return value


def _optional_float(doc: dict, key: str, where: str, default: float) -> float:
    value = doc.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: field {key!r} must be a number, got {value!r}")
    return float(value)


def load_network_obj(doc: Any) -> Network:
    """Build a Network from an already-parsed JSON document."""
    if not isinstance(doc, dict):
        raise ParseError("network document must be a JSON object")
    _warn_unknown(doc, _NET_KEYS, "network")
    topology = doc.get("topology")
    if topology not in ("point", "polyline", "polygon"):
        raise ParseError(f"missing or unknown topology {topology!r}")
    net = Network(topology_kind=topology,
                  category_count_k=doc.get("k"),
                  link_category_count_c=doc.get("c"))
    try:
        for entry in doc.get("objects", []):
            where = f"object entry {entry.get('id')!r}" if isinstance(entry, dict) else "object entry"
            if not isinstance(entry, dict):
                raise ParseError(f"{where}: must be an object")
            _warn_unknown(entry, _OBJ_KEYS, where)
            geom = None
            if entry.get("geometry") is not None:
                geom = parse_geometry(entry["geometry"], where)
            net.add_object(SpatialObject(
                id=_require_int(entry, "id", where),
                geometry=geom,
                category_p=_optional_int(entry, "p", where),
                params=_parse_params(entry.get("params"), where),
            ))
        for entry in doc.get("links", []):
            where = f"link entry {entry.get('link_id')!r}" if isinstance(entry, dict) else "link entry"
            if not isinstance(entry, dict):
                raise ParseError(f"{where}: must be an object")
            _warn_unknown(entry, _LINK_KEYS, where)
            net.add_link(Link(
                link_id=_require_int(entry, "link_id", where),
                from_id=_require_int(entry, "from", where),
                to_id=_require_int(entry, "to", where),
                category_l=_optional_int(entry, "l", where),
                q=_optional_float(entry, "q", where, 1.0),
                r=_optional_float(entry, "r", where, 1.0),
                params=_parse_params(entry.get("params"), where),
            ))
    except ParseError:
        raise
    except SpatNetError as exc:
        raise ParseError(str(exc)) from exc
    net.check_integrity()
    return net


def load_network(path_or_fp: str | IO[str]) -> Network:
    if hasattr(path_or_fp, "read"):
        raw = path_or_fp.read()
    else:
        with open(path_or_fp, encoding="utf-8") as fp:
            raw = fp.read()
    try:
        doc = json.loads(raw, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return load_network_obj(doc)


def geometry_to_obj(geom: geo.Geometry) -> dict:
    if isinstance(geom, geo.Point):
        return {"type": "point", "coords": [geom.x, geom.y]}
    if isinstance(geom, geo.Polyline):
        return {"type": "polyline", "coords": [[p.x, p.y] for p in geom.points]}
    ring = [[p.x, p.y] for p in geom.ring]
    ring.append(ring[0])
    return {"type": "polygon", "coords": ring}


def network_to_obj(net: Network) -> dict:
    doc: dict = {"topology": net.topology_kind}
    if net.category_count_k is not None:
        doc["k"] = net.category_count_k
    if net.link_category_count_c is not None:
        doc["c"] = net.link_category_count_c
    objects = []
    for oid in net.object_ids():
        obj = net.objects[oid]
        entry: dict = {"id": obj.id}
        if obj.category_p is not None:
            entry["p"] = obj.category_p
        if obj.geometry is not None:
            entry["geometry"] = geometry_to_obj(obj.geometry)
        entry["params"] = dict(obj.params)
        objects.append(entry)
    links = []
    for link in net.links_sorted():
        entry = {"link_id": link.link_id, "from": link.from_id, "to": link.to_id}
        if link.category_l is not None:
            entry["l"] = link.category_l
        entry["q"] = link.q
        entry["r"] = link.r
        entry["params"] = dict(link.params)
        links.append(entry)
    doc["objects"] = objects
    doc["links"] = links
    return doc


def save_network(net: Network, path_or_fp: str | IO[str]) -> None:
    doc = network_to_obj(net)
    if hasattr(path_or_fp, "write"):
        json.dump(doc, path_or_fp, indent=2)
        path_or_fp.write("\n")
    else:
        with open(path_or_fp, "w", encoding="utf-8") as fp:
            json.dump(doc, fp, indent=2)
            fp.write("\n")
