"""Linkage-rule validation for networks with hierarchical categories.

Object categories use parameter p, link categories parameter l; in both, a
smaller value means a higher hierarchical rank. Three rules apply to each:
rank thresholds decide which objects must sit on closed paths (rule 1),
extreme ranks must not be linked directly (rule 2), and every element at or
below the threshold needs at least one qualifying link (rule 3).

Rule 1 and rule 3 are checked directionally: an outgoing link qualifies when
it targets a category value <= the subject's, an incoming link when it comes
from a category value >= the subject's. Rule 2 compares against the extreme
category values actually present in the dataset and is skipped when only one
category is present.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingCategoryError, MissingLinkCategoryError
from .model import Network, Violation


@dataclass(frozen=True)
class HierarchyConfig:
    k: int
    a: int
    c: int | None = None
    a_link: int | None = None

    def __post_init__(self):
        if self.k < 1 or not (1 <= self.a <= self.k):
            raise ValueError(f"need 1 <= a <= k, got a={self.a}, k={self.k}")
        if (self.c is None) != (self.a_link is None):
            raise ValueError("c and a_link must be given together")
        if self.c is not None and (self.c < 1 or not (1 <= self.a_link <= self.c)):
            raise ValueError(f"need 1 <= a_link <= c, got a_link={self.a_link}, c={self.c}")


def _dedup_sorted(violations: list[Violation]) -> list[Violation]:
    seen: dict[tuple[int, str], Violation] = {}
    for v in violations:
        seen.setdefault((v.subject_id, v.rule), v)
    return [seen[key] for key in sorted(seen)]


def detect_invalid_object_links(net: Network, cfg: HierarchyConfig) -> list[Violation]:
    """Objects violating the three category-linkage rules."""
    for oid in net.object_ids():
        p = net.objects[oid].category_p
        if p is None:
            raise MissingCategoryError(f"object {oid} has no category p")
        if not (1 <= p <= cfg.k):
            raise ValueError(f"object {oid}: category p={p} outside [1, {cfg.k}]")

    present = {net.objects[oid].category_p for oid in net.objects}
    p_min, p_max = min(present), max(present)
    out: list[Violation] = []

    for oid in net.object_ids():
        p_i = net.objects[oid].category_p
        out_ps = [net.objects[l.to_id].category_p for l in net.out_links(oid)]
        in_ps = [net.objects[l.from_id].category_p for l in net.in_links(oid)]
        out_ok = any(p_f <= p_i for p_f in out_ps)
        in_ok = any(p_g >= p_i for p_g in in_ps)

        if p_i < cfg.a and not (out_ok and in_ok):
            out.append(Violation(
                "ObjRule1", oid,
                f"object {oid} (p={p_i} < a={cfg.a}) lacks an outgoing link to rank"
                f" <= {p_i} and an incoming link from rank >= {p_i}"))
        if p_min != p_max:
            if (p_i == p_max and any(p_f == p_min for p_f in out_ps)) or \
               (p_i == p_min and any(p_f == p_max for p_f in out_ps)):
                out.append(Violation(
                    "ObjRule2", oid,
                    f"object {oid} (p={p_i}) links the extreme categories"
                    f" {p_min} and {p_max} directly"))
        if p_i >= cfg.a and not (out_ok or in_ok):
            out.append(Violation(
                "ObjRule3", oid,
                f"object {oid} (p={p_i} >= a={cfg.a}) has no qualifying link"))
    return _dedup_sorted(out)


def detect_invalid_link_categories(net: Network, cfg: HierarchyConfig) -> list[Violation]:
    """Links violating the three link-category rules, reported per object."""
    if cfg.c is None:
        raise ValueError("hierarchy config carries no link-category settings")
    for link in net.links_sorted():
        l = link.category_l
        if l is None:
            raise MissingLinkCategoryError(f"link {link.link_id} has no category l")
        if not (1 <= l <= cfg.c):
            raise ValueError(f"link {link.link_id}: category l={l} outside [1, {cfg.c}]")

    links = net.links_sorted()
    if not links:
        return []
    present = {link.category_l for link in links}
    l_min, l_max = min(present), max(present)
    out: list[Violation] = []

    for link in links:
        l_q = link.category_l
        into_src = [x for x in net.in_links(link.from_id) if x.link_id != link.link_id]
        from_dst = [x for x in net.out_links(link.to_id) if x.link_id != link.link_id]
        in_ok = any(x.category_l <= l_q for x in into_src)
        out_ok = any(x.category_l <= l_q for x in from_dst)

        if l_q < cfg.a_link and not (in_ok and out_ok):
            out.append(Violation(
                "LinkRule1", link.from_id,
                f"link {link.link_id} (l={l_q} < a={cfg.a_link}) lacks an incoming"
                f" link of category <= {l_q} at object {link.from_id} and an"
                f" outgoing one at object {link.to_id}"))
        if l_q >= cfg.a_link and not (in_ok or out_ok):
            out.append(Violation(
                "LinkRule3", link.from_id,
                f"link {link.link_id} (l={l_q} >= a={cfg.a_link}) has no"
                f" corresponding link of category <= {l_q}"))

    if l_min != l_max:
        for oid in net.object_ids():
            incident = net.out_links(oid) + net.in_links(oid)
            cats = {x.category_l for x in incident}
            if l_min in cats and l_max in cats:
                out.append(Violation(
                    "LinkRule2", oid,
                    f"object {oid} is associated with links of both extreme"
                    f" categories {l_min} and {l_max}"))
    return _dedup_sorted(out)
