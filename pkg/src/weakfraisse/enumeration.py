"""Isomorphism-class catalogues and extension enumeration.

Catalogues are built by augmentation: every graph of order n is a one-vertex
extension of a representative of order n - 1, so extending each
representative by every neighbour set and keeping one graph per canonical
certificate yields every class exactly once.  For hereditary classes the same
procedure run inside the class gives the class catalogue directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Mapping

from .canonical import automorphism_group, canonical_form
from .classes import ForbiddenClass
from .formats import read_graph6_lines, write_graph6_lines
from .graph import Graph, bits, empty

MAX_ORDER = 9
GENERATOR_VERSION = "1"

__all__ = ["MAX_ORDER", "IsoCatalog", "all_graphs", "all_graphs_in_class", "one_vertex_extensions",
           "extensions_up_to", "extension_partition", "write_catalog", "read_catalog"]


@dataclass(frozen=True)
class IsoCatalog:
    order: int
    members: tuple[Graph, ...]
    index: Mapping[tuple, int] = field(repr=False)
    class_name: str = "all"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.members)

    def position(self, g: Graph) -> int | None:
        return self.index.get(canonical_form(g).certificate)

    def __contains__(self, g: Graph) -> bool:
        return self.position(g) is not None


def _catalog(order: int, graphs: dict, class_name: str) -> IsoCatalog:
    keyed = sorted(graphs.items(), key=lambda kv: (kv[1].edge_count, kv[0]))
    members = tuple(g for _, g in keyed)
    index = {cert: i for i, (cert, _) in enumerate(keyed)}
    return IsoCatalog(order, members, index, class_name)


def _subset_reps(parent: Graph) -> list[int]:
    """Neighbour sets for a new vertex, one per orbit of Aut(parent) when the group is small."""
    n = parent.order
    masks = range(1 << n)
    try:
        group = automorphism_group(parent, limit=2000)
    except ValueError:
        return list(masks)
    if len(group) == 1:
        return list(masks)
    reps = []
    for s in masks:
        if all(_image(s, gm) >= s for gm in group):
            reps.append(s)
    return reps


def _image(mask: int, perm) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def _augment(reps: list[Graph], k: ForbiddenClass | None) -> dict:
    found: dict = {}
    for parent in reps:
        for s in _subset_reps(parent):
            child = parent.add_vertex(bits(s))
            if k is not None and not k.member(child):
                continue
            cf = canonical_form(child)
            if cf.certificate not in found:
                found[cf.certificate] = cf.apply(child)
    return found


@lru_cache(maxsize=None)
def all_graphs(n: int) -> IsoCatalog:
    """One canonical representative per isomorphism class of graphs of order ``n``."""
    if not 0 <= n <= MAX_ORDER:
        raise ValueError(f"all_graphs supports 0 <= n <= {MAX_ORDER}")
    if n == 0:
        g = empty(0)
        return _catalog(0, {canonical_form(g).certificate: g}, "all")
    return _catalog(n, _augment(list(all_graphs(n - 1).members), None), "all")


@lru_cache(maxsize=None)
def _class_catalog(k: ForbiddenClass, n: int) -> IsoCatalog:
    if n == 0:
        g = empty(0)
        graphs = {canonical_form(g).certificate: g} if k.member(g) else {}
        return _catalog(0, graphs, k.name)
    return _catalog(n, _augment(list(_class_catalog(k, n - 1).members), k), k.name)


def all_graphs_in_class(k: ForbiddenClass, n: int, hereditary: bool = True) -> IsoCatalog:
    """Members of ``all_graphs(n)`` that lie in ``k``.

    For hereditary classes the catalogue is grown inside the class, which is
    much cheaper than filtering; pass ``hereditary=False`` to filter instead.
    """
    if not 0 <= n <= MAX_ORDER:
        raise ValueError(f"all_graphs_in_class supports 0 <= n <= {MAX_ORDER}")
    if hereditary:
        return _class_catalog(k, n)
    full = all_graphs(n)
    graphs = {canonical_form(g).certificate: g for g in full if k.member(g)}
    return _catalog(n, graphs, k.name)


def extension_partition(base_order: int, total: int, fixed: str = "automorphism") -> list[list[int]]:
    """Ordered partition used to compare extensions of a base on ``0..base_order-1``.

    ``automorphism``: the base is kept setwise (extensions identified via Aut(base)).
    ``pointwise``: every base vertex is kept fixed.
    """
    new = list(range(base_order, total))
    if fixed == "automorphism":
        return [list(range(base_order)), new]
    if fixed == "pointwise":
        return [[v] for v in range(base_order)] + [new]
    raise ValueError(f"unknown fixing mode {fixed!r}")


def _neighbor_sets(g: Graph, k: ForbiddenClass) -> Iterator[int]:
    """Neighbour sets S with g + (new vertex on S) in k.

    Monotone classes are searched with superset pruning: once S fails, every
    superset fails too.
    """
    n = g.order
    if not k.monotone:
        for s in range(1 << n):
            if k.member(g.add_vertex(bits(s))):
                yield s
        return
    out: list[int] = []

    def rec(v: int, s: int) -> None:
        if v == n:
            out.append(s)
            return
        rec(v + 1, s)
        t = s | 1 << v
        if k.member(g.add_vertex(bits(t))):
            rec(v + 1, t)

    if k.member(g.add_vertex(())):
        rec(0, 0)
    yield from sorted(out)


def _dedup_extensions(candidates: Iterator[Graph], base_order: int, fixed: str) -> list[Graph]:
    seen = set()
    out = []
    for h in candidates:
        key = canonical_form(h, extension_partition(base_order, h.order, fixed)).certificate
        if key not in seen:
            seen.add(key)
            out.append(h)
    return out


def one_vertex_extensions(g: Graph, k: ForbiddenClass, fixed: str = "automorphism",
                          base_order: int | None = None) -> list[Graph]:
    """One-vertex extensions of ``g`` inside ``k``, one per class over the base.

    Every output contains ``g`` induced on ``0..g.order-1``.  ``base_order``
    (default ``g.order``) says how many leading vertices form the rigid base.
    """
    if g.order + 1 > 64:
        raise ValueError("order bound exceeded")
    base_order = g.order if base_order is None else base_order
    cands = (g.add_vertex(bits(s)) for s in _neighbor_sets(g, k))
    return _dedup_extensions(cands, base_order, fixed)


def extensions_up_to(g: Graph, k: ForbiddenClass, extra: int,
                     fixed: str = "automorphism") -> Iterator[Graph]:
    """Stream all members of ``k`` containing ``g`` (on its labels) with <= ``extra`` new vertices.

    Extensions are yielded level by level (by number of added vertices) in a
    fixed order, deduplicated over ``g``.
    """
    if extra < 0 or g.order + extra > 64:
        raise ValueError("order bound exceeded")
    if not k.member(g):
        return
    level = [g]
    yield g
    for _ in range(extra):
        cands = (h for parent in level for h in one_vertex_extensions(parent, k, fixed, g.order))
        level = _dedup_extensions(cands, g.order, fixed)
        yield from level


def write_catalog(cat: IsoCatalog, directory) -> Path:
    """Write ``<class>_<order>.g6`` plus a JSON manifest; returns the graph6 path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    stem = f"{cat.class_name.replace(':', '_').replace(',', '_')}_{cat.order}"
    g6 = d / f"{stem}.g6"
    write_graph6_lines(g6, cat.members)
    manifest = {"order": cat.order, "class": cat.class_name, "count": len(cat),
                "generator_version": GENERATOR_VERSION, "graphs": g6.name}
    (d / f"{stem}.manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return g6


def read_catalog(manifest_path) -> IsoCatalog:
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("generator_version") != GENERATOR_VERSION:
        raise ValueError("catalogue written by a different generator version")
    graphs = read_graph6_lines(manifest_path.parent / manifest["graphs"])
    if len(graphs) != manifest["count"]:
        raise ValueError("catalogue count does not match its manifest")
    found = {}
    for g in graphs:
        cf = canonical_form(g)
        found[cf.certificate] = cf.apply(g)
    return _catalog(manifest["order"], found, manifest["class"])
