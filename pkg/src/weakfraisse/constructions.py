"""Explicit constructions around the windmill and 4-cycle omission classes.

* :func:`bowtie_saturate` and :func:`wap_witness` build an extension of a
  windmill-free graph over which every pair of further windmill-free
  extensions has a windmill-free free amalgam.
* :func:`determined_closure` and :func:`c4_nonwap_gadgets` build, for any
  C4-free extension of the pentagon, two further extensions that cannot be
  amalgamated over the pentagon.
* :func:`check_diam2_proposition` tests the structural fact the gadget relies
  on: a C4-free graph of diameter 2 without a dominating vertex has an edge in
  no triangle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .classes import _matching_at_least, c4_free, has_c4, windmill_free
from .graph import (INFINITE, Graph, VertexMap, bits, diameter, distances_from, dominating_vertex,
                    edges_not_in_triangle, is_embedding, strongly_regular_params)

__all__ = [
    "BowtieAnchors",
    "bowtie_saturate",
    "WindmillWitness",
    "build_wap_witness",
    "wap_witness",
    "saturate_wings",
    "WindmillReplay",
    "windmill_free_amalgam_replay",
    "local_option_graph",
    "DeterminedSet",
    "determined_closure",
    "rigidity_check",
    "C4Gadget",
    "c4_nonwap_gadgets",
    "c4_refuter",
    "Diam2Verdict",
    "check_diam2_proposition",
]


# ------------------------------------------------------------------ windmill

@dataclass(frozen=True)
class BowtieAnchors:
    """``anchors[a] = (v1, v2, v3, v4)``: a weak bowtie centred at ``a`` with wings (v1, v2), (v3, v4)."""

    anchors: Mapping[int, tuple[int, int, int, int]]

    def verify(self, g: Graph) -> bool:
        for a, (v1, v2, v3, v4) in self.anchors.items():
            if len({a, v1, v2, v3, v4}) != 5:
                return False
            need = [(a, v1), (a, v2), (v1, v2), (a, v3), (a, v4), (v3, v4)]
            if not all(g.has_edge(u, v) for u, v in need):
                return False
        return True


def _first_disjoint_edges(g: Graph, a: int) -> tuple[int, int, int, int] | None:
    nbr = g.adj[a]
    edges = [(u, v) for u, v in g.edges() if nbr >> u & 1 and nbr >> v & 1]
    for e, f in itertools.combinations(edges, 2):
        if not set(e) & set(f):
            return e + f
    return None


def bowtie_saturate(a_graph: Graph) -> tuple[Graph, BowtieAnchors]:
    """Extend ``a_graph`` so every original vertex is the centre of a weak bowtie.

    Vertices are processed in label order.  An existing bowtie (two disjoint
    edges in the neighbourhood) is recorded as found.  If the neighbourhood has
    an edge but no two disjoint ones, a fresh triangle is hung on the vertex;
    if it has no edge at all, a fresh bowtie is glued on with the vertex as
    centre.  New vertices are appended after the existing labels.
    """
    k = windmill_free()
    if not k.member(a_graph):
        raise ValueError("input must be windmill-free")
    g = a_graph
    anchors: dict[int, tuple[int, int, int, int]] = {}
    for a in range(a_graph.order):
        found = _first_disjoint_edges(g, a)
        if found is not None:
            anchors[a] = found
            continue
        inner = _first_edge_in_neighbourhood(g, a)
        if inner is not None:
            v1 = g.order
            g = g.add_vertex([a]).add_vertex([a, v1])
            anchors[a] = (v1, v1 + 1) + inner
        else:
            v1 = g.order
            g = g.add_vertex([a]).add_vertex([a, v1])
            g = g.add_vertex([a]).add_vertex([a, v1 + 2])
            anchors[a] = (v1, v1 + 1, v1 + 2, v1 + 3)
    if not k.member(g):
        raise RuntimeError("bowtie saturation left the class")
    result = BowtieAnchors(anchors)
    if not result.verify(g):
        raise RuntimeError("recorded bowtie anchors do not verify")
    return g, result


def _first_edge_in_neighbourhood(g: Graph, a: int) -> tuple[int, int] | None:
    nbr = g.adj[a]
    for u in bits(nbr):
        m = g.adj[u] & nbr & ~((1 << (u + 1)) - 1)
        if m:
            return u, (m & -m).bit_length() - 1
    return None


def _has_extra_wing_partner(g: Graph, a: int, anchor: int, wings: tuple[int, ...]) -> bool:
    m = g.adj[a] & g.adj[anchor]
    for v in wings:
        m &= ~(1 << v)
    return bool(m)


def saturate_wings(g: Graph, anchors: BowtieAnchors) -> tuple[Graph, list[int]]:
    """One saturation pass to a fixpoint: returns the extended graph and the added vertices.

    For each anchored vertex ``a`` (label order) and each wing vertex ``v_k``
    (k = 1..4), when no vertex outside the wings is adjacent to both ``a`` and
    ``v_k``, a fresh vertex adjacent exactly to ``a`` and ``v_k`` is added
    provided the result stays windmill-free.  Testing only this minimal vertex
    is enough: any windmill-free extension with such a vertex contains it
    after deleting the other new vertices and edges.
    """
    k = windmill_free()
    added: list[int] = []
    changed = True
    while changed:
        changed = False
        for a in sorted(anchors.anchors):
            wings = anchors.anchors[a]
            for vk in wings:
                if _has_extra_wing_partner(g, a, vk, wings):
                    continue
                trial = g.add_vertex([a, vk])
                if k.member(trial):
                    added.append(g.order)
                    g = trial
                    changed = True
    return g, added


@dataclass(frozen=True)
class WindmillWitness:
    base: Graph
    graph: Graph
    anchors: BowtieAnchors
    wing_partners: tuple[int, ...]

    def named_vertices(self) -> dict[str, int]:
        out = {}
        for a, wings in sorted(self.anchors.anchors.items()):
            for i, v in enumerate(wings, start=1):
                out[f"v{i}[{a}]"] = v
        return out


def build_wap_witness(a_graph: Graph) -> WindmillWitness:
    """Bowtie saturation followed by the wing-partner saturation loop."""
    e, anchors = bowtie_saturate(a_graph)
    g, added = saturate_wings(e, anchors)
    if g.induced(range(a_graph.order)) != a_graph:
        raise RuntimeError("witness does not contain the base on its labels")
    return WindmillWitness(a_graph, g, anchors, tuple(added))


def wap_witness(a_graph: Graph) -> Graph:
    """The witness graph over which windmill-free extensions amalgamate freely."""
    return build_wap_witness(a_graph).graph


@dataclass
class WindmillReplay:
    base: Graph
    witness: Graph
    extra: int
    glue: str = "base"
    centres: tuple[int, ...] = ()
    local_extensions: dict[int, int] = field(default_factory=dict)
    pairs_checked: int = 0
    failures: list[tuple[int, tuple, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _local_options(witness: Graph, a: int, extra: int) -> list[tuple[tuple[int, ...], ...]]:
    """Windmill-free extensions of ``witness`` by <= ``extra`` vertices, each adjacent to ``a``
    with all other neighbours in N(a) or among the new vertices.

    An option is a tuple of ``(neighbour mask in N(a), mask of earlier new vertices)`` per new vertex.
    """
    k = windmill_free()
    nbr = sorted(bits(witness.adj[a]))

    def graph_of(option) -> Graph:
        return local_option_graph(witness, a, option)

    singles = []

    def rec(i: int, s: int) -> None:
        if i == len(nbr):
            singles.append(s)
            return
        rec(i + 1, s)
        t = s | 1 << nbr[i]
        if k.member(graph_of(((t, 0),))):
            rec(i + 1, t)

    if k.member(graph_of(((0, 0),))):
        rec(0, 0)
    options: list[tuple] = [()]
    level = [((s, 0),) for s in sorted(singles)]
    options += level
    for r in range(2, extra + 1):
        nxt = []
        for opt in level:
            last = opt[-1][0]
            for s in sorted(singles):
                if s < last:
                    continue
                for inner in range(1 << len(opt)):
                    cand = opt + ((s, inner),)
                    if k.member(graph_of(cand)):
                        nxt.append(cand)
        options += nxt
        level = nxt
    return options


def _link_matching(witness: Graph, shared_order: int, a: int, opt_b, opt_c) -> bool:
    """Does the neighbourhood of ``a`` in the free amalgam glued along labels
    ``0..shared_order-1`` hold 3 disjoint edges?"""
    n0 = witness.order
    nbr = list(bits(witness.adj[a]))
    # vertex ids: shared base neighbours keep their label, witness-only copies are tagged per side
    ids: dict = {}
    for v in nbr:
        if v < shared_order:
            ids[("s", v)] = len(ids)
    for side in "bc":
        for v in nbr:
            if v >= shared_order:
                ids[(side, v)] = len(ids)
    for side, opt in (("b", opt_b), ("c", opt_c)):
        for j in range(len(opt)):
            ids[(side, n0 + j)] = len(ids)
    adj = [0] * len(ids)

    def key(side, v):
        return ("s", v) if v < shared_order else (side, v)

    def link(x, y):
        i, j = ids[x], ids[y]
        adj[i] |= 1 << j
        adj[j] |= 1 << i

    for side, opt in (("b", opt_b), ("c", opt_c)):
        for u in nbr:
            for v in bits(witness.adj[u] & witness.adj[a]):
                if u < v:
                    link(key(side, u), key(side, v))
        for j, (s, inner) in enumerate(opt):
            for v in bits(s):
                link((side, n0 + j), key(side, v))
            for i in bits(inner):
                link((side, n0 + j), (side, n0 + i))
    return _matching_at_least(adj, (1 << len(ids)) - 1, 3)


def windmill_free_amalgam_replay(base: Graph, witness: Graph | None = None, extra: int = 2,
                                 glue: str = "base", centres: Iterable[int] | None = None) -> WindmillReplay:
    """Check that free amalgams of extensions of the witness stay windmill-free.

    ``glue="base"`` identifies only the base vertices (the free amalgam over
    the base); ``glue="witness"`` identifies the whole witness.  ``centres``
    limits which vertices are tested as windmill centres (default: every
    vertex where a windmill can be centred, i.e. every shared vertex).

    Exact reduction used (the windmill is a cone over three disjoint edges):
    every triangle of a free amalgam lies on one side, so a windmill in it is
    centred at a shared vertex ``a``.  Deleting the new vertices not adjacent
    to ``a`` and the edges of new vertices leaving N[a] keeps both sides
    windmill-free and keeps the windmill.  So it suffices to check, per
    centre, all pairs of such local extensions; a pair fails iff the
    neighbourhood of ``a`` in the amalgam has three disjoint edges.
    """
    witness = wap_witness(base) if witness is None else witness
    if witness.induced(range(base.order)) != base:
        raise ValueError("base must be induced in the witness on its first labels")
    if glue not in ("base", "witness"):
        raise ValueError(f"unknown gluing {glue!r}")
    shared = base.order if glue == "base" else witness.order
    centres = range(shared) if centres is None else sorted(centres)
    if any(not 0 <= a < shared for a in centres):
        raise ValueError("centres must be shared vertices")
    report = WindmillReplay(base, witness, extra, glue, tuple(centres))
    for a in centres:
        options = _local_options(witness, a, extra)
        report.local_extensions[a] = len(options)
        for i, ob in enumerate(options):
            for oc in options[i:]:
                report.pairs_checked += 1
                if _link_matching(witness, shared, a, ob, oc):
                    report.failures.append((a, ob, oc))
    return report


def local_option_graph(witness: Graph, a: int, option) -> Graph:
    """The extension of ``witness`` described by a local option at centre ``a``."""
    g = witness
    n0 = witness.order
    for s, inner in option:
        g = g.add_vertex([a, *bits(s), *(n0 + j for j in bits(inner))])
    return g


# ------------------------------------------------------------ determined sets

@dataclass(frozen=True)
class DeterminedSet:
    host: Graph
    base: frozenset[int]
    members: frozenset[int]

    def __contains__(self, v: int) -> bool:
        return v in self.members


def determined_closure(host: Graph, base: Iterable[int]) -> DeterminedSet:
    """Least superset of ``base`` containing every vertex with two neighbours inside it."""
    base = frozenset(base)
    if any(not 0 <= v < host.order for v in base):
        raise ValueError("base vertices must belong to the host")
    x = 0
    for v in base:
        x |= 1 << v
    changed = True
    while changed:
        changed = False
        for v in range(host.order):
            if not x >> v & 1 and (host.adj[v] & x).bit_count() >= 2:
                x |= 1 << v
                changed = True
    return DeterminedSet(host, base, frozenset(bits(x)))


def rigidity_check(e: Graph, base: Iterable[int], d: Graph, f: VertexMap, g: VertexMap) -> bool:
    """Do two base-agreeing embeddings of ``e`` into a C4-free ``d`` agree on the determined closure?"""
    base = list(base)
    for m in (f, g):
        if m.source != e or m.target != d or not is_embedding(m):
            raise ValueError("f and g must be embeddings of e into d")
    if any(f(v) != g(v) for v in base):
        raise ValueError("f and g must agree on the base")
    if has_c4(d):
        raise ValueError("target must be C4-free")
    return all(f(v) == g(v) for v in determined_closure(e, base).members)


# ------------------------------------------------------------------ C4 gadgets

@dataclass(frozen=True)
class C4Gadget:
    """Two extensions ``B`` and ``C`` of a pentagon witness with no amalgam over the pentagon.

    ``E`` is the witness after augmentation (with ``v_x``, ``v_y`` secured), ``path`` the geodesic
    ``(x, x', y', y)``, ``aux`` holds ``v_x, v_y, z, w_x, w_y`` and ``s, t`` and
    the C-side path vertices.  All vertex ids refer to ``B`` / ``C`` labels;
    the witness occupies the first labels of both.
    """

    witness: Graph
    E: Graph
    path: tuple[int, int, int, int]
    aux: Mapping[str, int]
    B: Graph
    C: Graph
    augmented_edges: tuple[tuple[int, int], ...]

    @property
    def base(self) -> Graph:
        return self.witness.induced(range(5))

    def named_vertices(self) -> dict[str, int]:
        x, x1, y1, y = self.path
        out = {"x": x, "x'": x1, "y'": y1, "y": y}
        out.update(self.aux)
        return out


def _is_pentagon_prefix(g: Graph) -> bool:
    if g.order < 5:
        return False
    p = g.induced(range(5))
    return p.edge_count == 5 and all(d == 2 for d in p.degrees()) and p.is_connected()


def c4_nonwap_gadgets(witness: Graph) -> C4Gadget:
    """Build the non-amalgamable pair for a C4-free witness containing the pentagon on labels 0..4."""
    if not c4_free().member(witness):
        raise ValueError("witness must be C4-free")
    if not _is_pentagon_prefix(witness):
        raise ValueError("witness must contain the pentagon induced on labels 0..4")
    base = range(5)
    det = sorted(determined_closure(witness, base).members)
    d_graph = witness.induced(det)
    e = witness
    augmented: list[tuple[int, int]] = []
    apex: dict[tuple[int, int], int] = {}
    diam = diameter(d_graph)
    if diam is not INFINITE and diam <= 2:
        for u, v in edges_not_in_triangle(d_graph):
            pair = (det[u], det[v])
            apex[pair] = e.order
            e = e.add_vertex(pair)
            augmented.append(pair)
    closure = determined_closure(e, base).members
    expected = set(det) | set(apex.values())
    if set(closure) != expected:
        raise RuntimeError("augmentation changed the determined set unexpectedly")
    det2 = sorted(closure)
    path = _min_geodesic(e, det2)
    if path is None:
        raise RuntimeError("no determined geodesic path of length 3; the diameter-two fact would fail")
    x, x1, y1, y = path
    if distances_from(e, x)[y] != 3:
        raise RuntimeError("chosen path is not geodesic in the augmented graph")

    def secure_apex(g: Graph, u: int, v: int) -> tuple[Graph, int]:
        common = g.adj[u] & g.adj[v]
        if common:
            w = (common & -common).bit_length() - 1
            return g, w
        # edge in no triangle: a fresh common neighbour creates no 4-cycle
        return g.add_vertex([u, v]), g.order

    e, v_x = secure_apex(e, x, x1)
    e, v_y = secure_apex(e, y, y1)
    if e.has_edge(v_x, v_y):
        raise RuntimeError("v_x and v_y adjacent; the witness would contain a 4-cycle")
    z = e.order
    e1 = e.add_vertex([x, y])
    w_y = e1.order
    e1 = e1.add_vertex([x, z])
    w_x = e1.order
    e1 = e1.add_vertex([y, z])
    s = e1.order
    t = s + 1
    b = e1.add_vertex([w_x, v_x]).add_vertex([w_y, v_y, s])
    c = e1.add_vertex([w_x, v_x]).add_vertex([w_y, v_y])
    p1 = c.order
    c = c.add_vertex([s]).add_vertex([p1, t])
    aux = {"v_x": v_x, "v_y": v_y, "z": z, "w_x": w_x, "w_y": w_y, "s": s, "t": t,
           "p1": p1, "p2": p1 + 1}
    k = c4_free()
    if not (k.member(b) and k.member(c)):
        raise RuntimeError("gadget extension left K(C4)")
    named = [x, x1, y1, y, v_x, v_y, z, w_x, w_y, s, t]
    for h in (b, c):
        members = determined_closure(h, base).members
        if not all(v in members for v in named):
            raise RuntimeError("gadget vertices are not all determined over the pentagon")
    return C4Gadget(witness, e, path, aux, b, c, tuple(augmented))


def _min_geodesic(g: Graph, det: list[int]) -> tuple[int, int, int, int] | None:
    """Lexicographically least (x, x', y', y) of determined vertices with d(x, y) = 3 inside them."""
    sub = g.induced(det)
    pos = {v: i for i, v in enumerate(det)}
    dist = {v: distances_from(sub, pos[v]) for v in det}
    for x in det:
        for x1 in sorted(u for u in bits(g.adj[x]) if u in pos):
            for y1 in sorted(u for u in bits(g.adj[x1]) if u in pos):
                for y in sorted(u for u in bits(g.adj[y1]) if u in pos):
                    if dist[x][pos[y]] == 3:
                        return x, x1, y1, y
    return None


def c4_refuter(witness: Graph) -> tuple[Graph, Graph]:
    """Refuter for the pentagon: the gadget pair of ``witness``."""
    gadget = c4_nonwap_gadgets(witness)
    return gadget.B, gadget.C


# ---------------------------------------------------------- diameter-two fact

@dataclass(frozen=True)
class Diam2Verdict:
    """``branch`` is "strongly_regular", "two_valency", "unclassified", or None if hypotheses fail."""

    hypotheses_met: bool
    reason: str
    triangle_free_edges: tuple[tuple[int, int], ...] = ()
    branch: str | None = None
    srg_params: tuple[int, int, int] | None = None
    valencies: tuple[int, ...] = ()

    @property
    def holds(self) -> bool:
        return not self.hypotheses_met or bool(self.triangle_free_edges)


def check_diam2_proposition(g: Graph) -> Diam2Verdict:
    """Test whether ``g`` is C4-free of diameter 2 without a dominating vertex, and if so
    report its triangle-free edges and which structural case applies."""
    if g.order == 0:
        return Diam2Verdict(False, "empty graph")
    if has_c4(g):
        return Diam2Verdict(False, "contains a 4-cycle")
    if diameter(g) != 2:
        return Diam2Verdict(False, "diameter is not 2")
    if dominating_vertex(g) is not None:
        return Diam2Verdict(False, "has a dominating vertex")
    free_edges = tuple(edges_not_in_triangle(g))
    params = strongly_regular_params(g)
    valencies = tuple(sorted(set(g.degrees())))
    if params is not None and params[2] == 1:
        branch = "strongly_regular"
    elif len(valencies) == 2 and free_edges:
        branch = "two_valency"
    else:
        branch = "unclassified"
    return Diam2Verdict(True, "hypotheses met", free_edges, branch, params, valencies)
