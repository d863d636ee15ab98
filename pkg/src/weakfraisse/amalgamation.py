"""Amalgams of finite graphs and bounded AP / CAP / WAP checks.

An amalgam of ``B`` and ``C`` over ``A`` lives on the union of the two images,
so it is a quotient of the free amalgam by a partial identification
``sigma`` between ``B - A`` and ``C - A``, possibly with extra cross edges
between the unidentified parts.  :func:`find_amalgam` searches these
quotients exhaustively.  Two pruning rules keep it fast and stay exact:

* hereditary pruning: once a set of vertices of the amalgam is settled (its
  induced subgraph can no longer change) that subgraph must lie in the class;
* for classes inside K(C4), if two shared vertices have a common neighbour on
  each side, those neighbours must be identified, otherwise the amalgam has
  a 4-cycle.  Identifications are propagated to a fixpoint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .canonical import automorphism_group, canonical_form
from .classes import ForbiddenClass
from .enumeration import extension_partition, extensions_up_to
from .graph import Graph, VertexMap, bits, is_embedding

MAX_COMBINED_ORDER = 1024

__all__ = [
    "MAX_COMBINED_ORDER",
    "AmalgamationProblem",
    "Amalgam",
    "free_amalgam",
    "find_amalgam",
    "find_amalgam_brute",
    "ApReport",
    "check_ap",
    "WitnessCertificate",
    "verify_wap_witness",
    "check_cap_witness",
    "find_cap_witness",
    "refute_wap_at",
    "RefutationTree",
    "build_refutation_tree",
]


@dataclass(frozen=True)
class AmalgamationProblem:
    """``base`` embeds into ``left`` and ``right`` via the given assignments (both induced)."""

    base: Graph
    left: Graph
    right: Graph
    left_embedding: tuple[int, ...]
    right_embedding: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "left_embedding", tuple(self.left_embedding))
        object.__setattr__(self, "right_embedding", tuple(self.right_embedding))
        for emb, host in ((self.left_embedding, self.left), (self.right_embedding, self.right)):
            if not is_embedding(VertexMap(self.base, host, emb)):
                raise ValueError("base must embed (induced) into both sides")

    @classmethod
    def over_prefix(cls, base: Graph, left: Graph, right: Graph) -> AmalgamationProblem:
        """Problem where ``base`` sits on the first labels of both sides."""
        ident = tuple(range(base.order))
        return cls(base, left, right, ident, ident)


@dataclass(frozen=True)
class Amalgam:
    problem: AmalgamationProblem
    result: Graph
    left_map: tuple[int, ...]
    right_map: tuple[int, ...]

    def __post_init__(self):
        p = self.problem
        lm = VertexMap(p.left, self.result, self.left_map)
        rm = VertexMap(p.right, self.result, self.right_map)
        if not (is_embedding(lm) and is_embedding(rm)):
            raise ValueError("amalgam maps must be induced embeddings")
        for a in range(p.base.order):
            if self.left_map[p.left_embedding[a]] != self.right_map[p.right_embedding[a]]:
                raise ValueError("amalgam square does not commute over the base")
        if self.result.order > p.left.order + p.right.order - p.base.order:
            raise ValueError("amalgam larger than the union of the images")

    @property
    def identified(self) -> dict[int, int]:
        """Identified pairs outside the base, as ``left vertex -> right vertex``."""
        p = self.problem
        inv = {d: c for c, d in enumerate(self.right_map)}
        base_left = set(p.left_embedding)
        return {b: inv[d] for b, d in enumerate(self.left_map) if b not in base_left and d in inv}


def free_amalgam(p: AmalgamationProblem) -> Amalgam:
    """Glue ``left`` and ``right`` along the base with no further identifications or edges."""
    nb = p.left.order
    c_to_a = {c: a for a, c in enumerate(p.right_embedding)}
    right_map = []
    nxt = nb
    for c in range(p.right.order):
        if c in c_to_a:
            right_map.append(p.left_embedding[c_to_a[c]])
        else:
            right_map.append(nxt)
            nxt += 1
    edges = list(p.left.edges())
    edges += [(right_map[u], right_map[v]) for u, v in p.right.edges()]
    d = Graph.from_edges(nxt, edges)
    return Amalgam(p, d, tuple(range(nb)), tuple(right_map))


class _Search:
    """Exhaustive search over identifications (and optionally cross edges)."""

    def __init__(self, p: AmalgamationProblem, k: ForbiddenClass, allow_cross_edges: bool,
                 propagate: bool, prefer_free: bool, prune: bool):
        self.p, self.k = p, k
        self.cross = allow_cross_edges
        self.propagate = propagate
        self.prefer_free = prefer_free
        # hereditary pruning on settled vertices is only final without cross edges
        self.prune = prune and not allow_cross_edges
        self.B, self.C = p.left, p.right
        nb, nc = self.B.order, self.C.order
        self.base_b = set(p.left_embedding)
        self.base_c = set(p.right_embedding)
        self.c_base_to_b = {p.right_embedding[a]: p.left_embedding[a] for a in range(p.base.order)}
        self.bfree = [b for b in range(nb) if b not in self.base_b]
        self.cfree = [c for c in range(nc) if c not in self.base_c]
        self.cfree_mask = sum(1 << c for c in self.cfree)
        self.static = {}
        for b in self.bfree:
            mask = 0
            for c in self.cfree:
                if all(self.B.has_edge(b, p.left_embedding[a]) == self.C.has_edge(c, p.right_embedding[a])
                       for a in range(p.base.order)):
                    mask |= 1 << c
            self.static[b] = mask
        self.nodes = 0

    # -- D construction -------------------------------------------------------

    def _phi(self, sigma_inv: dict[int, int]) -> dict[int, int]:
        """Map C vertices to D ids (C-only vertices get ids after B)."""
        nb = self.B.order
        phi = {}
        for c in range(self.C.order):
            if c in self.c_base_to_b:
                phi[c] = self.c_base_to_b[c]
            elif c in sigma_inv:
                phi[c] = sigma_inv[c]
            else:
                phi[c] = nb + c
        return phi

    def _partial_graph(self, b_vertices, c_only, sigma_inv, cross=()) -> Graph:
        """Induced subgraph of the amalgam on the given B vertices and C-only vertices."""
        phi = self._phi(sigma_inv)
        nb = self.B.order
        ids = list(b_vertices) + [nb + c for c in c_only]
        pos = {d: i for i, d in enumerate(ids)}
        edges = set()
        for u, v in self.B.edges():
            if u in pos and v in pos:
                edges.add((pos[u], pos[v]))
        for u, v in self.C.edges():
            du, dv = phi[u], phi[v]
            if du in pos and dv in pos:
                a, b = sorted((pos[du], pos[dv]))
                edges.add((a, b))
        for b, c in cross:
            if b in pos and nb + c in pos:
                edges.add((pos[b], pos[nb + c]))
        return Graph.from_edges(len(ids), edges)

    def _build(self, sigma: dict[int, int], cross=()) -> Amalgam:
        nb = self.B.order
        sigma_inv = {c: b for b, c in sigma.items()}
        phi = self._phi(sigma_inv)
        c_only = [c for c in range(self.C.order) if phi[c] >= nb]
        compact = {nb + c: nb + i for i, c in enumerate(c_only)}
        right_map = tuple(compact.get(phi[c], phi[c]) for c in range(self.C.order))
        edges = set(self.B.edges())
        for u, v in self.C.edges():
            a, b = sorted((right_map[u], right_map[v]))
            edges.add((a, b))
        for b, c in cross:
            edges.add((b, compact[nb + c]))
        d = Graph.from_edges(nb + len(c_only), edges)
        return Amalgam(self.p, d, tuple(range(nb)), right_map)

    # -- search ---------------------------------------------------------------

    def run(self) -> Amalgam | None:
        cand = {b: self.static[b] for b in self.bfree}
        return self._rec({}, set(), cand)

    def _shared_mask_b(self, sigma) -> int:
        m = 0
        for b in self.base_b:
            m |= 1 << b
        for b in sigma:
            m |= 1 << b
        return m

    def _b_to_c(self, sigma, x: int) -> int:
        if x in sigma:
            return sigma[x]
        return self.p.right_embedding[self.p.left_embedding.index(x)]

    def _c4_forced(self, sigma, unmatched, cand):
        """Return (forced identifications, dead) under the C4 common-neighbour rule."""
        shared = self._shared_mask_b(sigma)
        used = 0
        for c in sigma.values():
            used |= 1 << c
        unclaimed = self.cfree_mask & ~used
        forced = {}
        for b in unmatched:
            sb = list(bits(self.B.adj[b] & shared))
            if len(sb) < 2:
                continue
            for x, y in itertools.combinations(sb, 2):
                cx, cy = self._b_to_c(sigma, x), self._b_to_c(sigma, y)
                common = self.C.adj[cx] & self.C.adj[cy] & unclaimed
                if not common:
                    continue
                c = (common & -common).bit_length() - 1
                if b not in cand or not cand[b] >> c & 1:
                    return None, True
                if forced.get(b, c) != c:
                    return None, True
                forced[b] = c
        if len(set(forced.values())) != len(forced):
            return None, True
        return forced, False

    def _assign(self, sigma, cand, b, c):
        """Identify b with c, updating candidate masks; returns new cand or None if dead."""
        new = {}
        for b2, m in cand.items():
            if b2 == b:
                continue
            m &= ~(1 << c)
            m &= self.C.adj[c] if self.B.has_edge(b, b2) else ~self.C.adj[c]
            new[b2] = m
        sigma[b] = c
        return new

    def _settled_ok(self, sigma, decided, cand) -> bool:
        used = 0
        for c in sigma.values():
            used |= 1 << c
        open_c = 0
        for m in cand.values():
            open_c |= m
        closed = [c for c in self.cfree if not (used >> c & 1) and not (open_c >> c & 1)]
        b_vertices = sorted(self.base_b | decided)
        g = self._partial_graph(b_vertices, closed, {c: b for b, c in sigma.items()})
        return self.k.member(g)

    def _rec(self, sigma: dict, nones: set, cand: dict) -> Amalgam | None:
        self.nodes += 1
        sigma = dict(sigma)
        nones = set(nones)
        if self.propagate:
            while True:
                forced, dead = self._c4_forced(sigma, list(cand) + sorted(nones), cand)
                if dead:
                    return None
                forced = {b: c for b, c in forced.items() if b in cand}
                if not forced:
                    break
                for b, c in sorted(forced.items()):
                    if b not in cand or not cand[b] >> c & 1:
                        return None
                    cand = self._assign(sigma, cand, b, c)
        stuck = [b for b, m in cand.items() if not m]
        if stuck:
            # vertices without candidates can only stay unidentified
            nones |= set(stuck)
            cand = {b: m for b, m in cand.items() if m}
        if self.prune and not self._settled_ok(sigma, set(sigma) | nones, cand):
            return None
        if not cand:
            return self._leaf(sigma, nones)
        # most constrained vertex first, ties by label
        b = min(cand, key=lambda v: (cand[v].bit_count(), v))
        options: list[int | None] = list(bits(cand[b]))
        options = [None] + options if self.prefer_free else options + [None]
        rest = {v: m for v, m in cand.items() if v != b}
        for c in options:
            if c is None:
                found = self._rec(sigma, nones | {b}, rest)
            else:
                s2 = dict(sigma)
                cand2 = self._assign(s2, {**rest, b: 0}, b, c)
                found = self._rec(s2, nones, cand2)
            if found is not None:
                return found
        return None

    def _leaf(self, sigma, nones) -> Amalgam | None:
        am = self._build(sigma)
        if self.k.member(am.result):
            return am
        if not self.cross:
            return None
        return self._cross_search(sigma, sorted(nones))

    def _cross_search(self, sigma, b_only) -> Amalgam | None:
        used = set(sigma.values())
        c_only = [c for c in self.cfree if c not in used]
        if not b_only or not c_only:
            return None
        sigma_inv = {c: b for b, c in sigma.items()}
        fixed_b = sorted(self.base_b | set(sigma))

        def rec(i: int, chosen: list) -> Amalgam | None:
            self.nodes += 1
            if i == len(b_only):
                am = self._build(sigma, chosen)
                return am if self.k.member(am.result) else None
            b = b_only[i]
            for r in range(len(c_only) + 1):
                for subset in itertools.combinations(c_only, r):
                    nxt = chosen + [(b, c) for c in subset]
                    g = self._partial_graph(fixed_b + b_only[:i + 1], c_only, sigma_inv, nxt)
                    if not self.k.member(g):
                        continue
                    found = rec(i + 1, nxt)
                    if found is not None:
                        return found
            return None

        return rec(0, [])


def find_amalgam(p: AmalgamationProblem, k: ForbiddenClass, allow_cross_edges: bool = False,
                 propagate: bool | None = None, prefer_free: bool = True,
                 prune: bool = True) -> Amalgam | None:
    """Search for ``D`` in ``k`` amalgamating ``left`` and ``right`` over the base.

    Every partial identification of the non-base vertices consistent with
    induced embeddings is considered, and with ``allow_cross_edges`` also every
    set of edges between unidentified left and right vertices.  ``propagate``
    (default: on for C4-free classes) enables the common-neighbour rule.
    Returns the first amalgam found or None.
    """
    if p.left.order + p.right.order - p.base.order > MAX_COMBINED_ORDER:
        raise ValueError("combined order exceeds the search bound")
    if propagate is None:
        propagate = k.forbids_c4
    elif propagate and not k.forbids_c4:
        raise ValueError("C4 propagation is only sound for classes inside K(C4)")
    return _Search(p, k, allow_cross_edges, propagate, prefer_free, prune).run()


def find_amalgam_brute(p: AmalgamationProblem, k: ForbiddenClass) -> Amalgam | None:
    """Reference search: try every partial injection, no pruning, no propagation."""
    B, C = p.left, p.right
    base_b, base_c = set(p.left_embedding), set(p.right_embedding)
    bfree = [b for b in range(B.order) if b not in base_b]
    cfree = [c for c in range(C.order) if c not in base_c]
    c_to_b = {p.right_embedding[a]: p.left_embedding[a] for a in range(p.base.order)}
    for r in range(min(len(bfree), len(cfree)) + 1):
        for bs in itertools.combinations(bfree, r):
            for cs in itertools.permutations(cfree, r):
                phi = dict(c_to_b)
                phi.update({c: b for b, c in zip(bs, cs)})
                nxt = B.order
                for c in range(C.order):
                    if c not in phi:
                        phi[c] = nxt
                        nxt += 1
                edges = set(B.edges())
                for u, v in C.edges():
                    edges.add(tuple(sorted((phi[u], phi[v]))))
                d = Graph.from_edges(nxt, edges)
                right_map = tuple(phi[c] for c in range(C.order))
                if not is_embedding(VertexMap(B, d, tuple(range(B.order)))):
                    continue
                if not is_embedding(VertexMap(C, d, right_map)):
                    continue
                if k.member(d):
                    return Amalgam(p, d, tuple(range(B.order)), right_map)
    return None


# ---------------------------------------------------------------- AP sweeps

@dataclass
class ApReport:
    class_name: str
    n: int
    problems: int = 0
    failures: list[tuple[Graph, Graph, Graph]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _pairs(items: list) -> Iterator[tuple[int, int]]:
    # small pairs first
    for j in range(len(items)):
        for i in range(j + 1):
            yield i, j


def check_ap(k: ForbiddenClass, n: int, stop_at_first: bool = False) -> ApReport:
    """Every (A, B, C) with A in the class and B, C extensions of A of order <= n amalgamate."""
    if n > 6:
        raise ValueError("check_ap supports n <= 6")
    from .enumeration import all_graphs_in_class
    report = ApReport(k.name, n)
    for m in range(0, n + 1):
        for a in all_graphs_in_class(k, m):
            exts = list(extensions_up_to(a, k, n - m, fixed="pointwise"))
            for i, j in _pairs(exts):
                report.problems += 1
                prob = AmalgamationProblem.over_prefix(a, exts[i], exts[j])
                if find_amalgam(prob, k) is None:
                    report.failures.append((a, exts[i], exts[j]))
                    if stop_at_first:
                        return report
    return report


# ---------------------------------------------------------------- WAP / CAP

@dataclass
class WitnessCertificate:
    """Outcome of a bounded witness check.

    ``mode`` is ``"wap"`` (amalgamate over the base) or ``"cap"`` (over the
    witness).  ``kind`` is ``"witness_verified"`` or ``"refuted"``; a refuted
    certificate carries ``(witness, B, C)`` with no amalgam.
    """

    mode: str
    kind: str
    class_name: str
    base: Graph
    witness: Graph
    extra: int
    pairs_checked: int = 0
    counterexample: tuple[Graph, Graph, Graph] | None = None

    @property
    def verified(self) -> bool:
        return self.kind == "witness_verified"

    @property
    def bounds(self) -> dict:
        return {"witness_order": self.witness.order, "extra": self.extra}


def _check_prefix(base: Graph, witness: Graph) -> None:
    if base.order > witness.order or witness.induced(range(base.order)) != base:
        raise ValueError("base must be induced in the witness on its first labels")


def _stabilizer_reps(exts: list[Graph], witness: Graph, base_order: int) -> list[int]:
    """Indices of extensions, one per orbit of the automorphisms of the witness fixing the base setwise."""
    try:
        group = automorphism_group(witness, limit=2000)
    except ValueError:
        return list(range(len(exts)))
    base = set(range(base_order))
    group = [g for g in group if {g[v] for v in base} == base]
    if len(group) <= 1:
        return list(range(len(exts)))
    seen = set()
    reps = []
    for idx, h in enumerate(exts):
        keys = []
        for gm in group:
            perm = list(gm) + list(range(witness.order, h.order))
            hh = h.relabel(perm)
            part = extension_partition(witness.order, hh.order, "pointwise")
            keys.append(canonical_form(hh, part).certificate)
        key = min(keys)
        if key not in seen:
            seen.add(key)
            reps.append(idx)
    return reps


def _witness_sweep(mode: str, k: ForbiddenClass, base: Graph, witness: Graph, extra: int,
                   amalgam_base: Graph) -> WitnessCertificate:
    _check_prefix(base, witness)
    if not k.member(witness):
        raise ValueError("witness is not in the class")
    exts = list(extensions_up_to(witness, k, extra, fixed="pointwise"))
    left_reps = set(_stabilizer_reps(exts, witness, amalgam_base.order))
    cert = WitnessCertificate(mode, "witness_verified", k.name, base, witness, extra)
    for i, j in _pairs(exts):
        if i not in left_reps and j not in left_reps:
            continue
        cert.pairs_checked += 1
        prob = AmalgamationProblem.over_prefix(amalgam_base, exts[i], exts[j])
        if find_amalgam(prob, k) is None:
            cert.kind = "refuted"
            cert.counterexample = (witness, exts[i], exts[j])
            return cert
    return cert


def verify_wap_witness(k: ForbiddenClass, base: Graph, witness: Graph, extra: int) -> WitnessCertificate:
    """All pairs of extensions of ``witness`` (<= ``extra`` new vertices) amalgamate over ``base``."""
    return _witness_sweep("wap", k, base, witness, extra, base)


def check_cap_witness(k: ForbiddenClass, base: Graph, witness: Graph, extra: int) -> WitnessCertificate:
    """As :func:`verify_wap_witness`, but the amalgam must commute over the whole witness."""
    return _witness_sweep("cap", k, base, witness, extra, witness)


def find_cap_witness(k: ForbiddenClass, base: Graph, witness_extra: int,
                     ext_extra: int) -> WitnessCertificate | None:
    """Smallest witness (in stream order) passing :func:`check_cap_witness`, or None."""
    for w in extensions_up_to(base, k, witness_extra, fixed="pointwise"):
        cert = check_cap_witness(k, base, w, ext_extra)
        if cert.verified:
            return cert
    return None


Refuter = Callable[[Graph], tuple[Graph, Graph]]


def refute_wap_at(k: ForbiddenClass, base: Graph, witness_extra: int, ext_extra: int | None = None,
                  refuter: Refuter | None = None) -> list[tuple[Graph, Graph, Graph]] | None:
    """Refute every candidate witness of ``base`` within ``witness_extra`` new vertices.

    Each witness gets a pair (B, C) with no amalgam over the base, either from
    ``refuter`` (then certified by search) or from a bounded sweep of
    ``ext_extra`` new vertices.  Returns ``[(witness, B, C), ...]`` or None as
    soon as some witness survives.
    """
    if refuter is None and ext_extra is None:
        raise ValueError("need a refuter or an extension bound")
    out = []
    for w in extensions_up_to(base, k, witness_extra):
        if refuter is not None:
            b, c = refuter(w)
            _check_prefix(w, b)
            _check_prefix(w, c)
            if find_amalgam(AmalgamationProblem.over_prefix(base, b, c), k) is not None:
                return None
            out.append((w, b, c))
        else:
            cert = verify_wap_witness(k, base, w, ext_extra)
            if cert.verified:
                return None
            out.append(cert.counterexample)
    return out


@dataclass
class RefutationTree:
    """Binary tree of graphs keyed by 0/1 strings; siblings do not amalgamate over the base."""

    class_name: str
    base: Graph
    depth: int
    nodes: dict[str, Graph]
    certified: dict[str, bool] = field(default_factory=dict)

    @property
    def leaves(self) -> list[str]:
        return [s for s in self.nodes if len(s) == self.depth]

    def sibling_pairs(self) -> list[tuple[str, Graph, Graph]]:
        return [(s, self.nodes[s + "0"], self.nodes[s + "1"]) for s in self.nodes if len(s) < self.depth]

    def replay(self, k: ForbiddenClass, propagate: bool | None = None) -> bool:
        for s, node in self.nodes.items():
            if s:
                parent = self.nodes[s[:-1]]
                if node.order <= parent.order or node.induced(range(parent.order)) != parent:
                    return False
            if not k.member(node):
                return False
        for _, b, c in self.sibling_pairs():
            prob = AmalgamationProblem.over_prefix(self.base, b, c)
            if find_amalgam(prob, k, propagate=propagate) is not None:
                return False
        return True


def build_refutation_tree(k: ForbiddenClass, base: Graph, refuter: Refuter, depth: int,
                          certify: bool = True) -> RefutationTree:
    """Grow the tree: the root is ``base``; node ``s`` has children ``refuter(A_s)``."""
    if not 0 <= depth <= 6:
        raise ValueError("depth must be between 0 and 6")
    tree = RefutationTree(k.name, base, depth, {"": base})
    frontier = [""]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            node = tree.nodes[s]
            b, c = refuter(node)
            _check_prefix(node, b)
            _check_prefix(node, c)
            if b.order == node.order or c.order == node.order:
                raise ValueError("refuter must return strict extensions")
            tree.nodes[s + "0"], tree.nodes[s + "1"] = b, c
            if certify:
                ok = find_amalgam(AmalgamationProblem.over_prefix(base, b, c), k) is None
                tree.certified[s] = ok
                if not ok:
                    raise ValueError(f"refuter pair at node {s!r} amalgamates over the base")
            nxt += [s + "0", s + "1"]
        frontier = nxt
    return tree
