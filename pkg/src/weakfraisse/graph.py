"""Finite simple graphs on vertices ``0..n-1`` with bitset adjacency.

Every algorithm in the package runs on :class:`Graph`.  Adjacency rows are
Python ints used as bitsets, so common-neighbourhood queries are a single
``&`` and a ``bit_count``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Graph",
    "VertexMap",
    "INFINITE",
    "bits",
    "is_embedding",
    "is_weak_embedding",
    "find_weak_embedding",
    "find_embedding",
    "iter_embeddings",
    "diameter",
    "distances_from",
    "dominating_vertex",
    "edges_not_in_triangle",
    "strongly_regular_params",
    "empty",
    "cycle",
    "complete",
    "linear",
    "path",
    "star",
    "bowtie",
    "windmill33",
    "near_path",
    "subdivision_of",
    "petersen",
    "disjoint_union",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitset.  ``marks`` names
    distinguished vertices (e.g. the windmill centre ``p``); marks do not take
    part in equality or hashing.
    """

    order: int
    adj: tuple[int, ...]
    marks: Mapping[str, int] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.order < 0 or len(self.adj) != self.order:
            raise ValueError("adjacency rows must match the order")
        full = (1 << self.order) - 1
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        for name, v in self.marks.items():
            if not 0 <= v < self.order:
                raise ValueError(f"mark {name!r} points outside the graph")
        object.__setattr__(self, "marks", MappingProxyType(dict(self.marks)))

    def __reduce__(self):
        return (Graph, (self.order, self.adj, dict(self.marks)))

    @classmethod
    def _trusted(cls, order: int, adj: tuple[int, ...], marks: Mapping[str, int]) -> Graph:
        # skips validation; only for rows built symmetric by construction
        g = object.__new__(cls)
        object.__setattr__(g, "order", order)
        object.__setattr__(g, "adj", adj)
        object.__setattr__(g, "marks", marks if isinstance(marks, MappingProxyType)
                           else MappingProxyType(dict(marks)))
        return g

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]], marks=None) -> Graph:
        adj = [0] * order
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge {(u, v)} outside 0..{order - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(order, tuple(adj), marks or {})

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.edges()})"

    @property
    def vertices(self) -> range:
        return range(self.order)

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def with_marks(self, marks: Mapping[str, int]) -> Graph:
        return Graph(self.order, self.adj, marks)

    def add_vertex(self, neighbors: Iterable[int] = ()) -> Graph:
        """Return a copy with one new vertex ``order`` joined to ``neighbors``."""
        new = self.order
        mask = 0
        for u in neighbors:
            mask |= 1 << u
        if mask >> new:
            raise ValueError("neighbour outside the graph")
        adj = [row | (1 << new) if mask >> u & 1 else row for u, row in enumerate(self.adj)]
        adj.append(mask)
        return Graph._trusted(new + 1, tuple(adj), self.marks)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = list(self.adj)
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge {(u, v)} outside the graph")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph._trusted(self.order, tuple(adj), self.marks)

    def remove_edge(self, u: int, v: int) -> Graph:
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph._trusted(self.order, tuple(adj), self.marks)

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph on ``vertices``; vertex ``vertices[i]`` becomes ``i``."""
        if isinstance(vertices, range) and vertices.start == 0 and vertices.step == 1 \
                and vertices.stop <= self.order:
            n = vertices.stop
            mask = (1 << n) - 1
            marks = {k: v for k, v in self.marks.items() if v < n}
            return Graph._trusted(n, tuple(row & mask for row in self.adj[:n]), marks)
        pos = {v: i for i, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise ValueError("repeated vertex")
        if any(not 0 <= v < self.order for v in pos):
            raise ValueError("vertex outside the graph")
        adj = []
        for v in vertices:
            row = 0
            for u in bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            adj.append(row)
        marks = {k: pos[v] for k, v in self.marks.items() if v in pos}
        return Graph._trusted(len(vertices), tuple(adj), marks)

    def delete_vertex(self, v: int) -> Graph:
        return self.induced([u for u in range(self.order) if u != v])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Relabel vertex ``v`` as ``perm[v]``."""
        if sorted(perm) != list(range(self.order)):
            raise ValueError("not a permutation")
        adj = [0] * self.order
        for v in range(self.order):
            row = 0
            for u in bits(self.adj[v]):
                row |= 1 << perm[u]
            adj[perm[v]] = row
        marks = {k: perm[v] for k, v in self.marks.items()}
        return Graph._trusted(self.order, tuple(adj), marks)

    def is_connected(self) -> bool:
        if self.order == 0:
            return True
        return distances_from(self, 0).count(None) == 0

    def components(self) -> list[list[int]]:
        seen = 0
        comps = []
        for s in range(self.order):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(list(bits(comp)))
        return comps


def disjoint_union(*graphs: Graph) -> Graph:
    adj: list[int] = []
    for g in graphs:
        shift = len(adj)
        adj.extend(row << shift for row in g.adj)
    return Graph(len(adj), tuple(adj))


@dataclass(frozen=True)
class VertexMap:
    """Injective assignment ``source -> target``; ``assignment[v]`` is the image of ``v``."""

    source: Graph
    target: Graph
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != self.source.order:
            raise ValueError("assignment must cover every source vertex")
        if len(set(self.assignment)) != len(self.assignment):
            raise ValueError("assignment is not injective")
        if any(not 0 <= w < self.target.order for w in self.assignment):
            raise ValueError("image outside the target graph")

    def __call__(self, v: int) -> int:
        return self.assignment[v]

    def compose(self, after: VertexMap) -> VertexMap:
        """``after ∘ self``."""
        if after.source != self.target:
            raise ValueError("maps do not compose")
        return VertexMap(self.source, after.target, tuple(after.assignment[w] for w in self.assignment))


def _check(m: VertexMap, induced: bool) -> bool:
    src, tgt, f = m.source, m.target, m.assignment
    for u in range(src.order):
        row = tgt.adj[f[u]]
        for v in range(u + 1, src.order):
            e = src.adj[u] >> v & 1
            if e and not row >> f[v] & 1:
                return False
            if induced and not e and row >> f[v] & 1:
                return False
    return True


def is_embedding(m: VertexMap) -> bool:
    """Edges and non-edges are both preserved."""
    return _check(m, induced=True)


def is_weak_embedding(m: VertexMap) -> bool:
    """Edges are preserved; non-edges may map to edges."""
    return _check(m, induced=False)


def _search_order(pattern: Graph, fixed: Mapping[int, int]) -> list[int]:
    # descending degree, then connectivity to already placed vertices
    placed = 0
    for v in fixed:
        placed |= 1 << v
    order = []
    remaining = [v for v in range(pattern.order) if v not in fixed]
    while remaining:
        best = max(remaining, key=lambda v: ((pattern.adj[v] & placed).bit_count(), pattern.degree(v), -v))
        order.append(best)
        remaining.remove(best)
        placed |= 1 << best
    return order


def iter_embeddings(pattern: Graph, host: Graph, induced: bool = False,
                    fixed: Mapping[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every (weak or induced) embedding as an assignment tuple.

    ``fixed`` pre-assigns some pattern vertices.  The enumeration order is
    deterministic.
    """
    fixed = dict(fixed or {})
    n = pattern.order
    if n > host.order:
        return
    if len(set(fixed.values())) != len(fixed):
        return
    assign = [-1] * n
    used = 0
    for v, w in fixed.items():
        assign[v] = w
        used |= 1 << w
    # the fixed part has to be consistent on its own
    for u, v in itertools.combinations(fixed, 2):
        e, h = pattern.has_edge(u, v), host.has_edge(fixed[u], fixed[v])
        if (e and not h) or (induced and h and not e):
            return
    order = _search_order(pattern, fixed)
    hdeg = host.degrees()
    pdeg = pattern.degrees()
    full = host.full_mask

    def candidates(v: int) -> int:
        mask = full & ~used
        for u in bits(pattern.adj[v]):
            if assign[u] >= 0:
                mask &= host.adj[assign[u]]
        if induced:
            non = ((1 << n) - 1) & ~pattern.adj[v] & ~(1 << v)
            for u in bits(non):
                if assign[u] >= 0:
                    mask &= ~host.adj[assign[u]]
        return mask

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        nonlocal used
        if i == len(order):
            yield tuple(assign)
            return
        v = order[i]
        for w in bits(candidates(v)):
            if hdeg[w] < pdeg[v]:
                continue
            assign[v] = w
            used |= 1 << w
            yield from rec(i + 1)
            used &= ~(1 << w)
            assign[v] = -1

    yield from rec(0)


def find_weak_embedding(pattern: Graph, host: Graph) -> VertexMap | None:
    """First injective homomorphism ``pattern -> host`` in search order, or None."""
    for assignment in iter_embeddings(pattern, host, induced=False):
        return VertexMap(pattern, host, assignment)
    return None


def find_embedding(pattern: Graph, host: Graph) -> VertexMap | None:
    """First induced embedding ``pattern -> host``, or None."""
    for assignment in iter_embeddings(pattern, host, induced=True):
        return VertexMap(pattern, host, assignment)
    return None


class _Infinite:
    """Marker for the diameter of a disconnected graph."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __gt__(self, other):
        return not isinstance(other, _Infinite)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinite)


INFINITE = _Infinite()


def distances_from(g: Graph, s: int) -> list[int | None]:
    """BFS distances from ``s``; None for unreachable vertices."""
    dist: list[int | None] = [None] * g.order
    dist[s] = 0
    seen = frontier = 1 << s
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        seen |= frontier
        for v in bits(frontier):
            dist[v] = d
    return dist


def diameter(g: Graph):
    """Largest distance between two vertices, or :data:`INFINITE` if disconnected."""
    best = 0
    for s in range(g.order):
        dist = distances_from(g, s)
        if None in dist:
            return INFINITE
        best = max(best, max(dist))
    return best


def dominating_vertex(g: Graph) -> int | None:
    for v in range(g.order):
        if g.adj[v] | (1 << v) == g.full_mask:
            return v
    return None


def edges_not_in_triangle(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in g.edges() if not g.adj[u] & g.adj[v]]


def strongly_regular_params(g: Graph) -> tuple[int, int, int] | None:
    """``(k, lambda, mu)`` if ``g`` is strongly regular, else None.

    Requires ``g`` connected, neither complete nor edgeless.
    """
    if g.order == 0 or not g.is_connected():
        raise ValueError("strongly_regular_params needs a connected graph")
    if g.edge_count == 0 or g.edge_count == g.order * (g.order - 1) // 2:
        raise ValueError("strongly_regular_params needs a non-complete graph with edges")
    degs = set(g.degrees())
    if len(degs) != 1:
        return None
    lam = mu = None
    for u, v in itertools.combinations(range(g.order), 2):
        c = (g.adj[u] & g.adj[v]).bit_count()
        if g.has_edge(u, v):
            if lam is None:
                lam = c
            elif lam != c:
                return None
        else:
            if mu is None:
                mu = c
            elif mu != c:
                return None
    return degs.pop(), lam, mu


# ---------------------------------------------------------------- constructors

def empty(n: int) -> Graph:
    if n < 0:
        raise ValueError("order must be nonnegative")
    return Graph(n, (0,) * n)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 0:
        raise ValueError("order must be nonnegative")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def linear(n: int) -> Graph:
    """Path on ``n`` vertices: ``k ~ l`` iff ``|k - l| = 1``."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def path(length: int) -> Graph:
    """Path with ``length`` edges (``length + 1`` vertices)."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    return linear(length + 1)


def star(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], {"center": 0})


def bowtie() -> Graph:
    """Two triangles sharing ``v`` = 0; wings ``v1 v2`` = 1 2 and ``v3 v4`` = 3 4."""
    edges = [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]
    return Graph.from_edges(5, edges, {"v": 0, "v1": 1, "v2": 2, "v3": 3, "v4": 4})


def windmill33() -> Graph:
    """Three triangles sharing the centre ``p`` = 0."""
    edges = []
    for i in (1, 3, 5):
        edges += [(0, i), (0, i + 1), (i, i + 1)]
    return Graph.from_edges(7, edges, {"p": 0})


def near_path(path_len: int, attach_at: int | None = None) -> Graph:
    """Path ``0..path_len`` plus, optionally, a pendant vertex hung on ``attach_at``."""
    if path_len < 0:
        raise ValueError("path length must be nonnegative")
    g = path(path_len)
    if attach_at is None:
        return g
    if not 0 <= attach_at <= path_len:
        raise ValueError("attachment point must lie on the path")
    return g.add_vertex([attach_at])


def subdivision_of(n: int, counts: Sequence[int]) -> Graph:
    """``K_n`` with edge number ``i`` (lexicographic order) subdivided ``counts[i]`` times."""
    pairs = list(itertools.combinations(range(n), 2))
    if len(counts) != len(pairs) or any(c < 0 for c in counts):
        raise ValueError(f"need {len(pairs)} nonnegative subdivision counts")
    edges = []
    nxt = n
    for (u, v), c in zip(pairs, counts):
        chain = [u] + list(range(nxt, nxt + c)) + [v]
        nxt += c
        edges += list(zip(chain, chain[1:]))
    return Graph.from_edges(nxt, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
