"""Hereditary graph classes given by forbidden weak subgraphs.

A :class:`ForbiddenClass` bundles a finite list of forbidden graphs with an
optional structural predicate.  The predicate-backed classes (circumference,
odd girth, linear forests, topological K4) stand in for infinite forbidden
families.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

from . import graph as G
from .graph import Graph, bits, find_weak_embedding

__all__ = [
    "ForbiddenClass",
    "member",
    "has_c4",
    "neighborhood_matching_at_least",
    "has_cycle_at_least",
    "has_cycle_of_length",
    "circumference",
    "is_linear_forest",
    "has_k4_subdivision",
    "all_graphs",
    "c4_free",
    "triangle_free",
    "has_triangle",
    "windmill_free",
    "bowtie_free",
    "cocycles",
    "odd_cycles",
    "path_free",
    "near_path_free",
    "top_k4_free",
    "hom_closed",
    "finite_family",
    "linear_forests",
    "class_catalog",
    "parse_class",
    "HereditaryReport",
    "JepReport",
    "check_hereditary",
    "check_jep",
]


@dataclass(frozen=True, eq=False)
class ForbiddenClass:
    """Graphs omitting every graph of ``finite_forbidden`` and satisfying ``predicate``.

    ``monotone`` records that the class is closed under deleting edges (true for
    every weak-omission class).  ``fast`` is an optional drop-in replacement
    for the forbidden-list test, used for speed.
    """

    name: str
    finite_forbidden: tuple[Graph, ...] = ()
    predicate: Callable[[Graph], bool] | None = None
    description: str = ""
    monotone: bool = True
    fast: Callable[[Graph], bool] | None = field(default=None, repr=False)
    vertex_test: Callable[[Graph, int], bool] | None = field(default=None, repr=False)

    def member(self, g: Graph) -> bool:
        if self.fast is not None:
            if not self.fast(g):
                return False
        elif not self.omits_forbidden(g):
            return False
        return self.predicate is None or self.predicate(g)

    __contains__ = member

    def member_after_vertex(self, g: Graph, w: int) -> bool:
        """Membership of ``g`` given that ``g`` minus vertex ``w`` is a member.

        Classes may supply a local test; the default re-checks all of ``g``.
        """
        if self.vertex_test is not None:
            return self.vertex_test(g, w)
        return self.member(g)

    def omits_forbidden(self, g: Graph) -> bool:
        return all(find_weak_embedding(f, g) is None for f in self.finite_forbidden)

    @property
    def pure_omission(self) -> bool:
        return self.predicate is None

    @cached_property
    def forbids_c4(self) -> bool:
        """True when every member is C4-free (so C4 unit propagation is sound)."""
        return self.monotone and not self.member(G.cycle(4))

    @cached_property
    def connected_forbidden(self) -> bool:
        return all(f.is_connected() for f in self.finite_forbidden)

    def __repr__(self):
        return f"ForbiddenClass({self.name!r})"


def member(k: ForbiddenClass, g: Graph) -> bool:
    return k.member(g)


# ------------------------------------------------------------ fast structural tests

def has_c4(g: Graph) -> bool:
    """Some pair of vertices has two common neighbours."""
    adj = g.adj
    for u in range(g.order):
        for v in range(u + 1, g.order):
            if (adj[u] & adj[v]).bit_count() >= 2:
                return True
    return False


def _matching_at_least(adj: Sequence[int], mask: int, k: int) -> bool:
    if k <= 0:
        return True
    if mask.bit_count() < 2 * k:
        return False
    u = (mask & -mask).bit_length() - 1
    rest = mask & ~(1 << u)
    if _matching_at_least(adj, rest, k):
        return True
    for w in bits(adj[u] & rest):
        if _matching_at_least(adj, rest & ~(1 << w), k - 1):
            return True
    return False


def neighborhood_matching_at_least(g: Graph, v: int, k: int) -> bool:
    """The neighbourhood of ``v`` contains ``k`` vertex-disjoint edges."""
    return _matching_at_least(g.adj, g.adj[v], k)


def _cone_free(k: int) -> Callable[[Graph], bool]:
    # a cone over k disjoint edges sits inside N[v] of its apex v
    def test(g: Graph) -> bool:
        return not any(neighborhood_matching_at_least(g, v, k) for v in range(g.order))
    return test


def _cycle_search(g: Graph, accept: Callable[[int], bool], max_len: int | None) -> bool:
    """DFS over simple cycles, each rooted at its smallest vertex."""
    adj = g.adj
    n = g.order
    limit = n if max_len is None else min(max_len, n)
    for s in range(n):
        allowed = g.full_mask & ~((1 << (s + 1)) - 1)
        if (adj[s] & allowed).bit_count() < 2:
            continue

        def dfs(v: int, used: int, length: int) -> bool:
            if length >= 3 and adj[v] >> s & 1 and accept(length):
                return True
            if length == limit:
                return False
            for w in bits(adj[v] & allowed & ~used):
                if dfs(w, used | 1 << w, length + 1):
                    return True
            return False

        if dfs(s, 1 << s, 1):
            return True
    return False


def has_cycle_at_least(g: Graph, m: int) -> bool:
    return _cycle_search(g, lambda length: length >= m, None)


def has_cycle_of_length(g: Graph, m: int) -> bool:
    return _cycle_search(g, lambda length: length == m, m)


def circumference(g: Graph) -> int:
    """Length of a longest cycle, 0 for forests."""
    for m in range(g.order, 2, -1):
        if has_cycle_of_length(g, m):
            return m
    return 0


def is_linear_forest(g: Graph) -> bool:
    if any(d > 2 for d in g.degrees()):
        return False
    return g.edge_count == g.order - len(g.components())


def has_k4_subdivision(g: Graph) -> bool:
    """Series-parallel reduction: delete vertices of degree <= 1, suppress degree 2.

    A simple graph has no K4 topological minor iff the reduction empties it.
    """
    nbrs = {v: set(g.neighbors(v)) for v in range(g.order)}
    changed = True
    while changed:
        changed = False
        for v in list(nbrs):
            d = len(nbrs[v])
            if d <= 1:
                for u in nbrs[v]:
                    nbrs[u].discard(v)
                del nbrs[v]
                changed = True
            elif d == 2:
                a, b = nbrs[v]
                nbrs[a].discard(v)
                nbrs[b].discard(v)
                nbrs[a].add(b)
                nbrs[b].add(a)
                del nbrs[v]
                changed = True
    return bool(nbrs)


# ------------------------------------------------------------------- catalogue

@functools.cache
def all_graphs() -> ForbiddenClass:
    return ForbiddenClass("all", description="all finite graphs", vertex_test=lambda g, w: True)


@functools.cache
def c4_free() -> ForbiddenClass:
    return ForbiddenClass("c4free", (G.cycle(4),), description="no weak C4",
                          fast=lambda g: not has_c4(g), vertex_test=_c4_free_at)


def _c4_free_at(g: Graph, w: int) -> bool:
    # a 4-cycle through w has its opposite corner adjacent to two neighbours of w
    nbr = g.adj[w]
    return not any((g.adj[x] & nbr).bit_count() >= 2 for x in range(g.order) if x != w)


@functools.cache
def triangle_free() -> ForbiddenClass:
    return ForbiddenClass("c3free", (G.cycle(3),), description="no triangle",
                          fast=lambda g: not has_triangle(g),
                          vertex_test=lambda g, w: not any(g.adj[v] & g.adj[w] for v in bits(g.adj[w])))


def has_triangle(g: Graph) -> bool:
    return any(g.adj[u] & g.adj[v] for u, v in g.edges())


@functools.cache
def windmill_free() -> ForbiddenClass:
    return ForbiddenClass("windmill_free", (G.windmill33(),), description="no weak Wd(3,3)",
                          fast=_cone_free(3))


@functools.cache
def bowtie_free() -> ForbiddenClass:
    return ForbiddenClass("bowtie_free", (G.bowtie(),), description="no weak bowtie",
                          fast=_cone_free(2))


@functools.cache
def cocycles(n: int) -> ForbiddenClass:
    """Omit every cycle of length >= n, i.e. circumference < n."""
    if n < 3:
        raise ValueError("cocycles(n) needs n >= 3")
    return ForbiddenClass(f"cocycles:{n}", predicate=lambda g: not has_cycle_at_least(g, n),
                          description=f"no cycle of length >= {n}")


@functools.cache
def odd_cycles(n: int) -> ForbiddenClass:
    """Omit C3, C5, ..., C_{2n+1}."""
    if n < 1:
        raise ValueError("odd_cycles(n) needs n >= 1")
    lengths = range(3, 2 * n + 2, 2)
    return ForbiddenClass(f"odd_cycles:{n}",
                          predicate=lambda g: not any(has_cycle_of_length(g, m) for m in lengths),
                          description=f"no odd cycle of length <= {2 * n + 1}")


@functools.cache
def path_free(n: int) -> ForbiddenClass:
    """Omit the path with ``n`` edges."""
    if n < 1:
        raise ValueError("path_free(n) needs n >= 1")
    return ForbiddenClass(f"path_free:{n}", (G.path(n),), description=f"no weak P_{n}")


@functools.cache
def near_path_free(path_len: int, attach_at: int | None = None) -> ForbiddenClass:
    tree = G.near_path(path_len, attach_at)
    tag = f"{path_len}" if attach_at is None else f"{path_len},{attach_at}"
    return ForbiddenClass(f"near_path:{tag}", (tree,), description="no weak near path")


@functools.cache
def top_k4_free() -> ForbiddenClass:
    return ForbiddenClass("top_k4_free", predicate=lambda g: not has_k4_subdivision(g),
                          description="no subdivision of K4")


def hom_closed(graphs: Sequence[Graph], name: str = "hom_closed") -> ForbiddenClass:
    """Omission class of an explicit finite family; closure of the family is not verified."""
    return ForbiddenClass(name, tuple(graphs), description="explicit finite family")


finite_family = hom_closed


@functools.cache
def linear_forests() -> ForbiddenClass:
    return ForbiddenClass("linear_forests", predicate=is_linear_forest,
                          description="disjoint unions of paths")


def class_catalog() -> list[ForbiddenClass]:
    return [all_graphs(), c4_free(), triangle_free(), windmill_free(), bowtie_free(), cocycles(5), odd_cycles(2),
            path_free(3), near_path_free(3, 1), top_k4_free(), hom_closed([G.cycle(3)]),
            linear_forests()]


_SIMPLE = {
    "all": all_graphs,
    "c4free": c4_free,
    "c3free": triangle_free,
    "windmill_free": windmill_free,
    "H": windmill_free,
    "bowtie_free": bowtie_free,
    "top_k4_free": top_k4_free,
    "linear_forests": linear_forests,
}


def parse_class(spec: str) -> ForbiddenClass:
    """Build a class from an identifier such as ``c4free`` or ``cocycles:5``."""
    name, _, arg = spec.partition(":")
    try:
        if name in _SIMPLE and not arg:
            return _SIMPLE[name]()
        if name == "cocycles":
            return cocycles(int(arg))
        if name == "odd_cycles":
            return odd_cycles(int(arg))
        if name == "path_free":
            return path_free(int(arg))
        if name == "near_path":
            parts = [int(x) for x in arg.split(",")]
            return near_path_free(parts[0], parts[1] if len(parts) > 1 else None)
        if name in ("hom_closed", "family"):
            from .formats import read_graph6_lines
            return hom_closed(read_graph6_lines(arg), name=f"{name}:{Path(arg).name}")
    except (ValueError, IndexError, OSError) as exc:
        raise ValueError(f"bad class spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown class {spec!r}")


# ------------------------------------------------------------------- HP / JEP

@dataclass
class HereditaryReport:
    class_name: str
    n: int
    checked: int = 0
    violations: list[tuple[Graph, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class JepReport:
    class_name: str
    n: int
    method: str
    pairs: int = 0
    failures: list[tuple[Graph, Graph]] = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures


def _members_up_to(k: ForbiddenClass, n: int, start: int = 1):
    from .enumeration import all_graphs as catalog
    for m in range(start, n + 1):
        for g in catalog(m).members:
            if k.member(g):
                yield g


def check_hereditary(k: ForbiddenClass, n: int) -> HereditaryReport:
    """Every one-vertex-deleted subgraph of a member of order <= n is a member."""
    if n > 8:
        raise ValueError("check_hereditary supports n <= 8")
    report = HereditaryReport(k.name, n)
    for g in _members_up_to(k, n, start=2):
        report.checked += 1
        for v in range(g.order):
            if not k.member(g.delete_vertex(v)):
                report.violations.append((g, v))
    return report


def check_jep(k: ForbiddenClass, n: int) -> JepReport:
    """Joint embedding for all member pairs of order <= n.

    Disjoint unions settle JEP when every forbidden graph is connected;
    otherwise each pair goes through an amalgam search over the empty graph.
    """
    if n > 6:
        raise ValueError("check_jep supports n <= 6")
    members = list(_members_up_to(k, n))
    if k.connected_forbidden and k.monotone:
        report = JepReport(k.name, n, "disjoint_union")
    else:
        report = JepReport(k.name, n, "amalgam_search",
                           note="disjoint-union argument inapplicable (disconnected forbidden graph)"
                           if not k.connected_forbidden else "non-monotone class")
    from .amalgamation import AmalgamationProblem, find_amalgam
    for a, b in itertools.combinations_with_replacement(members, 2):
        report.pairs += 1
        if report.method == "disjoint_union":
            if not k.member(G.disjoint_union(a, b)):
                report.failures.append((a, b))
        else:
            prob = AmalgamationProblem(G.empty(0), a, b, (), ())
            if find_amalgam(prob, k) is None:
                report.failures.append((a, b))
    return report
