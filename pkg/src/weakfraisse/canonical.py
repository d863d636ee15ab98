"""Exact canonical labelling by colour refinement plus individualisation.

The search explores the individualisation tree, keeps the leaf with the
largest relabelled adjacency, and prunes children that lie in a common orbit
of the automorphisms already discovered (only generators fixing the current
path pointwise are used, which keeps the pruning sound).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, bits

MAX_ORDER = 64

__all__ = ["MAX_ORDER", "CanonicalForm", "canonical_form", "automorphism_generators",
           "automorphism_group", "certificate"]


@dataclass(frozen=True)
class CanonicalForm:
    """``certificate`` identifies the isomorphism class; ``relabeling[v]`` is v's canonical label."""

    certificate: tuple
    relabeling: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] = ()

    def apply(self, g: Graph) -> Graph:
        return g.relabel(self.relabeling)


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        new: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {v: tuple((adj[v] & m).bit_count() for m in masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                new.append(c)
            else:
                for k in keys:
                    new.append([v for v in c if sig[v] == k])
        if len(new) == len(cells):
            return new
        cells = new


def _orbit_roots(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def _initial_cells(n: int, partition) -> list[list[int]]:
    if partition is None:
        return [list(range(n))] if n else []
    cells = [sorted(c) for c in partition if len(c)]
    flat = sorted(v for c in cells for v in c)
    if flat != list(range(n)):
        raise ValueError("partition must cover every vertex exactly once")
    return cells


def canonical_form(g: Graph, partition: Sequence[Sequence[int]] | None = None) -> CanonicalForm:
    """Canonical form of ``g``, optionally respecting an ordered vertex partition.

    With a partition, only isomorphisms that map each cell onto the cell of the
    same index are considered; the cell sizes become part of the certificate.
    """
    n = g.order
    if n > MAX_ORDER:
        raise ValueError(f"canonical_form supports order <= {MAX_ORDER}, got {n}")
    adj = g.adj
    cells0 = _initial_cells(n, partition)
    sizes = tuple(len(c) for c in cells0)
    best_code: list = [None]
    best_order: list = [None]
    first: list = [None, None]
    gens: list[tuple[int, ...]] = []

    def record(order, other):
        gamma = [0] * n
        for a, b in zip(order, other):
            gamma[a] = b
        gamma = tuple(gamma)
        if gamma != tuple(range(n)) and gamma not in gens:
            gens.append(gamma)

    def leaf(order: list[int]) -> None:
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for v in order:
            r = 0
            for u in bits(adj[v]):
                r |= 1 << pos[u]
            rows.append(r)
        code = tuple(rows)
        if first[0] is None:
            first[0], first[1] = code, order
        elif code == first[0]:
            record(order, first[1])
        if best_code[0] is None or code > best_code[0]:
            best_code[0] = code
            best_order[0] = order
        elif code == best_code[0] and best_order[0] is not first[1]:
            record(order, best_order[0])

    def rec(cells: list[list[int]], path: list[int]) -> None:
        cells = _refine(adj, cells)
        if len(cells) == n:
            leaf([c[0] for c in cells])
            return
        idx = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: (len(cells[i]), i))
        cell = cells[idx]
        tried: list[int] = []
        for v in cell:
            if tried:
                fixing = [gm for gm in gens if all(gm[p] == p for p in path)]
                if fixing:
                    roots = _orbit_roots(n, fixing)
                    if any(roots[v] == roots[t] for t in tried):
                        continue
            tried.append(v)
            rest = [u for u in cell if u != v]
            rec(cells[:idx] + [[v], rest] + cells[idx + 1:], path + [v])

    if n:
        rec(cells0, [])
        order = best_order[0]
        relabeling = [0] * n
        for i, v in enumerate(order):
            relabeling[v] = i
        code = best_code[0]
    else:
        relabeling, code = [], ()
    return CanonicalForm((n, sizes, code), tuple(relabeling), tuple(gens))


def certificate(g: Graph, partition=None) -> tuple:
    return canonical_form(g, partition).certificate


def automorphism_generators(g: Graph, partition=None) -> list[tuple[int, ...]]:
    """Generators of the automorphism group (respecting ``partition`` if given)."""
    return list(canonical_form(g, partition).generators)


def automorphism_group(g: Graph, partition=None, limit: int = 100_000) -> list[tuple[int, ...]]:
    """All automorphisms, by closing the generators; raises if the group exceeds ``limit``."""
    identity = tuple(range(g.order))
    gens = automorphism_generators(g, partition)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                c = tuple(s[a[v]] for v in range(g.order))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if len(seen) > limit:
                        raise ValueError("automorphism group too large to list")
        frontier = nxt
    return sorted(seen)
