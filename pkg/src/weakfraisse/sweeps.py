"""Exhaustive sweeps over small catalogues."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .classes import c4_free
from .constructions import check_diam2_proposition, determined_closure
from .enumeration import all_graphs, all_graphs_in_class
from .graph import Graph, iter_embeddings

__all__ = ["diam2_order", "diam2_sweep", "RigidityReport", "rigidity_sweep"]


def diam2_order(n: int) -> tuple[int, list[Graph], dict[str, list[Graph]]]:
    """Check every graph of order ``n``: returns (count, exceptions, graphs meeting the hypotheses by branch)."""
    exceptions: list[Graph] = []
    branches: dict[str, list[Graph]] = {}
    cat = all_graphs(n)
    for g in cat:
        v = check_diam2_proposition(g)
        if not v.hypotheses_met:
            continue
        branches.setdefault(v.branch, []).append(g)
        if not v.holds:
            exceptions.append(g)
    return len(cat), exceptions, branches


def diam2_sweep(max_order: int, jobs: int = 1):
    """Run :func:`diam2_order` for orders 1..max_order, merged in order."""
    orders = list(range(1, max_order + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(diam2_order, orders))
    else:
        results = [diam2_order(n) for n in orders]
    counts, exceptions, branches = {}, [], {}
    for n, (count, exc, br) in zip(orders, results):
        counts[n] = count
        exceptions += exc
        for b, gs in br.items():
            branches.setdefault(b, []).extend(gs)
    return counts, exceptions, branches


@dataclass
class RigidityReport:
    max_e: int
    max_d: int
    pairs: int = 0
    embeddings: int = 0
    checked_bases: int = 0
    exceptions: list = field(default_factory=list)
    sampled: list | None = None

    @property
    def ok(self) -> bool:
        return not self.exceptions


def rigidity_sweep(max_e: int = 6, max_d: int = 8, sample: int | None = None, seed: int = 0) -> RigidityReport:
    """Two embeddings E -> D (D C4-free) agreeing on a base agree on its determined closure.

    Every C4-free E of order <= ``max_e``, every base subset of E whose
    closure is strictly larger, and every C4-free D of order <= ``max_d`` are
    checked.  ``sample`` restricts each order of D to a seeded random subset of
    that size (recorded in the report).
    """
    k = c4_free()
    es = [e for n in range(1, max_e + 1) for e in all_graphs_in_class(k, n)]
    ds = []
    rng = random.Random(seed)
    sampled = [] if sample is not None else None
    for n in range(1, max_d + 1):
        cat = list(all_graphs_in_class(k, n))
        if sample is not None and len(cat) > sample:
            idx = sorted(rng.sample(range(len(cat)), sample))
            sampled.append((n, idx))
            cat = [cat[i] for i in idx]
        ds += cat
    report = RigidityReport(max_e, max_d, sampled=sampled)
    for e in es:
        bases = []
        for mask in range(1 << e.order):
            base = [v for v in range(e.order) if mask >> v & 1]
            closure = determined_closure(e, base).members
            if len(closure) > len(base):
                bases.append((tuple(base), tuple(sorted(closure))))
        if not bases:
            continue
        for d in ds:
            if d.order < e.order:
                continue
            report.pairs += 1
            seen = [dict() for _ in bases]
            for f in iter_embeddings(e, d, induced=True):
                report.embeddings += 1
                for i, (base, closure) in enumerate(bases):
                    key = tuple(f[v] for v in base)
                    val = tuple(f[v] for v in closure)
                    prev = seen[i].setdefault(key, val)
                    if prev != val:
                        report.exceptions.append((e, d, base, prev, val))
            report.checked_bases += len(bases)
    return report
