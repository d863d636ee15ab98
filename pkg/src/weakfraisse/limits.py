"""Finite approximations of Fraïssé limits by extension chains.

A chain is a sequence of stages, each induced in the next on its own labels.
Every step realizes one pending one-point extension demand: a set ``U`` of
stage vertices together with the neighbours ``S`` in ``U`` of a new vertex.
The new stage is the free amalgam of the stage with that one-point extension,
after which the new vertex receives seeded random edges to the rest of the
stage (each kept only if the stage stays in the class).  Random edges make
most demands realized long before they are scheduled, as in the random
graph.
"""

from __future__ import annotations

import heapq
import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from .amalgamation import AmalgamationProblem, find_amalgam
from .classes import ForbiddenClass, linear_forests, parse_class
from .formats import from_graph6, to_graph6
from .graph import Graph, bits, disjoint_union, empty, linear

SCHEMA_VERSION = 1

__all__ = [
    "Demand",
    "ExtensionChain",
    "start_chain",
    "chain_step",
    "run_chain",
    "ExtensionReport",
    "extension_property_report",
    "universal_linear_forest",
    "save_chain",
    "load_chain",
    "resume",
    "diagnose",
]


@dataclass
class Demand:
    """Extend ``support`` (stage vertices) by a vertex adjacent exactly to ``neighbors`` within it."""

    ident: int
    support: tuple[int, ...]
    neighbors: tuple[int, ...]
    enqueued_at: int
    tie: float
    realized_at: int | None = None
    witness: int | None = None
    blocked: bool = False

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def priority(self) -> tuple:
        # smaller bases age faster; ties broken by the seeded draw
        return (self.enqueued_at + self.size, self.tie, self.ident)


@dataclass
class ExtensionChain:
    """The last stage plus the orders of all stages (stage ``i`` is the prefix of that order)."""

    class_name: str
    graph: Graph
    orders: list[int]
    demands: list[Demand]
    seed: int = 0
    max_base: int = 2
    edge_probability: float = 0.5
    _queue: list = field(default_factory=list, repr=False)

    @property
    def steps(self) -> int:
        return len(self.orders) - 1

    def stage(self, i: int) -> Graph:
        return self.graph.induced(range(self.orders[i]))

    @property
    def stages(self) -> list[Graph]:
        return [self.stage(i) for i in range(len(self.orders))]

    def stage_of_vertex(self, v: int) -> int:
        """Index of the first stage containing vertex ``v``."""
        for i, n in enumerate(self.orders):
            if v < n:
                return i
        if v < self.graph.order:
            # added by a witness jump during the step still in progress
            return len(self.orders)
        raise ValueError(f"vertex {v} not in the chain")

    def find_witness(self, d: Demand) -> int | None:
        """Least vertex outside the support realizing the demand in the current stage."""
        g = self.graph
        m = g.full_mask
        nb = set(d.neighbors)
        for v in d.support:
            m &= g.adj[v] if v in nb else ~g.adj[v] & ~(1 << v)
        if not m:
            return None
        return (m & -m).bit_length() - 1

    def refresh(self) -> None:
        """Record the realizing stage of every demand realized so far."""
        for d in self.demands:
            if d.realized_at is None:
                self._mark(d)

    def _mark(self, d: Demand) -> bool:
        w = self.find_witness(d)
        if w is None:
            return False
        d.witness = w
        d.realized_at = self.stage_of_vertex(max((w, *d.support)))
        return True

    def _rebuild_queue(self) -> None:
        self._queue = [(d.priority, d.ident) for d in self.demands if d.realized_at is None and not d.blocked]
        heapq.heapify(self._queue)


def _one_point(g: Graph, support: tuple[int, ...], neighbors: tuple[int, ...]) -> Graph:
    a = g.induced(support)
    pos = {v: i for i, v in enumerate(support)}
    return a.add_vertex([pos[v] for v in neighbors])


def _enqueue(chain: ExtensionChain, k: ForbiddenClass, supports, step: int) -> None:
    rng = random.Random(f"{chain.seed}:enqueue:{step}")
    for sup in supports:
        for r in range(len(sup) + 1):
            for nb in itertools.combinations(sup, r):
                if not k.member(_one_point(chain.graph, sup, nb)):
                    continue
                d = Demand(len(chain.demands), sup, nb, step, rng.random())
                chain.demands.append(d)
                heapq.heappush(chain._queue, (d.priority, d.ident))


def start_chain(k: ForbiddenClass, initial: Graph | None = None, seed: int = 0, max_base: int = 2,
                edge_probability: float = 0.5) -> ExtensionChain:
    initial = empty(0) if initial is None else initial
    if not k.member(initial):
        raise ValueError("initial stage must be in the class")
    if max_base < 0 or not 0 <= edge_probability <= 1:
        raise ValueError("bad chain parameters")
    chain = ExtensionChain(k.name, initial, [initial.order], [], seed, max_base, edge_probability)
    supports = [c for r in range(max_base + 1) for c in itertools.combinations(range(initial.order), r)]
    _enqueue(chain, k, supports, 0)
    return chain


def chain_step(chain: ExtensionChain, k: ForbiddenClass,
               witness: Callable[[Graph], Graph] | None = None) -> ExtensionChain:
    """Realize the next pending demand and append the new stage (mutates and returns ``chain``).

    ``witness``, if given, first replaces the stage by a supplied extension of it
    (used for witness-guided chains in classes without amalgamation).
    """
    if k.name != chain.class_name:
        raise ValueError("chain belongs to a different class")
    step = chain.steps + 1
    g = chain.graph
    if witness is not None:
        h = witness(g)
        if h.order < g.order or h.induced(range(g.order)) != g or not k.member(h):
            raise ValueError("witness must be an extension of the stage inside the class")
        chain.graph = g = h
    target = None
    while chain._queue:
        _, ident = heapq.heappop(chain._queue)
        d = chain.demands[ident]
        if d.realized_at is not None or d.blocked or chain._mark(d):
            continue
        target = d
        break
    if target is not None:
        b = _one_point(g, target.support, target.neighbors)
        prob = AmalgamationProblem(g.induced(target.support), g, b, target.support,
                                   tuple(range(len(target.support))))
        am = find_amalgam(prob, k, prune=False)
        if am is None:
            target.blocked = True
            g_new = None
        else:
            # one new vertex and an identity left map: the amalgam is the stage plus that vertex
            g_new = am.result
    else:
        g_new = None
    if g_new is None:
        g_new = g.add_vertex(())
        if not k.member(g_new):
            raise RuntimeError("class does not admit an isolated vertex; the chain cannot grow")
    w = g.order
    fixed = set(target.support) if target is not None and not target.blocked else set()
    rng = random.Random(f"{chain.seed}:edges:{step}")
    others = [v for v in range(w) if v not in fixed]
    rng.shuffle(others)
    for v in others:
        if rng.random() < chain.edge_probability and not g_new.has_edge(v, w):
            trial = g_new.add_edges([(v, w)])
            if k.member_after_vertex(trial, w):
                g_new = trial
    chain.graph = g_new
    chain.orders.append(g_new.order)
    if target is not None and not target.blocked:
        chain._mark(target)
    cap = chain.max_base
    supports = [tuple(sorted((*t, w))) for r in range(cap) for t in itertools.combinations(range(w), r)]
    _enqueue(chain, k, supports, step)
    return chain


def run_chain(k: ForbiddenClass, steps: int, seed: int = 0, max_base: int = 2,
              initial: Graph | None = None) -> ExtensionChain:
    chain = start_chain(k, initial, seed, max_base)
    for _ in range(steps):
        chain_step(chain, k)
    chain.refresh()
    return chain


@dataclass
class ExtensionReport:
    k_pairs: int
    total: int
    satisfied: int
    failures: list[tuple[tuple[int, ...], tuple[int, ...]]]

    @property
    def fraction(self) -> float:
        return 1.0 if self.total == 0 else self.satisfied / self.total


def extension_property_report(g: Graph, k_pairs: int, restrict_to=None, max_failures: int = 20) -> ExtensionReport:
    """For disjoint U, V with 1 <= |U| + |V| <= k_pairs (inside ``restrict_to`` if given),
    is some vertex outside U and V adjacent to all of U and none of V?"""
    verts = sorted(range(g.order) if restrict_to is None else restrict_to)
    full = g.full_mask
    total = sat = 0
    failures = []
    for size in range(1, k_pairs + 1):
        for uv in itertools.combinations(verts, size):
            for r in range(size + 1):
                for u in itertools.combinations(uv, r):
                    v = tuple(x for x in uv if x not in u)
                    m = full
                    for x in u:
                        m &= g.adj[x]
                    for x in v:
                        m &= ~g.adj[x]
                    for x in uv:
                        m &= ~(1 << x)
                    total += 1
                    if m:
                        sat += 1
                    elif len(failures) < max_failures:
                        failures.append((u, v))
    return ExtensionReport(k_pairs, total, sat, failures)


def universal_linear_forest(n_lines: int, radius: int) -> Graph:
    """Disjoint union of ``n_lines`` paths on ``2 * radius + 1`` vertices."""
    if n_lines < 1 or radius < 1:
        raise ValueError("n_lines and radius must be positive")
    if n_lines * (2 * radius + 1) > 4096:
        raise ValueError("order bound exceeded")
    g = disjoint_union(*[linear(2 * radius + 1)] * n_lines)
    if not linear_forests().member(g):
        raise RuntimeError("construction is not a linear forest")
    return g


# --------------------------------------------------------------- checkpoints

def save_chain(chain: ExtensionChain, directory) -> Path:
    """Write ``stages.g6`` (one line per stage) and ``ledger.json``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "stages.g6").write_text("".join(to_graph6(s) + "\n" for s in chain.stages))
    ledger = {
        "schema_version": SCHEMA_VERSION,
        "class": chain.class_name,
        "seed": chain.seed,
        "max_base": chain.max_base,
        "edge_probability": chain.edge_probability,
        "orders": chain.orders,
        "demands": [asdict(x) for x in chain.demands],
    }
    (d / "ledger.json").write_text(json.dumps(ledger, sort_keys=True) + "\n")
    return d


def load_chain(directory) -> ExtensionChain:
    d = Path(directory)
    ledger = json.loads((d / "ledger.json").read_text())
    if ledger.get("schema_version", 0) > SCHEMA_VERSION:
        raise ValueError("checkpoint written by a newer schema")
    lines = [x for x in (d / "stages.g6").read_text().splitlines() if x.strip()]
    if len(lines) != len(ledger["orders"]):
        raise ValueError("stage file does not match the ledger")
    graph = from_graph6(lines[-1])
    for line, n in zip(lines, ledger["orders"]):
        if graph.induced(range(n)) != from_graph6(line):
            raise ValueError("stages are not prefixes of the last stage")
    demands = []
    for x in ledger["demands"]:
        x["support"] = tuple(x["support"])
        x["neighbors"] = tuple(x["neighbors"])
        demands.append(Demand(**x))
    chain = ExtensionChain(ledger["class"], graph, list(ledger["orders"]), demands, ledger["seed"],
                           ledger["max_base"], ledger["edge_probability"])
    chain._rebuild_queue()
    return chain


def resume(directory, steps: int, k: ForbiddenClass | None = None) -> ExtensionChain:
    chain = load_chain(directory)
    k = parse_class(chain.class_name) if k is None else k
    for _ in range(steps):
        chain_step(chain, k)
    chain.refresh()
    save_chain(chain, directory)
    return chain


def diagnose(directory, k_pairs: int = 2) -> ExtensionReport:
    chain = load_chain(directory)
    return extension_property_report(chain.graph, k_pairs)
