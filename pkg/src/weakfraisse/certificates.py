"""JSON certificate bundles and their replay.

Every bundle is ``{"schema_version", "kind", "class", "payload"}`` with graphs
stored as graph6 strings.  :func:`replay` re-derives the stored claim from
scratch: refutations are re-certified by exhaustive amalgam search, verified
sweeps are re-run at the recorded bounds, constructions are rebuilt and
compared byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .amalgamation import (AmalgamationProblem, Amalgam, ApReport, RefutationTree, WitnessCertificate,
                           check_ap, check_cap_witness, find_amalgam, verify_wap_witness)
from .classes import ForbiddenClass, parse_class, windmill_free
from .constructions import (C4Gadget, Diam2Verdict, WindmillReplay, WindmillWitness, build_wap_witness,
                            c4_nonwap_gadgets, windmill_free_amalgam_replay)
from .formats import from_graph6, to_graph6
from .graph import Graph

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "bundle", "dumps", "write_bundle", "read_bundle", "ReplayResult", "replay",
           "amalgam_bundle", "witness_bundle", "ap_bundle", "gadget_bundle", "windmill_bundle",
           "windmill_replay_bundle", "tree_bundle", "diam2_bundle"]


def _g6(g: Graph | None) -> str | None:
    return None if g is None else to_graph6(g)


def _graph(s: str | None) -> Graph | None:
    return None if s is None else from_graph6(s)


def bundle(kind: str, class_name: str, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "class": class_name, "payload": payload}


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_bundle(obj: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def read_bundle(path) -> dict:
    return json.loads(Path(path).read_text())


# -------------------------------------------------------------------- encoders

def amalgam_bundle(p: AmalgamationProblem, k: ForbiddenClass, result: Amalgam | None,
                   allow_cross_edges: bool = False) -> dict:
    payload = {
        "base": _g6(p.base), "left": _g6(p.left), "right": _g6(p.right),
        "left_embedding": list(p.left_embedding), "right_embedding": list(p.right_embedding),
        "allow_cross_edges": allow_cross_edges,
        "result": None if result is None else {
            "graph": _g6(result.result), "left_map": list(result.left_map), "right_map": list(result.right_map)},
    }
    return bundle("amalgam", k.name, payload)


def witness_bundle(cert: WitnessCertificate) -> dict:
    ce = cert.counterexample
    payload = {
        "mode": cert.mode, "verdict": cert.kind, "base": _g6(cert.base), "witness": _g6(cert.witness),
        "bounds": cert.bounds, "pairs_checked": cert.pairs_checked,
        "counterexample": None if ce is None else [_g6(g) for g in ce],
    }
    return bundle("witness", cert.class_name, payload)


def ap_bundle(report: ApReport) -> dict:
    payload = {"n": report.n, "problems": report.problems,
               "failures": [[_g6(g) for g in t] for t in report.failures]}
    return bundle("ap_sweep", report.class_name, payload)


def gadget_bundle(g: C4Gadget) -> dict:
    payload = {"witness": _g6(g.witness), "E": _g6(g.E), "B": _g6(g.B), "C": _g6(g.C),
               "named_vertices": g.named_vertices(), "augmented_edges": [list(e) for e in g.augmented_edges]}
    return bundle("c4_gadget", "c4free", payload)


def windmill_bundle(w: WindmillWitness) -> dict:
    payload = {"base": _g6(w.base), "witness": _g6(w.graph),
               "anchors": {str(a): list(v) for a, v in sorted(w.anchors.anchors.items())},
               "wing_partners": list(w.wing_partners), "named_vertices": w.named_vertices()}
    return bundle("windmill_witness", windmill_free().name, payload)


def windmill_replay_bundle(r: WindmillReplay) -> dict:
    payload = {"base": _g6(r.base), "witness": _g6(r.witness), "extra": r.extra, "glue": r.glue,
               "centres": list(r.centres),
               "pairs_checked": r.pairs_checked,
               "local_extensions": {str(a): n for a, n in sorted(r.local_extensions.items())},
               "failures": len(r.failures),
               "first_failure": None if not r.failures else _jsonable(r.failures[0])}
    return bundle("windmill_replay", windmill_free().name, payload)


def tree_bundle(t: RefutationTree) -> dict:
    payload = {"base": _g6(t.base), "depth": t.depth,
               "nodes": {s: _g6(g) for s, g in sorted(t.nodes.items())},
               "certified": dict(sorted(t.certified.items()))}
    return bundle("refutation_tree", t.class_name, payload)


def diam2_bundle(max_order: int, counts: dict, exceptions: list[Graph], branches: dict) -> dict:
    payload = {"max_order": max_order, "graphs_per_order": {str(n): c for n, c in sorted(counts.items())},
               "hypotheses_met": {b: [_g6(g) for g in gs] for b, gs in sorted(branches.items())},
               "exceptions": [_g6(g) for g in exceptions]}
    return bundle("prop_diam2", "all", payload)


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------- replay

@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    message: str


def replay(obj: dict) -> ReplayResult:
    """Re-verify a bundle.  Unknown kinds and newer schemas are rejected."""
    version = obj.get("schema_version")
    if not isinstance(version, int) or version > SCHEMA_VERSION:
        return ReplayResult(False, f"unsupported schema version {version!r}")
    kind = obj.get("kind")
    handler = _HANDLERS.get(kind)
    if handler is None:
        return ReplayResult(False, f"unknown bundle kind {kind!r}")
    try:
        return handler(obj)
    except (ValueError, KeyError, TypeError, RuntimeError) as exc:
        return ReplayResult(False, f"{kind}: {exc}")


def _replay_amalgam(obj: dict) -> ReplayResult:
    k = parse_class(obj["class"])
    p = obj["payload"]
    prob = AmalgamationProblem(_graph(p["base"]), _graph(p["left"]), _graph(p["right"]),
                               tuple(p["left_embedding"]), tuple(p["right_embedding"]))
    res = p["result"]
    if res is not None:
        am = Amalgam(prob, _graph(res["graph"]), tuple(res["left_map"]), tuple(res["right_map"]))
        if not k.member(am.result):
            return ReplayResult(False, "stored amalgam is not in the class")
        return ReplayResult(True, "stored amalgam verified")
    found = find_amalgam(prob, k, allow_cross_edges=p["allow_cross_edges"], propagate=False)
    if found is not None:
        return ReplayResult(False, "an amalgam exists although none was recorded")
    return ReplayResult(True, "no amalgam, confirmed by exhaustive search")


def _replay_witness(obj: dict) -> ReplayResult:
    k = parse_class(obj["class"])
    p = obj["payload"]
    base, witness = _graph(p["base"]), _graph(p["witness"])
    extra = p["bounds"]["extra"]
    if p["verdict"] == "refuted":
        w, b, c = (_graph(s) for s in p["counterexample"])
        if w != witness:
            return ReplayResult(False, "counterexample does not start from the witness")
        for h in (b, c):
            if h.induced(range(w.order)) != w or h.order - w.order > extra or not k.member(h):
                return ReplayResult(False, "counterexample extensions are invalid")
        over = base if p["mode"] == "wap" else witness
        if find_amalgam(AmalgamationProblem.over_prefix(over, b, c), k, propagate=False) is not None:
            return ReplayResult(False, "counterexample pair amalgamates")
        return ReplayResult(True, "refutation re-certified")
    sweep = verify_wap_witness if p["mode"] == "wap" else check_cap_witness
    cert = sweep(k, base, witness, extra)
    if not cert.verified:
        return ReplayResult(False, "re-run sweep found a failing pair")
    return ReplayResult(True, f"witness re-verified up to {extra} extra vertices")


def _replay_ap(obj: dict) -> ReplayResult:
    k = parse_class(obj["class"])
    p = obj["payload"]
    report = check_ap(k, p["n"])
    got = [[_g6(g) for g in t] for t in report.failures]
    if got != p["failures"] or report.problems != p["problems"]:
        return ReplayResult(False, "re-run sweep differs from the recorded one")
    return ReplayResult(True, f"{report.problems} problems, {len(got)} failures reproduced")


def _replay_gadget(obj: dict) -> ReplayResult:
    p = obj["payload"]
    gadget = c4_nonwap_gadgets(_graph(p["witness"]))
    if gadget_bundle(gadget)["payload"] != p:
        return ReplayResult(False, "rebuilt gadget differs from the bundle")
    k = parse_class(obj["class"])
    prob = AmalgamationProblem.over_prefix(gadget.base, gadget.B, gadget.C)
    if find_amalgam(prob, k, propagate=False) is not None:
        return ReplayResult(False, "gadget pair amalgamates over the pentagon")
    return ReplayResult(True, "gadget rebuilt; no amalgam over the pentagon")


def _replay_windmill(obj: dict) -> ReplayResult:
    p = obj["payload"]
    w = build_wap_witness(_graph(p["base"]))
    if windmill_bundle(w)["payload"] != p:
        return ReplayResult(False, "rebuilt witness differs from the bundle")
    if not w.anchors.verify(w.graph) or not windmill_free().member(w.graph):
        return ReplayResult(False, "witness fails its invariants")
    return ReplayResult(True, "witness rebuilt and verified")


def _replay_windmill_sweep(obj: dict) -> ReplayResult:
    p = obj["payload"]
    r = windmill_free_amalgam_replay(_graph(p["base"]), _graph(p["witness"]), p["extra"], glue=p["glue"],
                                     centres=p["centres"])
    if windmill_replay_bundle(r)["payload"] != p:
        return ReplayResult(False, "re-run replay differs from the bundle")
    return ReplayResult(True, f"{r.pairs_checked} pairs, {len(r.failures)} failures reproduced")


def _replay_tree(obj: dict) -> ReplayResult:
    p = obj["payload"]
    nodes = {s: _graph(g) for s, g in p["nodes"].items()}
    depth = p["depth"]
    expected = {""} | {format(i, f"0{d}b") for d in range(1, depth + 1) for i in range(2 ** d)}
    if set(nodes) != expected:
        return ReplayResult(False, "tree shape is wrong")
    tree = RefutationTree(obj["class"], _graph(p["base"]), depth, nodes, dict(p["certified"]))
    if not tree.replay(parse_class(obj["class"]), propagate=False):
        return ReplayResult(False, "a sibling pair amalgamates or a node is invalid")
    return ReplayResult(True, f"{len(tree.sibling_pairs())} sibling pairs re-certified")


def _replay_diam2(obj: dict) -> ReplayResult:
    from .sweeps import diam2_sweep
    p = obj["payload"]
    counts, exceptions, branches = diam2_sweep(p["max_order"])
    if diam2_bundle(p["max_order"], counts, exceptions, branches)["payload"] != p:
        return ReplayResult(False, "re-run sweep differs from the bundle")
    return ReplayResult(True, "sweep reproduced")


_HANDLERS = {
    "amalgam": _replay_amalgam,
    "witness": _replay_witness,
    "ap_sweep": _replay_ap,
    "c4_gadget": _replay_gadget,
    "windmill_witness": _replay_windmill,
    "windmill_replay": _replay_windmill_sweep,
    "refutation_tree": _replay_tree,
    "prop_diam2": _replay_diam2,
}
