"""Command-line entry point (``weakfraisse``).

Exit status: 0 on success, 1 when a checked property fails or a replay does
not reproduce, 2 on configuration errors.  Results go to the output directory
as JSON (keys sorted, no timestamps); run metadata goes to a ``.meta.json``
sidecar next to each artifact.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .amalgamation import (AmalgamationProblem, build_refutation_tree, check_ap, check_cap_witness,
                           find_amalgam, find_cap_witness, verify_wap_witness)
from .certificates import (amalgam_bundle, ap_bundle, diam2_bundle, dumps, gadget_bundle, read_bundle, replay,
                           tree_bundle, windmill_bundle, windmill_replay_bundle, witness_bundle, write_bundle)
from .classes import parse_class
from .constructions import build_wap_witness, c4_nonwap_gadgets, c4_refuter, windmill_free_amalgam_replay
from .enumeration import MAX_ORDER, all_graphs_in_class
from .formats import marks_json, read_graph, read_graph6_lines, to_dot, to_graph6
from .graph import cycle
from .limits import diagnose, resume, run_chain, save_chain
from .sweeps import diam2_sweep


class ConfigError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _class(spec: str):
    try:
        return parse_class(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _graph(path: str | None, what: str):
    if path is None:
        raise ConfigError(f"missing --{what}")
    try:
        return read_graph(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read {what} graph from {path}: {exc}") from exc


def _out(args) -> Path:
    if args.out is None:
        raise ConfigError("missing --out")
    return Path(args.out)


def _emit(obj: dict, out: Path, name: str, args) -> Path:
    path = write_bundle(obj, out / name)
    meta = {"created": time.strftime("%Y-%m-%dT%H:%M:%S%z"), "tool_version": __version__,
            "command": args.command, "seed": args.seed}
    (out / f"{name}.meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def _map(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        return tuple(range(n))
    try:
        out = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad embedding map {text!r}") from exc
    if len(out) != n:
        raise ConfigError(f"embedding map {text!r} needs {n} entries")
    return out


# ------------------------------------------------------------------ commands

def cmd_member(args) -> int:
    k = _class(args.class_spec)
    if args.input is None:
        raise ConfigError("missing --in")
    try:
        graphs = read_graph6_lines(args.input)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    for g in graphs:
        res = k.member(g)
        if args.format == "json":
            print(json.dumps({"graph": to_graph6(g), "member": res}, sort_keys=True))
        else:
            print("true" if res else "false")
    return 0


def cmd_enumerate(args) -> int:
    k = _class(args.class_spec)
    if args.order is None or not 0 <= args.order <= MAX_ORDER:
        raise ConfigError(f"--order must be between 0 and {MAX_ORDER}")
    cat = all_graphs_in_class(k, args.order, hereditary=k.monotone)
    if args.format == "dot":
        text = "".join(to_dot(g, f"G{i}") for i, g in enumerate(cat))
    elif args.format == "json":
        text = dumps({"class": k.name, "order": args.order, "count": len(cat),
                      "graphs": [to_graph6(g) for g in cat]})
    else:
        text = "".join(to_graph6(g) + "\n" for g in cat)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        ext = {"dot": "dot", "json": "json"}.get(args.format, "g6")
        (out / f"{k.name.replace(':', '_')}_{args.order}.{ext}").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_amalgamate(args) -> int:
    k = _class(args.class_spec)
    base, left, right = _graph(args.base, "base"), _graph(args.left, "left"), _graph(args.right, "right")
    try:
        p = AmalgamationProblem(base, left, right, _map(args.left_map, base.order),
                                _map(args.right_map, base.order))
        am = find_amalgam(p, k, allow_cross_edges=args.cross_edges)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(to_graph6(am.result) if am else "none")
    if args.out:
        _emit(amalgam_bundle(p, k, am, args.cross_edges), _out(args), "amalgam.json", args)
    return 0


def cmd_check_ap(args) -> int:
    k = _class(args.class_spec)
    if args.order is None or not 0 <= args.order <= 6:
        raise ConfigError("--order must be between 0 and 6")
    report = check_ap(k, args.order)
    print(f"{report.problems} problems, {len(report.failures)} failures")
    if args.out:
        _emit(ap_bundle(report), _out(args), "ap_sweep.json", args)
    return 0 if report.ok else 1


def _witness_cmd(args, mode: str) -> int:
    k = _class(args.class_spec)
    base = _graph(args.base, "base")
    if args.ext_extra is None or args.ext_extra < 0:
        raise ConfigError("--ext-extra must be given and non-negative")
    try:
        if args.witness is not None:
            witness = _graph(args.witness, "witness")
            sweep = verify_wap_witness if mode == "wap" else check_cap_witness
            cert = sweep(k, base, witness, args.ext_extra)
        elif mode == "cap" and args.witness_extra is not None:
            cert = find_cap_witness(k, base, args.witness_extra, args.ext_extra)
            if cert is None:
                print("no witness found within the bounds")
                return 1
        else:
            cert = (verify_wap_witness if mode == "wap" else check_cap_witness)(k, base, base, args.ext_extra)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"{cert.kind} ({cert.pairs_checked} pairs, witness order {cert.witness.order})")
    if args.out:
        _emit(witness_bundle(cert), _out(args), f"{mode}_certificate.json", args)
    return 0 if cert.verified else 1


def cmd_check_wap(args) -> int:
    return _witness_cmd(args, "wap")


def cmd_check_cap(args) -> int:
    return _witness_cmd(args, "cap")


def cmd_windmill_witness(args) -> int:
    base = _graph(args.input, "in")
    try:
        w = build_wap_witness(base)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _out(args)
    _emit(windmill_bundle(w), out, "windmill_witness.json", args)
    (out / "witness.g6").write_text(to_graph6(w.graph) + "\n")
    status = 0
    if args.ext_extra is not None:
        centres = range(base.order) if args.centres == "base" else None
        r = windmill_free_amalgam_replay(base, w.graph, args.ext_extra, glue=args.glue, centres=centres)
        _emit(windmill_replay_bundle(r), out, "windmill_replay.json", args)
        print(f"{r.pairs_checked} local pairs, {len(r.failures)} failures (glue={args.glue})")
        status = 0 if r.ok else 1
    print(to_graph6(w.graph))
    return status


def cmd_c4_gadget(args) -> int:
    witness = _graph(args.witness or args.input, "witness")
    try:
        g = c4_nonwap_gadgets(witness)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _out(args)
    _emit(gadget_bundle(g), out, "c4_gadget.json", args)
    for name, h in (("B", g.B), ("C", g.C)):
        marked = h.with_marks({s: v for s, v in g.named_vertices().items() if v < h.order})
        (out / f"{name}.g6").write_text(to_graph6(h) + "\n")
        (out / f"{name}.g6.marks.json").write_text(marks_json(marked) + "\n")
        if args.format == "dot":
            (out / f"{name}.dot").write_text(to_dot(marked, name))
    prob = AmalgamationProblem.over_prefix(g.base, g.B, g.C)
    ok = find_amalgam(prob, _class("c4free")) is None
    print("no amalgam over the pentagon" if ok else "gadget pair amalgamates")
    return 0 if ok else 1


def cmd_refutation_tree(args) -> int:
    if args.depth is None or not 0 <= args.depth <= 6:
        raise ConfigError("--depth must be between 0 and 6")
    base = cycle(5) if args.base is None else _graph(args.base, "base")
    try:
        tree = build_refutation_tree(_class("c4free"), base, c4_refuter, args.depth)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(tree_bundle(tree), _out(args), "refutation_tree.json", args)
    print(f"{len(tree.nodes)} nodes, {len(tree.sibling_pairs())} sibling pairs certified")
    return 0


def cmd_prop_diam2(args) -> int:
    if args.order is None or not 1 <= args.order <= MAX_ORDER:
        raise ConfigError(f"--order must be between 1 and {MAX_ORDER}")
    counts, exceptions, branches = diam2_sweep(args.order, jobs=args.jobs)
    met = sum(len(v) for v in branches.values())
    print(f"{sum(counts.values())} graphs, {met} meet the hypotheses, {len(exceptions)} exceptions")
    if args.out:
        _emit(diam2_bundle(args.order, counts, exceptions, branches), _out(args), "prop_diam2.json", args)
    unclassified = branches.get("unclassified", [])
    return 0 if not exceptions and not unclassified else 1


def cmd_chain(args) -> int:
    k = _class(args.class_spec)
    if args.steps is None or args.steps < 0:
        raise ConfigError("--steps must be non-negative")
    chain = run_chain(k, args.steps, seed=args.seed, max_base=args.max_base)
    out = _out(args)
    save_chain(chain, out)
    done = sum(d.realized_at is not None for d in chain.demands)
    print(f"{chain.steps} steps, order {chain.graph.order}, {done}/{len(chain.demands)} demands realized")
    return 0


def cmd_resume(args) -> int:
    if args.input is None or args.steps is None:
        raise ConfigError("resume needs --in and --steps")
    try:
        chain = resume(args.input, args.steps)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    print(f"{chain.steps} steps, order {chain.graph.order}")
    return 0


def cmd_diagnose(args) -> int:
    if args.input is None:
        raise ConfigError("diagnose needs --in")
    try:
        report = diagnose(args.input, args.k_pairs)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    print(json.dumps({"k_pairs": report.k_pairs, "total": report.total, "satisfied": report.satisfied,
                      "fraction": report.fraction}, sort_keys=True))
    return 0


def cmd_replay(args) -> int:
    if args.input is None:
        raise ConfigError("replay needs --in")
    try:
        obj = read_bundle(args.input)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read bundle: {exc}") from exc
    result = replay(obj)
    print(("ok: " if result.ok else "FAILED: ") + result.message)
    return 0 if result.ok else 1


COMMANDS = {
    "member": cmd_member,
    "enumerate": cmd_enumerate,
    "amalgamate": cmd_amalgamate,
    "check-ap": cmd_check_ap,
    "check-cap": cmd_check_cap,
    "check-wap": cmd_check_wap,
    "windmill-witness": cmd_windmill_witness,
    "c4-gadget": cmd_c4_gadget,
    "refutation-tree": cmd_refutation_tree,
    "prop-diam2": cmd_prop_diam2,
    "chain": cmd_chain,
    "resume": cmd_resume,
    "diagnose": cmd_diagnose,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="class_spec", default="all", help="class identifier, e.g. c4free")
    common.add_argument("--order", type=int)
    common.add_argument("--witness-extra", type=int)
    common.add_argument("--ext-extra", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "graph6", "dot", "text"], default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--in", dest="input")
    common.add_argument("--witness")
    common.add_argument("--base")
    common.add_argument("--left")
    common.add_argument("--right")
    common.add_argument("--left-map")
    common.add_argument("--right-map")
    common.add_argument("--cross-edges", action="store_true")
    common.add_argument("--depth", type=int)
    common.add_argument("--steps", type=int)
    common.add_argument("--max-base", type=int, default=2)
    common.add_argument("--k-pairs", type=int, default=2)
    common.add_argument("--glue", choices=["base", "witness"], default="base")
    common.add_argument("--centres", choices=["base", "all"], default="all")
    parser = argparse.ArgumentParser(prog="weakfraisse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        _err("--jobs must be at least 1")
        return 2
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        _err(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
