"""graph6 encoding, DOT export, and the JSON mark sidecar."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .graph import Graph

HEADER = ">>graph6<<"

__all__ = ["to_graph6", "from_graph6", "to_dot", "marks_json", "read_graph6_lines",
           "write_graph6_lines", "read_graph"]


def _encode_n(n: int) -> str:
    if n < 0:
        raise ValueError("negative order")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("order too large for graph6")


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode ``g`` as a graph6 string (no trailing newline)."""
    out = [HEADER] if header else []
    out.append(_encode_n(g.order))
    bitlist = []
    for j in range(1, g.order):
        row = g.adj[j]
        bitlist.extend(row >> i & 1 for i in range(j))
    bitlist.extend([0] * (-len(bitlist) % 6))
    for k in range(0, len(bitlist), 6):
        chunk = bitlist[k:k + 6]
        val = 0
        for b in chunk:
            val = val << 1 | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    data = [ord(c) - 63 for c in s]
    if not data or any(not 0 <= d <= 63 for d in data):
        raise ValueError(f"not a graph6 string: {text!r}")
    if data[0] == 63:
        if len(data) > 1 and data[1] == 63:
            digits, rest = data[2:8], data[8:]
        else:
            digits, rest = data[1:4], data[4:]
        n = 0
        for d in digits:
            n = n << 6 | d
    else:
        n, rest = data[0], data[1:]
    need = n * (n - 1) // 2
    if len(rest) != (need + 5) // 6:
        raise ValueError(f"graph6 length mismatch for order {n}")
    stream = []
    for d in rest:
        stream.extend(d >> s & 1 for s in range(5, -1, -1))
    if any(stream[need:]):
        raise ValueError("nonzero graph6 padding")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if stream[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    names = {v: k for k, v in g.marks.items()}
    for v in range(g.order):
        label = f' [label="{names[v]}"]' if v in names else ""
        lines.append(f"  {v}{label};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def marks_json(g: Graph) -> str:
    return json.dumps({"marks": dict(sorted(g.marks.items()))}, sort_keys=True)


def read_graph6_lines(path) -> list[Graph]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            out.append(from_graph6(line))
    return out


def write_graph6_lines(path, graphs: Iterable[Graph]) -> int:
    lines = [to_graph6(g) for g in graphs]
    Path(path).write_text("".join(s + "\n" for s in lines))
    return len(lines)


def read_graph(path) -> Graph:
    """Read a single graph6 file; a ``<file>.marks.json`` sidecar, if present, restores marks."""
    graphs = read_graph6_lines(path)
    if len(graphs) != 1:
        raise ValueError(f"{path}: expected exactly one graph, found {len(graphs)}")
    g = graphs[0]
    sidecar = Path(str(path) + ".marks.json")
    if sidecar.exists():
        g = g.with_marks(json.loads(sidecar.read_text())["marks"])
    return g
