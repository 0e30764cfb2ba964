"""Readers and writers for the on-disk formats used by the command line.

Edge list
    UTF-8 text, one ``u v`` pair per line, 0-based ids.  Lines starting with
    ``#`` are comments, except ``#n=<int>`` which fixes the node count (so
    trailing isolated nodes survive a round trip).
Membership
    CSV with header ``node,community``.
"""

import csv
import io as _io
import json
import re

import numpy as np

from .errors import InvalidArgumentError
from .graph import Graph, Partition

_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


class InputError(InvalidArgumentError):
    """Malformed or inconsistent input file."""


def read_edge_list(path):
    declared = None
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _HEADER.match(line)
                if m:
                    declared = int(m.group(1))
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer node id in {line!r}") from None
            if u < 0 or v < 0:
                raise InputError(f"{path}:{lineno}: negative node id")
            if u == v:
                raise InputError(f"{path}:{lineno}: self-loop on node {u}")
            pairs.append((u, v))
    inferred = max((max(p) for p in pairs), default=-1) + 1
    if declared is not None and inferred > declared:
        raise InputError(
            f"{path}: node {inferred - 1} not covered by header #n={declared}")
    n = declared if declared is not None else inferred
    return Graph(n, np.array(pairs, dtype=np.int64).reshape(-1, 2))


def format_edge_list(g):
    buf = _io.StringIO()
    buf.write(f"#n={g.n}\n")
    for u, v in g.edges():
        buf.write(f"{u} {v}\n")
    return buf.getvalue()


def write_edge_list(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))


def read_membership(path, n=None):
    """Read a membership CSV; every node ``0..n-1`` must appear exactly once."""
    labels = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["node", "community"]:
            raise InputError(f"{path}: expected header 'node,community'")
        for lineno, row in enumerate(reader, 2):
            if not row or not "".join(row).strip():
                continue
            try:
                node, comm = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                raise InputError(f"{path}:{lineno}: malformed row {row!r}") from None
            if node < 0 or comm < 0:
                raise InputError(f"{path}:{lineno}: negative id")
            if node in labels:
                raise InputError(f"{path}:{lineno}: node {node} listed twice")
            labels[node] = comm
    size = n if n is not None else (max(labels) + 1 if labels else 0)
    for node in range(size):
        if node not in labels:
            raise InputError(f"{path}: node {node} missing from membership")
    extra = [k for k in labels if k >= size]
    if extra:
        raise InputError(f"{path}: node {min(extra)} out of range for n={size}")
    return Partition.from_labels([labels[i] for i in range(size)])


def write_membership(part, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("node,community\n")
        for i, c in enumerate(part.membership):
            fh.write(f"{i},{c}\n")


def format_dot(g, part=None, name="G"):
    """Undirected DOT graph with nodes filled by community colour."""
    lines = [f"graph {name} {{", "  node [style=filled];"]
    for i in range(g.n):
        if part is None:
            lines.append(f"  {i};")
        else:
            c = int(part.membership[i])
            lines.append(f'  {i} [community={c}, fillcolor="{PALETTE[c % len(PALETTE)]}"];')
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_node_link_json(g, part=None):
    nodes = [{"id": i} if part is None else {"id": i, "community": int(part.membership[i])}
             for i in range(g.n)]
    links = [{"source": int(u), "target": int(v)} for u, v in g.edges()]
    return json.dumps({"nodes": nodes, "links": links}, indent=1) + "\n"


def write_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None or path == "-":
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
