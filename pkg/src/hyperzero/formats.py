"""Plain-text hypergraph format.

::

    s n m
    v v ... v        (m lines, s ascending ids each)

A rooted hypergraph appends one line ``roots: id id ...``.
"""
from __future__ import annotations

from pathlib import Path

from .hypercore import Hypergraph, HypergraphError, make_hypergraph


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _ints(text: str, lineno: int) -> list[int]:
    parts = text.split(" ")
    if not text or any(p == "" for p in parts):
        raise FormatError(lineno, f"expected single-space separated integers, got {text!r}")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise FormatError(lineno, f"non-integer token in {text!r}") from None
    if any(str(v) != p for v, p in zip(vals, parts)):
        raise FormatError(lineno, f"non-canonical integer in {text!r}")
    return vals


def _split_lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise FormatError(text.count("\n") + 1, "missing final newline")
    return text[:-1].split("\n")


def parse_hypergraph(text: str | bytes) -> Hypergraph:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = _split_lines(text)
    return _parse_lines(lines, allow_trailing=False)[0]


def _parse_lines(lines: list[str], allow_trailing: bool) -> tuple[Hypergraph, list[str]]:
    header = _ints(lines[0], 1)
    if len(header) != 3:
        raise FormatError(1, f"header must be 's n m', got {lines[0]!r}")
    s, n, m = header
    if len(lines) < m + 1:
        raise FormatError(len(lines) + 1, f"expected {m} edge lines, found {len(lines) - 1}")
    rest = lines[m + 1 :]
    if rest and not allow_trailing:
        raise FormatError(m + 2, "unexpected content after the last edge")
    edges = []
    for i in range(m):
        lineno = i + 2
        vals = _ints(lines[i + 1], lineno)
        if len(vals) != s:
            raise FormatError(lineno, f"edge has {len(vals)} vertices, expected {s}")
        if len(set(vals)) != len(vals):
            raise FormatError(lineno, f"repeated vertex in edge {vals}")
        if vals != sorted(vals):
            raise FormatError(lineno, f"edge vertices must be ascending: {vals}")
        edges.append(vals)
    try:
        G = make_hypergraph(s, n, edges)
    except HypergraphError as exc:
        raise FormatError(_blame(exc, edges), str(exc)) from None
    return G, rest


def _blame(exc: HypergraphError, edges: list[list[int]]) -> int:
    msg = str(exc)
    if msg.startswith("edge #"):
        return int(msg[6:].split(" ")[0]) + 2
    return 1


def format_hypergraph(G: Hypergraph) -> str:
    out = [f"{G.arity} {G.vertex_count} {G.e}"]
    out.extend(" ".join(str(u) for u in f) for f in G.edges)
    return "\n".join(out) + "\n"


def parse_rooted(text: str | bytes) -> tuple[Hypergraph, tuple[int, ...]]:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = _split_lines(text)
    G, rest = _parse_lines(lines, allow_trailing=True)
    lineno = G.e + 2
    if len(rest) != 1 or not rest[0].startswith("roots:"):
        raise FormatError(lineno, "expected a final 'roots: id id ...' line")
    body = rest[0][len("roots:") :].strip()
    roots = tuple(_ints(body, lineno)) if body else ()
    return G, roots


def format_rooted(G: Hypergraph, roots: tuple[int, ...]) -> str:
    tail = "roots:" + "".join(f" {r}" for r in roots)
    return format_hypergraph(G) + tail + "\n"


def read_hypergraph(path: str | Path) -> Hypergraph:
    return parse_hypergraph(Path(path).read_bytes())


def write_hypergraph(G: Hypergraph, path: str | Path) -> None:
    Path(path).write_text(format_hypergraph(G), encoding="ascii", newline="\n")
