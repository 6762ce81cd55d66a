"""s-uniform hypergraphs and their structural primitives.

Vertices are the integers ``0..n-1``.  Every edge is stored as an ascending
tuple of ``s`` distinct vertex ids.  Isolated vertices are legal and count
toward ``v(G)``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Invalid hypergraph data.  ``reason`` is a short machine-readable tag."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class Hypergraph:
    arity: int
    vertex_count: int
    edges: tuple[Edge, ...] = field(compare=False)
    edge_set: frozenset[Edge] = field(repr=False)

    @property
    def v(self) -> int:
        return self.vertex_count

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @cached_property
    def incidence(self) -> tuple[tuple[Edge, ...], ...]:
        """``incidence[u]`` lists the edges containing ``u``."""
        inc: list[list[Edge]] = [[] for _ in range(self.vertex_count)]
        for f in self.edges:
            for u in f:
                inc[u].append(f)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        """Vertices sharing at least one edge with ``u``."""
        return tuple(
            frozenset(w for f in fs for w in f if w != u)
            for u, fs in enumerate(self.incidence)
        )

    def degree(self, u: int) -> int:
        return len(self.incidence[u])

    def has_edge(self, vs: Iterable[int]) -> bool:
        return tuple(sorted(vs)) in self.edge_set

    def density(self) -> Fraction:
        return density(self)

    def __contains__(self, f: object) -> bool:
        return f in self.edge_set


def make_hypergraph(s: int, n: int, raw_edges: Iterable[Sequence[int]]) -> Hypergraph:
    """Validate and normalise raw edge lists into a :class:`Hypergraph`."""
    if s < 2:
        raise HypergraphError("arity", f"arity must be >= 2, got {s}")
    if n < 0:
        raise HypergraphError("vertex_count", f"vertex count must be >= 0, got {n}")
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for idx, raw in enumerate(raw_edges):
        raw = list(raw)
        if len(raw) != s:
            raise HypergraphError(
                "edge_size", f"edge #{idx} {raw} has {len(raw)} vertices, expected {s}"
            )
        for u in raw:
            if not isinstance(u, int) or u < 0 or u >= n:
                raise HypergraphError(
                    "vertex_range", f"edge #{idx} {raw}: vertex id {u} outside 0..{n - 1}"
                )
        f = tuple(sorted(raw))
        if len(set(f)) != s:
            raise HypergraphError("repeated_vertex", f"edge #{idx} {raw} repeats a vertex")
        if f in seen:
            raise HypergraphError("duplicate_edge", f"edge #{idx} {raw} is a duplicate")
        seen.add(f)
        edges.append(f)
    return Hypergraph(s, n, tuple(edges), frozenset(edges))


def empty_hypergraph(s: int, n: int) -> Hypergraph:
    return make_hypergraph(s, n, [])


def induced(G: Hypergraph, S: Iterable[int]) -> tuple[Hypergraph, dict[int, int]]:
    """Sub-hypergraph induced on ``S``, relabelled ``0..|S|-1`` in id order.

    Returns the hypergraph together with the old-id -> new-id map.
    """
    verts = sorted(set(S))
    if not verts:
        raise HypergraphError("empty_subset", "cannot induce on an empty vertex set")
    if verts[0] < 0 or verts[-1] >= G.vertex_count:
        raise HypergraphError("vertex_range", f"subset {verts} not inside 0..{G.vertex_count - 1}")
    relabel = {u: i for i, u in enumerate(verts)}
    inside = set(verts)
    cand: set[Edge] = set()
    for u in verts:
        for f in G.incidence[u]:
            if f not in cand and all(w in inside for w in f):
                cand.add(f)
    new_edges = sorted(tuple(relabel[w] for w in f) for f in cand)
    return Hypergraph(G.arity, len(verts), tuple(new_edges), frozenset(new_edges)), relabel


def induced_edge_count(G: Hypergraph, S: Iterable[int]) -> int:
    inside = set(S)
    return sum(
        1
        for f in {f for u in inside for f in G.incidence[u]}
        if all(w in inside for w in f)
    )


def density(G: Hypergraph) -> Fraction:
    if G.vertex_count == 0:
        raise HypergraphError("empty", "density of a hypergraph with no vertices is undefined")
    return Fraction(G.e, G.vertex_count)


def components(G: Hypergraph) -> list[list[int]]:
    """Connected components, each sorted, listed by smallest member."""
    parent = list(range(G.vertex_count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in G.edges:
        r0 = find(f[0])
        for w in f[1:]:
            r = find(w)
            if r != r0:
                parent[r] = r0
    groups: dict[int, list[int]] = {}
    for u in range(G.vertex_count):
        groups.setdefault(find(u), []).append(u)
    return sorted(groups.values(), key=lambda c: c[0])


def is_connected(G: Hypergraph) -> bool:
    return len(components(G)) <= 1


# ---------------------------------------------------------------------------
# cycles and trees


@dataclass(frozen=True)
class CycleWitness:
    """Closed alternating sequence ``v_1, e_1, ..., v_m, e_m, v_1``."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.edges)


def is_valid_cycle(G: Hypergraph, c: CycleWitness) -> bool:
    m = len(c.vertices)
    if m < 2 or len(c.edges) != m:
        return False
    for i in range(m):
        a, b = c.vertices[i], c.vertices[(i + 1) % m]
        f, g = c.edges[i], c.edges[(i + 1) % m]
        if a == b or f == g or f not in G.edge_set:
            return False
        if a not in f or b not in f:
            return False
    return True


def find_cycle(G: Hypergraph) -> CycleWitness | None:
    """Search the vertex-edge incidence graph for a cycle.

    A simple cycle there alternates distinct vertices and distinct edges,
    which satisfies the three cycle conditions; conversely any such closed
    sequence is a non-backtracking closed walk, so the incidence graph is
    not a forest.
    """
    # nodes: ("v", u) and ("e", f)
    parent: dict[tuple, tuple | None] = {}
    depth: dict[tuple, int] = {}

    def nbrs(node: tuple) -> Iterable[tuple]:
        if node[0] == "v":
            return (("e", f) for f in G.incidence[node[1]])
        return (("v", w) for w in node[1])

    for u in range(G.vertex_count):
        root = ("v", u)
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        stack = [(root, iter(nbrs(root)))]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt == parent[node]:
                    continue
                if nxt in parent:
                    return _cycle_from_back_edge(node, nxt, parent, depth)
                parent[nxt] = node
                depth[nxt] = depth[node] + 1
                stack.append((nxt, iter(nbrs(nxt))))
                advanced = True
                break
            if not advanced:
                stack.pop()
    return None


def _cycle_from_back_edge(a: tuple, b: tuple, parent: dict, depth: dict) -> CycleWitness:
    # a is on the DFS stack; b is an ancestor of a (undirected DFS has no cross edges)
    path = [a]
    while path[-1] != b:
        path.append(parent[path[-1]])
    # path runs a -> ... -> b; closing edge b -- a
    nodes = path[::-1]
    k = next(i for i, x in enumerate(nodes) if x[0] == "v")
    nodes = nodes[k:] + nodes[:k]
    verts = tuple(x[1] for x in nodes[0::2])
    edges = tuple(x[1] for x in nodes[1::2])
    return CycleWitness(verts, edges)


def is_tree(G: Hypergraph) -> bool:
    return G.vertex_count >= 1 and is_connected(G) and find_cycle(G) is None


# ---------------------------------------------------------------------------
# isomorphism and automorphisms


def _refine_colours(
    graphs: Sequence[Hypergraph], initial: Sequence[dict[int, object]]
) -> list[list[int]]:
    """Joint colour refinement; colours are comparable across ``graphs``."""
    cols = [
        [(G.degree(u), initial[i].get(u)) for u in range(G.vertex_count)]
        for i, G in enumerate(graphs)
    ]
    palette = {c: k for k, c in enumerate(sorted({c for cs in cols for c in cs}, key=repr))}
    cur = [[palette[c] for c in cs] for cs in cols]
    n_classes = len(palette)
    while True:
        sigs = []
        for G, cs in zip(graphs, cur):
            sig = []
            for u in range(G.vertex_count):
                around = sorted(
                    tuple(sorted(cs[w] for w in f if w != u)) for f in G.incidence[u]
                )
                sig.append((cs[u], tuple(around)))
            sigs.append(sig)
        palette = {c: k for k, c in enumerate(sorted({c for sg in sigs for c in sg}))}
        nxt = [[palette[c] for c in sg] for sg in sigs]
        if len(palette) == n_classes:
            return nxt
        n_classes = len(palette)
        cur = nxt


def twin_classes(G: Hypergraph) -> list[list[int]]:
    """Classes of vertices whose pairwise transpositions are automorphisms."""
    links = []
    for u in range(G.vertex_count):
        links.append({tuple(w for w in f if w != u) for f in G.incidence[u]})
    classes: list[list[int]] = []
    assigned = [False] * G.vertex_count
    for u in range(G.vertex_count):
        if assigned[u]:
            continue
        cls = [u]
        assigned[u] = True
        for w in range(u + 1, G.vertex_count):
            if assigned[w] or G.degree(u) != G.degree(w):
                continue
            lu = {x for x in links[u] if w not in x}
            lw = {x for x in links[w] if u not in x}
            if lu == lw:
                cls.append(w)
                assigned[w] = True
        classes.append(cls)
    return classes


class _Matcher:
    """Backtracking bijection search between two hypergraphs."""

    def __init__(
        self,
        G1: Hypergraph,
        G2: Hypergraph,
        pinned: Sequence[tuple[int, int]] = (),
        twin_order: list[list[int]] | None = None,
    ):
        self.G1, self.G2 = G1, G2
        init1 = {u: ("pin", i) for i, (u, _) in enumerate(pinned)}
        init2 = {w: ("pin", i) for i, (_, w) in enumerate(pinned)}
        self.col1, self.col2 = _refine_colours([G1, G2], [init1, init2])
        self.ok = Counter(self.col1) == Counter(self.col2)
        self.by_col2: dict[int, list[int]] = {}
        for w, c in enumerate(self.col2):
            self.by_col2.setdefault(c, []).append(w)
        self.twin_of: dict[int, list[int]] = {}
        if twin_order:
            for cls in twin_order:
                for u in cls:
                    self.twin_of[u] = cls
        self.order = self._order()

    def _order(self) -> list[int]:
        G1 = self.G1
        n = G1.vertex_count
        size = Counter(self.col1)
        placed: set[int] = set()
        touch = [0] * n
        order = []
        for _ in range(n):
            u = min(
                (x for x in range(n) if x not in placed),
                key=lambda x: (-touch[x], size[self.col1[x]], -G1.degree(x), x),
            )
            order.append(u)
            placed.add(u)
            for f in G1.incidence[u]:
                for w in f:
                    if w not in placed:
                        touch[w] += 1
        return order

    def run(self, limit: int | None) -> tuple[int, dict[int, int] | None]:
        """Count bijections up to ``limit``; also return the first one found."""
        if not self.ok or self.G1.vertex_count != self.G2.vertex_count:
            return 0, None
        if self.G1.e != self.G2.e:
            return 0, None
        G1, G2 = self.G1, self.G2
        fwd: dict[int, int] = {}
        used: set[int] = set()
        found: list[dict[int, int]] = []
        count = 0

        def consistent(u: int, w: int) -> bool:
            c1 = 0
            for f in G1.incidence[u]:
                if all(x in fwd for x in f if x != u):
                    img = tuple(sorted(w if x == u else fwd[x] for x in f))
                    if img not in G2.edge_set:
                        return False
                    c1 += 1
            c2 = 0
            for g in G2.incidence[w]:
                if all(y in used for y in g if y != w):
                    c2 += 1
            if c1 != c2:
                return False
            cls = self.twin_of.get(u)
            if cls is not None:
                for u2 in cls:
                    if u2 in fwd and (u2 < u) != (fwd[u2] < w):
                        return False
            return True

        def rec(i: int) -> bool:
            nonlocal count
            if i == len(self.order):
                count += 1
                if not found:
                    found.append(dict(fwd))
                return limit is not None and count >= limit
            u = self.order[i]
            for w in self.by_col2.get(self.col1[u], ()):
                if w in used or not consistent(u, w):
                    continue
                fwd[u] = w
                used.add(w)
                stop = rec(i + 1)
                del fwd[u]
                used.discard(w)
                if stop:
                    return True
            return False

        rec(0)
        return count, (found[0] if found else None)


def find_isomorphism(
    G1: Hypergraph, G2: Hypergraph, pinned: Sequence[tuple[int, int]] = ()
) -> dict[int, int] | None:
    """A vertex bijection ``V(G1) -> V(G2)`` preserving edges both ways and
    extending ``pinned``; ``None`` if there is none."""
    if G1.arity != G2.arity or G1.vertex_count != G2.vertex_count or G1.e != G2.e:
        return None
    lefts = [u for u, _ in pinned]
    rights = [w for _, w in pinned]
    if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
        raise ValueError("pinned pairs must be injective on both sides")
    _, mapping = _Matcher(G1, G2, pinned).run(limit=1)
    return mapping


def count_automorphisms(G: Hypergraph) -> int:
    """Exact order of the automorphism group.

    Twin classes (vertices interchangeable by a transposition) contribute a
    factorial factor each; the backtracking only enumerates automorphisms
    that are order-preserving on every twin class, one per coset.
    """
    if G.vertex_count < 1:
        raise HypergraphError("empty", "automorphisms of the empty hypergraph")
    classes = twin_classes(G)
    factor = math.prod(math.factorial(len(c)) for c in classes)
    multi = [c for c in classes if len(c) > 1]
    count, _ = _Matcher(G, G, twin_order=multi).run(limit=None)
    return count * factor


def count_automorphisms_bruteforce(G: Hypergraph) -> int:
    n = G.vertex_count
    total = 0
    for perm in itertools.permutations(range(n)):
        if all(tuple(sorted(perm[u] for u in f)) in G.edge_set for f in G.edges):
            total += 1
    return total


def relabel(G: Hypergraph, mapping: dict[int, int], n: int | None = None) -> Hypergraph:
    n = G.vertex_count if n is None else n
    return make_hypergraph(G.arity, n, [[mapping[u] for u in f] for f in G.edges])


def disjoint_union(G1: Hypergraph, G2: Hypergraph) -> Hypergraph:
    if G1.arity != G2.arity:
        raise HypergraphError("arity", "cannot join hypergraphs of different arity")
    off = G1.vertex_count
    return make_hypergraph(
        G1.arity,
        G1.vertex_count + G2.vertex_count,
        list(G1.edges) + [[u + off for u in f] for f in G2.edges],
    )
