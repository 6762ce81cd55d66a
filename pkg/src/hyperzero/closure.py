"""Rigid t-chains, t-closures, t-types and generic extensions.

The extension search is local: a candidate ``Z`` must be connected to the
current set through edges of ``G`` (2-section connectivity with the current
set contracted to one node).  A rigid extension that shares no edge with the
current set is a dense structure floating elsewhere in the graph; it is only
found with ``local=False``, which enumerates every subset and is meant for
small graphs.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .extension import Exponent, RootedHypergraph
from .hypercore import Hypergraph, find_isomorphism, induced


@dataclass(frozen=True)
class ClosureResult:
    closure: frozenset[int]
    chain: tuple[frozenset[int], ...]
    truncated: bool = False  # stopped early after exceeding ``limit``


def _edges_touching(G: Hypergraph, base: set[int], Z: Sequence[int]) -> list[int]:
    """Bitmasks over ``Z`` of the edges inside ``base | Z`` that meet ``Z``."""
    pos = {z: i for i, z in enumerate(Z)}
    seen = set()
    out = []
    for z in Z:
        for f in G.incidence[z]:
            if f in seen:
                continue
            seen.add(f)
            m = 0
            for w in f:
                i = pos.get(w)
                if i is not None:
                    m |= 1 << i
                elif w not in base:
                    break
            else:
                out.append(m)
    return out


def is_rigid_extension(G: Hypergraph, base: Iterable[int], Z: Iterable[int], alpha: Exponent) -> bool:
    """``(base, G|base+Z)`` is rigid: every nailing leaves a dense remainder."""
    base = set(base)
    Z = sorted(set(Z) - base)
    if not Z:
        return False
    masks = _edges_touching(G, base, Z)
    k = len(Z)
    for Y in range(1, 1 << k):
        e = sum(1 for m in masks if m & Y)
        if not alpha.dense(Y.bit_count(), e):
            return False
    return True


class _RigidSearch:
    """Enumerate rigid extensions of ``base`` with at most ``t`` new vertices."""

    def __init__(self, G: Hypergraph, base: set[int], alpha: Exponent):
        self.G = G
        self.base = base
        self.alpha = alpha
        self.e_min = alpha.min_dense_edges(1)
        self.need = [0] + [alpha.min_dense_edges(v) for v in range(1, 64)]
        # edges that would lie inside base + {w} once w joins
        h_base: dict[int, int] = {}
        seen = set()
        for u in base:
            for f in G.incidence[u]:
                if f in seen:
                    continue
                seen.add(f)
                out = [w for w in f if w not in base]
                if len(out) == 1:
                    h_base[out[0]] = h_base.get(out[0], 0) + 1
        self.h_base = h_base
        self.top_h_base = sorted(h_base.values(), reverse=True)

    def _outside_nbrs(self, u: int, W: set[int]) -> set[int]:
        return {w for w in self.G.neighbours[u] if w not in W}

    def search(self, t: int, want_all: bool = False) -> Iterator[tuple[int, ...]]:
        G, base = self.G, self.base
        ext0: set[int] = set()
        for u in base:
            ext0 |= self._outside_nbrs(u, base)
        nb0 = set(base) | ext0
        order = sorted(ext0)
        yield from self._extend([], set(base), order, nb0, t)

    def _extend(self, Z, W, ext, nbW, t):
        if Z:
            verdict = self._assess(Z, W, t)
            if verdict == "rigid":
                yield tuple(sorted(Z))
            elif verdict == "dead":
                return
        if len(Z) == t:
            return
        ext = list(ext)
        while ext:
            w = ext.pop(0)
            Z.append(w)
            W.add(w)
            excl = sorted(x for x in self.G.neighbours[w] if x not in nbW)
            yield from self._extend(Z, W, ext + excl, nbW | set(excl), t)
            Z.pop()
            W.discard(w)

    def _assess(self, Z, W, t) -> str:
        """'rigid', 'dead' (no superset within budget can be rigid) or 'open'."""
        G, alpha = self.G, self.alpha
        b = t - len(Z)
        Zs = set(Z)
        deg_in = {z: 0 for z in Z}
        e_touch = 0
        seen = set()
        gain_def: dict[int, int] = {}
        h: dict[int, int] = {}
        for z in Z:
            for f in G.incidence[z]:
                if f in seen:
                    continue
                seen.add(f)
                out = [w for w in f if w not in W]
                if not out:
                    e_touch += 1
                    for w in f:
                        if w in Zs:
                            deg_in[w] += 1
                elif len(out) == 1:
                    h[out[0]] = h.get(out[0], 0) + 1
        deficient = {z: self.e_min - d for z, d in deg_in.items() if d < self.e_min}
        for z in deficient:
            for f in G.incidence[z]:
                for w in f:
                    if w not in W:
                        gain_def[w] = gain_def.get(w, 0) + 1
        D = sum(deficient.values())
        if D == 0 and e_touch >= self.need[len(Z)]:
            if is_rigid_extension(G, self.base, Z, alpha):
                return "rigid"
        if b == 0:
            return "dead"
        top_def = sorted(gain_def.values(), reverse=True)[:b]
        if D > sum(top_def):
            return "dead"
        top_h = sorted(h.values(), reverse=True)
        top_hb = self.top_h_base
        s = G.arity
        nW = len(W)
        for bb in range(1, b + 1):
            inner = sum(
                math.comb(bb, j) * math.comb(nW, s - j) for j in range(2, min(s, bb) + 1)
            )
            gain = sum(top_h[:bb]) + sum(top_hb[:bb])
            if e_touch + gain + inner >= self.need[len(Z) + bb]:
                return "open"
        return "dead"


def find_rigid_extension(
    G: Hypergraph, base: Iterable[int], t: int, alpha: Exponent, local: bool = True
) -> tuple[int, ...] | None:
    """Some ``Z`` with ``1 <= |Z| <= t`` rigid over ``base``, smallest sizes first."""
    base = set(base)
    if t <= 0:
        return None
    if not local:
        rest = [u for u in range(G.vertex_count) if u not in base]
        for k in range(1, t + 1):
            for Z in itertools.combinations(rest, k):
                if is_rigid_extension(G, base, Z, alpha):
                    return Z
        return None
    search = _RigidSearch(G, base, alpha)
    for k in range(1, t + 1):
        for Z in search.search(k):
            return Z
    return None


def rigid_extensions(
    G: Hypergraph, base: Iterable[int], t: int, alpha: Exponent
) -> Iterator[tuple[int, ...]]:
    """Every locally attached rigid extension of ``base`` with at most ``t``
    vertices (each yielded once)."""
    base = set(base)
    if t <= 0:
        return iter(())
    return _RigidSearch(G, base, alpha).search(t)


def closure_t(
    G: Hypergraph,
    x: Iterable[int],
    t: int,
    alpha: Exponent,
    local: bool = True,
    rng: random.Random | None = None,
    limit: int | None = None,
) -> ClosureResult:
    """Grow ``x`` by rigid extensions of at most ``t`` vertices to a fixed point.

    With ``rng`` the extension added at each step is drawn at random among all
    candidates instead of being the first one found.  With ``limit`` the growth
    stops, marked truncated, once the set has more than ``limit`` vertices.
    """
    cur = frozenset(x)
    if not cur:
        raise ValueError("closure of an empty set")
    chain = [cur]
    if t <= 0:
        return ClosureResult(cur, tuple(chain))
    while True:
        if rng is None:
            # single vertices are the common case and need no search
            ws = _dense_vertices(G, cur, alpha)
            if ws:
                for w in ws:
                    cur = cur | {w}
                    chain.append(cur)
                if limit is not None and len(cur) > limit:
                    return ClosureResult(cur, tuple(chain), truncated=True)
                continue
            Z = find_rigid_extension(G, cur, t, alpha, local=local)
        else:
            Z = _random_extension(G, cur, t, alpha, local, rng)
        if Z is None:
            return ClosureResult(cur, tuple(chain))
        cur = cur | frozenset(Z)
        chain.append(cur)
        if limit is not None and len(cur) > limit:
            return ClosureResult(cur, tuple(chain), truncated=True)


def _dense_vertices(G: Hypergraph, base: frozenset[int], alpha: Exponent) -> list[int]:
    """Outside vertices ``w`` with enough edges inside ``base + w``; each stays
    rigid after the others are added."""
    need = alpha.min_dense_edges(1)
    alpha.check(1, need)
    count: dict[int, int] = {}
    seen = set()
    for u in base:
        for f in G.incidence[u]:
            if f in seen:
                continue
            seen.add(f)
            out = [w for w in f if w not in base]
            if len(out) == 1:
                count[out[0]] = count.get(out[0], 0) + 1
    return sorted(w for w, c in count.items() if c >= need)


def _random_extension(G, base, t, alpha, local, rng):
    if local:
        found = list(rigid_extensions(G, base, t, alpha))
    else:
        rest = [u for u in range(G.vertex_count) if u not in base]
        found = [
            Z
            for k in range(1, t + 1)
            for Z in itertools.combinations(rest, k)
            if is_rigid_extension(G, base, Z, alpha)
        ]
    return rng.choice(found) if found else None


def validate_chain(G: Hypergraph, result: ClosureResult, t: int, alpha: Exponent) -> bool:
    chain = result.chain
    if chain[-1] != result.closure:
        return False
    for a, b in zip(chain, chain[1:]):
        if not a < b or len(b - a) > t:
            return False
        if not is_rigid_extension(G, a, b - a, alpha):
            return False
    return True


def finite_closure_constants(t: int, r: int, alpha: Exponent) -> tuple[Fraction, int]:
    """``(eps, K)``: eps is the least ``(e*alpha - v)/v`` over ``1 <= v <= t``
    with ``e*alpha > v``, attained at the least such ``e``; ``K`` is the least
    integer with ``r - K*eps < 0``."""
    if t < 1 or r < 1:
        raise ValueError("t and r must be positive")
    a = alpha.fraction
    eps = None
    for v in range(1, t + 1):
        e = alpha.min_dense_edges(v)
        alpha.check(v, e)
        val = (e * a - v) / v
        if eps is None or val < eps:
            eps = val
    assert eps is not None
    K = math.floor(r / eps) + 1
    return eps, K


def finite_closure_constants_bruteforce(
    t: int, r: int, alpha: Exponent, e_max: int = 50
) -> tuple[Fraction, int]:
    """Scan every ``(v, e)`` with ``e <= e_max``, then the least ``K`` directly."""
    a = alpha.fraction
    vals = [
        (e * a - v) / v for v in range(1, t + 1) for e in range(0, e_max + 1) if e * a - v > 0
    ]
    eps = min(vals)
    K = 0
    while r - K * eps >= 0:
        K += 1
    return eps, K


def same_t_type(
    G1: Hypergraph,
    x: Sequence[int],
    G2: Hypergraph,
    y: Sequence[int],
    t: int,
    alpha: Exponent,
    closure: Callable[[Hypergraph, Sequence[int]], frozenset[int]] | None = None,
) -> bool:
    """Pinned isomorphism between the t-closures of ``x`` and ``y``."""
    if len(x) != len(y):
        return False
    if closure is None:
        c1 = closure_t(G1, x, t, alpha).closure
        c2 = closure_t(G2, y, t, alpha).closure
    else:
        c1, c2 = closure(G1, x), closure(G2, y)
    return pinned_isomorphic(G1, c1, x, G2, c2, y)


def pinned_isomorphic(
    G1: Hypergraph, c1: Iterable[int], x: Sequence[int], G2: Hypergraph, c2: Iterable[int], y: Sequence[int]
) -> bool:
    c1, c2 = set(c1), set(c2)
    if len(c1) != len(c2):
        return False
    pins = {}
    for a, b in zip(x, y):
        if pins.get(a, b) != b:
            return False
        pins[a] = b
    if len(set(pins.values())) != len(pins):
        return False
    H1, m1 = induced(G1, c1)
    H2, m2 = induced(G2, c2)
    return find_isomorphism(H1, H2, [(m1[a], m2[b]) for a, b in pins.items()]) is not None


def is_exact_extension(G: Hypergraph, x: Sequence[int], y: Sequence[int], rh: RootedHypergraph) -> bool:
    if len(x) != rh.r or len(y) != len(rh.nonroots):
        return False
    image = dict(zip(rh.roots, x))
    image.update(zip(rh.nonroots, y))
    if len(set(image.values())) != len(image):
        return False
    want = {tuple(sorted(image[u] for u in f)) for f in rh.pattern_edges}
    if not want <= G.edge_set:
        return False
    ys = set(y)
    inside = set(x) | ys
    have = {
        f for u in ys for f in G.incidence[u] if all(w in inside for w in f)
    }
    return have == want


def is_generic_extension(
    G: Hypergraph,
    x: Sequence[int],
    y: Sequence[int],
    rh: RootedHypergraph,
    t: int,
    alpha: Exponent,
) -> bool:
    """Exact extension, and no rigid ``z`` (at most ``t`` vertices) over
    ``x + y`` shares an edge with ``y``."""
    if rh.graph.arity != G.arity:
        raise ValueError(f"arity mismatch: pattern {rh.graph.arity}, host {G.arity}")
    if not is_exact_extension(G, x, y, rh):
        return False
    base = set(x) | set(y)
    ys = set(y)
    for Z in rigid_extensions(G, base, t, alpha):
        zs = set(Z)
        inside = base | zs
        for z in Z:
            for f in G.incidence[z]:
                if all(w in inside for w in f) and any(w in ys for w in f):
                    return False
    return True
