"""Strict balance and maximum sub-hypergraph density by exhaustive search.

A hypergraph whose densest part is disconnected has a component at least as
dense, so only vertex sets that are connected in the 2-section need to be
visited.  Each such set is produced exactly once by an ESU-style extension
from its smallest vertex.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .hypercore import Hypergraph, HypergraphError

MAX_VERTICES = 24


class BalanceSizeError(HypergraphError):
    pass


@dataclass(frozen=True)
class BalanceVerdict:
    strictly_balanced: bool
    density: Fraction
    witness: tuple[int, ...] | None = None

    def to_json(self) -> str:
        d = self.density
        return json.dumps(
            {
                "strictly_balanced": self.strictly_balanced,
                "density": f"{d.numerator}/{d.denominator}",
                "witness": list(self.witness) if self.witness is not None else None,
            }
        )


def _check_size(G: Hypergraph) -> None:
    if G.vertex_count < 1:
        raise HypergraphError("empty", "hypergraph has no vertices")
    if G.vertex_count > MAX_VERTICES:
        raise BalanceSizeError(
            "size_bound", f"exhaustive search is capped at {MAX_VERTICES} vertices, got {G.vertex_count}"
        )


def _masks(G: Hypergraph) -> tuple[list[int], list[list[int]]]:
    nbr = [0] * G.vertex_count
    inc: list[list[int]] = [[] for _ in range(G.vertex_count)]
    for f in G.edges:
        m = 0
        for u in f:
            m |= 1 << u
        for u in f:
            nbr[u] |= m & ~(1 << u)
            inc[u].append(m)
    return nbr, inc


def connected_subsets(G: Hypergraph) -> Iterator[tuple[int, int, int]]:
    """Yield ``(mask, size, induced_edge_count)`` for every vertex set that is
    connected in the 2-section of ``G``."""
    nbr, inc = _masks(G)
    n = G.vertex_count

    def extend(S: int, size: int, edges: int, ext: int, nb_S: int, low: int):
        yield S, size, edges
        while ext:
            w = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            S2 = S | (1 << w)
            added = 0
            for m in inc[w]:
                if m & S2 == m:
                    added += 1
            excl = nbr[w] & ~S & ~nb_S & low
            yield from extend(S2, size + 1, edges + added, ext | excl, nb_S | nbr[w], low)

    for v in range(n):
        low = ~((1 << (v + 1)) - 1)
        yield from extend(1 << v, 1, 0, nbr[v] & low, nbr[v] | (1 << v), low)


def _members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return tuple(out)


def _better(e1: int, v1: int, S1: tuple, e2: int, v2: int, S2: tuple | None) -> bool:
    """Is (e1/v1, S1) preferred over the incumbent?  Higher density, then
    fewer vertices, then lexicographically smaller."""
    if S2 is None:
        return True
    a, b = e1 * v2, e2 * v1
    if a != b:
        return a > b
    if v1 != v2:
        return v1 < v2
    return S1 < S2


def _densest(G: Hypergraph, proper: bool) -> tuple[int, int, tuple[int, ...] | None]:
    full = (1 << G.vertex_count) - 1
    best_e, best_v, best_S = 0, 1, None
    for mask, size, edges in connected_subsets(G):
        if proper and mask == full:
            continue
        if not proper and edges == 0:
            continue
        a, b = edges * best_v, best_e * size
        if best_S is not None and a < b:
            continue
        S = _members(mask)
        if _better(edges, size, S, best_e, best_v, best_S):
            best_e, best_v, best_S = edges, size, S
    return best_e, best_v, best_S


def is_strictly_balanced(G: Hypergraph) -> BalanceVerdict:
    """Every proper nonempty vertex set must induce strictly lower density.

    On failure the witness is a densest proper set (ties: fewest vertices,
    then lexicographic).
    """
    _check_size(G)
    rho = Fraction(G.e, G.vertex_count)
    e, v, S = _densest(G, proper=True)
    if S is None:
        return BalanceVerdict(True, rho, None)
    if e * G.vertex_count >= G.e * v:
        return BalanceVerdict(False, rho, S)
    return BalanceVerdict(True, rho, None)


def max_density(G: Hypergraph) -> tuple[Fraction, tuple[int, ...]]:
    """Maximum induced density over nonempty vertex sets with an attaining set."""
    _check_size(G)
    if G.e == 0:
        raise HypergraphError("no_edges", "maximum density is undefined without edges")
    e, v, S = _densest(G, proper=False)
    assert S is not None
    return Fraction(e, v), S


def max_density_bruteforce(G: Hypergraph, proper: bool = False) -> tuple[Fraction, tuple[int, ...]]:
    """Reference implementation over all ``2^n`` subsets, same tie-break."""
    n = G.vertex_count
    full = (1 << n) - 1
    edge_masks = [sum(1 << u for u in f) for f in G.edges]
    best_e, best_v, best_S = 0, 1, None
    for mask in range(1, full + 1):
        if proper and mask == full:
            continue
        edges = sum(1 for m in edge_masks if m & mask == m)
        if not proper and edges == 0:
            continue
        S = _members(mask)
        if _better(edges, len(S), S, best_e, best_v, best_S):
            best_e, best_v, best_S = edges, len(S), S
    if best_S is None:
        raise HypergraphError("no_edges", "no admissible subset")
    return Fraction(best_e, best_v), best_S
