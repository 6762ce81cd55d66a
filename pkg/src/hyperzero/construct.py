"""Strictly balanced s-uniform hypergraphs of a prescribed density."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .balance import is_strictly_balanced
from .hypercore import Hypergraph, HypergraphError, make_hypergraph

DEFAULT_MAX_SEARCH_VERTICES = 8


class ConstructionError(HypergraphError):
    pass


class InfeasibleDensity(ConstructionError):
    def __init__(self, message: str):
        super().__init__("infeasible", message)


class SearchCapExceeded(ConstructionError):
    def __init__(self, message: str):
        super().__init__("search_cap", message)


@dataclass(frozen=True)
class DensityTarget:
    arity: int
    rho: Fraction

    def __post_init__(self):
        if self.arity < 2:
            raise ConstructionError("arity", f"arity must be >= 2, got {self.arity}")
        object.__setattr__(self, "rho", Fraction(self.rho))
        if self.rho <= 0:
            raise ConstructionError("rho", f"density must be positive, got {self.rho}")

    @property
    def tree_edges(self) -> int | None:
        """``k`` with ``rho = k / (1 + k(s-1))``, if there is one."""
        a, b = self.rho.numerator, self.rho.denominator
        d = b - a * (self.arity - 1)
        if d > 0 and a % d == 0:
            return a // d
        return None

    @property
    def feasible(self) -> bool:
        return self.rho >= Fraction(1, self.arity - 1) or self.tree_edges is not None


def construct_tree(s: int, k: int) -> Hypergraph:
    """Loose path with ``k`` edges: consecutive edges share one vertex."""
    if s < 2:
        raise ConstructionError("arity", f"arity must be >= 2, got {s}")
    if k <= 0:
        raise ConstructionError("edges", f"a tree needs k >= 1 edges, got {k}")
    edges = [list(range((s - 1) * i, (s - 1) * i + s)) for i in range(k)]
    return make_hypergraph(s, 1 + k * (s - 1), edges)


def construct_circular(s: int, m: int, n: int) -> Hypergraph:
    """``m`` edges of size ``s`` laid around a circle of ``n`` vertices.

    With ``r = (s-1)m - n`` and ``I = {floor(k m / r) : 1 <= k <= r}``, edge
    ``k+1`` starts ``s-2`` after edge ``k`` when ``k+1`` is in ``I`` and
    ``s-1`` after it otherwise.  Requires ``m >= 3`` and ``0 <= r < m``.
    """
    if s < 3:
        raise ConstructionError("arity", f"circular construction needs s >= 3, got {s}")
    if m < 3:
        raise ConstructionError(
            "numerator", f"numerator m={m} < 3; scale the fraction by 3 before calling"
        )
    r = (s - 1) * m - n
    if not 0 <= r <= m - 1:
        raise ConstructionError(
            "range",
            f"need 1/(s-1) <= m/n < 1/(s-2), i.e. 0 <= (s-1)m-n <= m-1; got r={r} for s={s}, m={m}, n={n}",
        )
    steps = {(k * m) // r for k in range(1, r + 1)} if r else set()
    edges = []
    start = 0  # 0-based position of vertex "1"
    for k in range(1, m + 1):
        if k > 1:
            start += s - 2 if k in steps else s - 1
        edges.append([(start + j) % n for j in range(s)])
    return make_hypergraph(s, n, edges)


def lift_arity(G: Hypergraph, check: bool = True) -> Hypergraph:
    """Raise the arity by one while keeping density and strict balance.

    Two disjoint copies are taken; every edge of one copy is extended by the
    lowest-id vertex of the other.
    """
    if check and not is_strictly_balanced(G).strictly_balanced:
        raise ConstructionError("not_balanced", "arity lift requires a strictly balanced input")
    n = G.vertex_count
    v1, v2 = 0, n
    edges = [list(f) + [v2] for f in G.edges]
    edges += [[u + n for u in f] + [v1] for f in G.edges]
    return make_hypergraph(G.arity + 1, 2 * n, edges)


def search_strictly_balanced_graph(rho: Fraction, max_vertices: int) -> Hypergraph | None:
    """First strictly balanced graph of density ``rho`` in the order
    (vertex count, edge count, lexicographic edge set); ``None`` if none has
    at most ``max_vertices`` vertices."""
    rho = Fraction(rho)
    for v in range(2, max_vertices + 1):
        if (rho * v).denominator != 1:
            continue
        e = int(rho * v)
        pairs = [(a, b) for a in range(v) for b in range(a + 1, v)]
        if e > len(pairs):
            continue
        hit = _first_balanced_edge_set(v, e, pairs, rho)
        if hit is not None:
            return hit
    return None


def _first_balanced_edge_set(v: int, e: int, pairs: list[tuple[int, int]], rho: Fraction):
    # Removing a vertex of degree d leaves density (e-d)/(v-1), which is below
    # e/v only when d > e/v; so every vertex needs degree > rho.
    min_deg = math.floor(rho) + 1
    remaining = [0] * v
    for a, b in pairs:
        remaining[a] += 1
        remaining[b] += 1
    deg = [0] * v
    chosen: list[tuple[int, int]] = []

    def rec(i: int, need: int):
        if need == 0:
            if all(d >= min_deg for d in deg):
                G = make_hypergraph(2, v, chosen)
                if is_strictly_balanced(G).strictly_balanced:
                    return G
            return None
        if len(pairs) - i < need:
            return None
        a, b = pairs[i]
        # include
        deg[a] += 1
        deg[b] += 1
        remaining[a] -= 1
        remaining[b] -= 1
        chosen.append((a, b))
        if all(deg[x] + remaining[x] >= min_deg for x in (a, b)):
            hit = rec(i + 1, need - 1)
            if hit is not None:
                return hit
        chosen.pop()
        deg[a] -= 1
        deg[b] -= 1
        # exclude
        if deg[a] + remaining[a] >= min_deg and deg[b] + remaining[b] >= min_deg:
            hit = rec(i + 1, need)
            if hit is not None:
                return hit
        remaining[a] += 1
        remaining[b] += 1
        return None

    return rec(0, e)


def circular_arity(rho: Fraction) -> int | None:
    """Smallest ``s' >= 3`` with ``1/(s'-1) <= rho < 1/(s'-2)``."""
    if rho >= 1:
        return None
    s = math.ceil(1 / rho) + 1
    return max(s, 3)


def construct_strictly_balanced(
    target: DensityTarget, max_search_vertices: int = DEFAULT_MAX_SEARCH_VERTICES
) -> Hypergraph:
    s, rho = target.arity, target.rho
    if not target.feasible:
        raise InfeasibleDensity(
            f"no strictly balanced {s}-uniform hypergraph has density {rho}: it is below "
            f"1/(s-1) = {Fraction(1, s - 1)} and not of the form k/(1+k(s-1)) for a positive integer k"
        )
    k = target.tree_edges
    if k is not None:
        G = construct_tree(s, k)
    elif rho < 1:
        s0 = circular_arity(rho)
        assert s0 is not None and s0 <= s
        m, n = rho.numerator, rho.denominator
        if m < 3:
            m, n = 3 * m, 3 * n
        G = construct_circular(s0, m, n)
        for _ in range(s - s0):
            G = lift_arity(G, check=False)
    else:
        base = search_strictly_balanced_graph(rho, max_search_vertices)
        if base is None:
            raise SearchCapExceeded(
                f"no strictly balanced graph of density {rho} on at most "
                f"{max_search_vertices} vertices; raise the search cap"
            )
        G = base
        for _ in range(s - 2):
            G = lift_arity(G, check=False)
    verdict = is_strictly_balanced(G)
    if not verdict.strictly_balanced or verdict.density != rho:
        raise ConstructionError(
            "verification", f"constructed hypergraph failed verification: {verdict}"
        )
    return G
