"""Rooted hypergraphs and their classification relative to an exponent.

The exponent is a rational standing in for an irrational one.  With
``alpha = num/den`` in lowest terms, ``v*den == e*num`` forces ``num | v`` and
``den | e``; so if ``max(num, den) > B`` no type ``(v, e)`` with
``1 <= v, e <= B`` sits exactly on the boundary ``v = e*alpha``.  Every
comparison checks its type against ``B`` and refuses to answer outside it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hypercore import Hypergraph, HypergraphError

DEFAULT_BOUND = 64


class GenericityError(ValueError):
    def __init__(self, v: int, e: int, alpha: "Exponent"):
        super().__init__(
            f"type (v={v}, e={e}) is outside the genericity bound B={alpha.bound} of alpha={alpha}"
        )
        self.v, self.e = v, e


@dataclass(frozen=True)
class Exponent:
    """Edge-probability exponent ``alpha = num/den`` (so ``p = n^-alpha``)."""

    num: int
    den: int
    bound: int = 0  # 0 -> min(DEFAULT_BOUND, max(num, den) - 1)

    def __post_init__(self):
        if self.num <= 0 or self.den <= 0:
            raise ValueError(f"alpha must be a positive fraction, got {self.num}/{self.den}")
        if math.gcd(self.num, self.den) != 1:
            raise ValueError(f"alpha {self.num}/{self.den} is not in lowest terms")
        if self.bound == 0:
            object.__setattr__(self, "bound", min(DEFAULT_BOUND, max(self.num, self.den) - 1))
        if self.bound < 1:
            raise ValueError(
                f"alpha {self.num}/{self.den} admits no genericity bound >= 1; "
                "use a fraction with a larger numerator or denominator"
            )
        if max(self.num, self.den) <= self.bound:
            raise ValueError(
                f"genericity bound B={self.bound} must be below max(num, den)={max(self.num, self.den)}"
            )

    @classmethod
    def parse(cls, text: str, bound: int | None = None) -> "Exponent":
        num, _, den = text.partition("/")
        f = Fraction(int(num), int(den or 1))
        return cls(f.numerator, f.denominator, bound or 0)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def check(self, v: int, e: int) -> None:
        if v > self.bound or e > self.bound:
            raise GenericityError(v, e, self)

    def excess(self, v: int, e: int) -> int:
        """Sign-exact ``den * (v - e*alpha)``; never zero for ``v >= 1`` in range."""
        self.check(v, e)
        return v * self.den - e * self.num

    def dense(self, v: int, e: int) -> bool:
        return self.excess(v, e) < 0

    def sparse(self, v: int, e: int) -> bool:
        return self.excess(v, e) > 0

    def min_dense_edges(self, v: int) -> int:
        """Least ``e`` with ``v - e*alpha < 0``."""
        return v * self.den // self.num + 1

    def p(self, n: int) -> float:
        return n ** (-self.num / self.den)


@dataclass(frozen=True)
class RootedHypergraph:
    graph: Hypergraph
    roots: tuple[int, ...]

    def __post_init__(self):
        roots = tuple(self.roots)
        object.__setattr__(self, "roots", roots)
        if len(set(roots)) != len(roots):
            raise HypergraphError("roots", f"repeated root in {roots}")
        if any(r < 0 or r >= self.graph.vertex_count for r in roots):
            raise HypergraphError("roots", f"root outside 0..{self.graph.vertex_count - 1}")
        if len(roots) >= self.graph.vertex_count:
            raise HypergraphError("roots", "the root set must be a proper subset of the vertices")

    @property
    def r(self) -> int:
        return len(self.roots)

    @property
    def nonroots(self) -> tuple[int, ...]:
        R = set(self.roots)
        return tuple(u for u in range(self.graph.vertex_count) if u not in R)

    @property
    def ext_type(self) -> tuple[int, int]:
        R = set(self.roots)
        e = sum(1 for f in self.graph.edges if any(u not in R for u in f))
        return self.graph.vertex_count - len(R), e

    @property
    def pattern_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edges containing at least one non-root."""
        R = set(self.roots)
        return tuple(f for f in self.graph.edges if any(u not in R for u in f))


@dataclass(frozen=True)
class Taxonomy:
    ext_type: tuple[int, int]
    dense: bool
    rigid: bool
    safe: bool
    minimally_safe: bool

    @property
    def polarity(self) -> str:
        return "dense" if self.dense else "sparse"


@dataclass(frozen=True)
class Witness:
    """``rigid_subextension``: S with (R, H|S) rigid, set when not safe.
    ``safe_nailextension``: S with (S, H) safe, set when not rigid."""

    rigid_subextension: tuple[int, ...] | None
    safe_nailextension: tuple[int, ...] | None


class _Lattice:
    """Induced edge counts of every S with R <= S <= V, as bitmasks."""

    def __init__(self, rh: RootedHypergraph, alpha: Exponent):
        G = rh.graph
        self.alpha = alpha
        self.n = G.vertex_count
        self.full = (1 << self.n) - 1
        self.R = sum(1 << u for u in rh.roots)
        self.Q = self.full & ~self.R
        masks = [sum(1 << u for u in f) for f in G.edges]
        self.e_in: dict[int, int] = {}
        sub = self.Q
        while True:
            S = self.R | sub
            self.e_in[S] = sum(1 for m in masks if m & S == m)
            if sub == 0:
                break
            sub = (sub - 1) & self.Q
        self.supersets = sorted(self.e_in, key=lambda S: (S.bit_count(), _bits(S)))

    def dense_between(self, A: int, B: int) -> bool:
        """(A, H|B) dense, for A strictly inside B."""
        v = (B & ~A).bit_count()
        e = self.e_in[B] - self.e_in[A]
        return self.alpha.dense(v, e)

    def rigid(self, A: int, B: int) -> bool:
        return all(self.dense_between(S, B) for S in self._between(A, B, lo=True, hi=False))

    def safe(self, A: int, B: int) -> bool:
        return not any(self.dense_between(A, S) for S in self._between(A, B, lo=False, hi=True))

    def _between(self, A: int, B: int, lo: bool, hi: bool):
        free = B & ~A
        sub = free
        while True:
            S = A | sub
            if (sub != free or hi) and (sub != 0 or lo):
                yield S
            if sub == 0:
                break
            sub = (sub - 1) & free


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return tuple(out)


def classify_rooted(rh: RootedHypergraph, alpha: Exponent) -> Taxonomy:
    """Type, polarity, rigidity and safety of ``(R, H)``.

    rigid: ``(S, H)`` dense for all ``R <= S < V``.
    safe: ``(R, H|S)`` sparse for all ``R < S <= V``.
    minimally safe: safe, and no ``(S, H)`` with ``R < S < V`` is safe.
    """
    L = _Lattice(rh, alpha)
    v, e = rh.ext_type
    dense = alpha.dense(v, e)
    rigid = L.rigid(L.R, L.full)
    safe = L.safe(L.R, L.full)
    minimal = safe and not any(
        L.safe(S, L.full) for S in L._between(L.R, L.full, lo=False, hi=False)
    )
    return Taxonomy((v, e), dense, rigid, safe, minimal)


def witness_structure(rh: RootedHypergraph, alpha: Exponent) -> Witness:
    """Smallest (then lexicographically first) rigid subextension when
    ``(R, H)`` is not safe, and safe nailextension when it is not rigid.
    The nailextension may be ``R`` itself."""
    L = _Lattice(rh, alpha)
    rigid_sub = safe_nail = None
    if not L.safe(L.R, L.full):
        for S in L.supersets:
            if S != L.R and L.rigid(L.R, S):
                rigid_sub = _bits(S)
                break
    if not L.rigid(L.R, L.full):
        for S in L.supersets:
            if S != L.full and L.safe(S, L.full):
                safe_nail = _bits(S)
                break
    return Witness(rigid_sub, safe_nail)


def expected_extensions(
    rh: RootedHypergraph, n: int, alpha: Exponent | None = None, p: float | None = None
) -> float:
    """``E N_x``: ordered tuples of distinct non-root images times ``p^e``."""
    v, e = rh.ext_type
    r = rh.r
    if n <= v + r:
        raise ValueError(f"need n > v + r = {v + r}, got n={n}")
    if (alpha is None) == (p is None):
        raise ValueError("give exactly one of alpha or p")
    if p is None:
        p = alpha.p(n)
    falling = math.prod(range(n - r - v + 1, n - r + 1))
    return float(falling) * p**e


def rooted(G: Hypergraph, roots: Sequence[int]) -> RootedHypergraph:
    return RootedHypergraph(G, tuple(roots))
