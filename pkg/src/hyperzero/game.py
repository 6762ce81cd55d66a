"""The Ehrenfeucht game on two hypergraphs and Duplicator's look-ahead strategy.

Each round Spoiler picks a vertex in one of the hypergraphs and Duplicator
answers in the other.  After ``k`` rounds Duplicator wins when the chosen
vertices induce a partial isomorphism: for every s-set of distinct rounds,
the picks form an edge on one side exactly when they do on the other.
"""
from __future__ import annotations

import enum
import itertools
import sys
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence, TextIO

import numpy as np

from .closure import closure_t, finite_closure_constants, pinned_isomorphic
from .extension import Exponent
from .hypercore import Hypergraph


class Status(str, enum.Enum):
    ONGOING = "ongoing"
    SPOILER_WON = "spoiler_won"
    DUPLICATOR_WON = "duplicator_won"


class IllegalMove(ValueError):
    pass


RESIGN = None


@dataclass
class GameState:
    g1: Hypergraph
    g2: Hypergraph
    k: int
    history: list[tuple[int, int]] = field(default_factory=list)
    pending: tuple[int, int] | None = None  # (side, vertex); side is 1 or 2
    status: Status = Status.ONGOING
    resigned: str | None = None  # "spoiler" | "duplicator"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"need k >= 1 rounds, got {self.k}")
        if self.g1.arity != self.g2.arity:
            raise ValueError("both hypergraphs must have the same arity")

    @property
    def arity(self) -> int:
        return self.g1.arity

    @property
    def round(self) -> int:
        """1-based number of the round in progress (or just finished)."""
        return len(self.history) + (1 if self.pending is not None else 0)

    @property
    def to_move(self) -> str | None:
        if self.status is not Status.ONGOING:
            return None
        return "duplicator" if self.pending is not None else "spoiler"

    def graph(self, side: int) -> Hypergraph:
        return self.g1 if side == 1 else self.g2

    def picks(self, side: int) -> list[int]:
        return [pair[side - 1] for pair in self.history]

    def forced_reply(self) -> int | None:
        """The paired vertex when Spoiler's pending pick repeats an earlier one."""
        if self.pending is None:
            return None
        side, x = self.pending
        for pair in self.history:
            if pair[side - 1] == x:
                return pair[2 - side]
        return None


def spoiler_move(state: GameState, side: int, vertex: int) -> None:
    if state.to_move != "spoiler":
        raise IllegalMove("it is not Spoiler's turn")
    if side not in (1, 2):
        raise IllegalMove(f"side must be 1 or 2, got {side}")
    if not 0 <= vertex < state.graph(side).vertex_count:
        raise IllegalMove(f"vertex {vertex} is not in G{side}")
    state.pending = (side, vertex)


def duplicator_move(state: GameState, vertex: int | None) -> None:
    """Answer the pending pick; ``None`` resigns."""
    if state.to_move != "duplicator":
        raise IllegalMove("it is not Duplicator's turn")
    side, x = state.pending
    if vertex is RESIGN:
        state.pending = None
        state.status = Status.SPOILER_WON
        state.resigned = "duplicator"
        return
    other = 3 - side
    forced = state.forced_reply()
    if forced is not None:
        if vertex != forced:
            raise IllegalMove(f"Spoiler repeated a pick; the reply must be {forced}")
    else:
        if not 0 <= vertex < state.graph(other).vertex_count:
            raise IllegalMove(f"vertex {vertex} is not in G{other}")
        if vertex in state.picks(other):
            raise IllegalMove(f"vertex {vertex} of G{other} was already chosen")
    pair = (x, vertex) if side == 1 else (vertex, x)
    state.history.append(pair)
    state.pending = None
    if len(state.history) == state.k:
        state.status = adjudicate(state)


def spoiler_resign(state: GameState) -> None:
    if state.to_move != "spoiler":
        raise IllegalMove("it is not Spoiler's turn")
    state.status = Status.DUPLICATOR_WON
    state.resigned = "spoiler"


def _distinct_pairs(history: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    out, seen = [], set()
    for pair in history:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def is_partial_isomorphism(g1: Hypergraph, g2: Hypergraph, pairs: Sequence[tuple[int, int]]) -> bool:
    pairs = _distinct_pairs(pairs)
    xs = [a for a, _ in pairs]
    ys = [b for _, b in pairs]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        return False
    s = g1.arity
    for idx in itertools.combinations(range(len(pairs)), s):
        e1 = tuple(sorted(xs[i] for i in idx)) in g1.edge_set
        e2 = tuple(sorted(ys[i] for i in idx)) in g2.edge_set
        if e1 != e2:
            return False
    return True


def adjudicate(state: GameState) -> Status:
    if len(state.history) < state.k:
        raise IllegalMove(f"only {len(state.history)} of {state.k} rounds played")
    ok = is_partial_isomorphism(state.g1, state.g2, state.history)
    return Status.DUPLICATOR_WON if ok else Status.SPOILER_WON


# ---------------------------------------------------------------------------
# Duplicator


def lookahead_schedule(k: int, alpha: Exponent) -> tuple[int, ...]:
    """``(a_1, ..., a_k)`` with ``a_k = 0``.

    After round ``r`` Duplicator keeps the ``a_r``-types of the chosen tuples
    equal.  ``a_r`` must cover the closure of ``r + 1`` vertices at depth
    ``a_{r+1}``, which has at most ``K + r + 1`` vertices.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    a = [0] * k
    for r in range(k - 1, 0, -1):
        nxt = a[r]
        if nxt == 0:
            a[r - 1] = max(nxt, 1)
        else:
            _, K = finite_closure_constants(nxt, r + 1, alpha)
            a[r - 1] = max(nxt, K + 1)
    return tuple(a)


class ClosureCache:
    """Memoised ``cl_t`` per hypergraph, keyed by the vertex set.

    With a ``limit`` the answer is ``None`` when the closure has more than
    ``limit`` vertices; such partial results are remembered by their size.
    """

    def __init__(self, alpha: Exponent):
        self.alpha = alpha
        self._memo: dict[tuple[int, int, frozenset[int]], frozenset[int]] = {}
        self._over: dict[tuple[int, int, frozenset[int]], int] = {}
        self._closed: dict[tuple[int, int], list[frozenset[int]]] = {}

    def too_small(self, G: Hypergraph, X: frozenset[int], t: int, size: int) -> bool:
        """Some known closed set of fewer than ``size`` vertices contains ``X``
        (closures are monotone, so ``cl_t(X)`` is that small too)."""
        return any(len(C) < size and X <= C for C in self._closed.get((id(G), t), ()))

    def __call__(
        self, G: Hypergraph, X: Sequence[int] | frozenset[int], t: int, limit: int | None = None
    ) -> frozenset[int] | None:
        key = (id(G), t, frozenset(X))
        hit = self._memo.get(key)
        if hit is not None:
            return hit if limit is None or len(hit) <= limit else None
        if not key[2]:
            return frozenset()
        if limit is not None and self._over.get(key, -1) > limit:
            return None
        res = closure_t(G, key[2], t, self.alpha, limit=limit)
        if res.truncated:
            self._over[key] = len(res.closure)
            return None
        self._memo[key] = res.closure
        self._closed.setdefault((id(G), t), []).append(res.closure)
        return res.closure


def _inner_edges(G: Hypergraph, S: frozenset[int]) -> int:
    return sum(1 for u in S for f in G.incidence[u] if min(f) == u and all(w in S for w in f))


def duplicator_respond(
    state: GameState,
    schedule: Sequence[int],
    alpha: Exponent,
    cache: ClosureCache | None = None,
) -> int | None:
    """A reply keeping the ``a_r``-types of the chosen tuples equal, or
    ``None`` (resign) when no vertex does."""
    if state.to_move != "duplicator":
        raise IllegalMove("it is not Duplicator's turn")
    forced = state.forced_reply()
    if forced is not None:
        return forced
    cache = cache or ClosureCache(alpha)
    side, x = state.pending
    other = 3 - side
    Gs, Go = state.graph(side), state.graph(other)
    pairs = _distinct_pairs(state.history)
    X = [p[side - 1] for p in pairs]
    Y = [p[other - 1] for p in pairs]
    t = schedule[state.round - 1]

    target = cache(Gs, X + [x], t)
    t_edges = _inner_edges(Gs, target)
    base = cache(Go, Y, t)
    used = set(Y)

    # cheap ordering heuristic: match x's adjacency to earlier picks and its degree
    adj_x = {i for i, u in enumerate(X) if u in Gs.neighbours[x]}
    deg_x = Gs.degree(x)

    def key(w: int):
        adj_w = {i for i, u in enumerate(Y) if u in Go.neighbours[w]}
        return (len(adj_w ^ adj_x), abs(Go.degree(w) - deg_x), w)

    inside = sorted((w for w in base if w not in used), key=key)
    outside = sorted((w for w in range(Go.vertex_count) if w not in base and w not in used), key=key)
    for w in itertools.chain(inside, outside):
        B = base | {w}
        if cache.too_small(Go, B, t, len(target)):
            continue
        cw = cache(Go, B, t, limit=len(target))
        if cw is None or len(cw) != len(target) or _inner_edges(Go, cw) != t_edges:
            continue
        if pinned_isomorphic(Gs, target, X + [x], Go, cw, Y + [w]):
            return w
    return RESIGN


# ---------------------------------------------------------------------------
# Spoiler policies


class SpoilerPolicy(Protocol):
    name: str

    def choose(self, state: GameState, rng: np.random.Generator) -> tuple[int, int] | None:
        """``(side, vertex)``, or ``None`` to resign."""


class RandomSpoiler:
    name = "random"

    def choose(self, state, rng):
        side = int(rng.integers(1, 3))
        G = state.graph(side)
        taken = set(state.picks(side))
        fresh = [u for u in range(G.vertex_count) if u not in taken] or list(range(G.vertex_count))
        return side, int(fresh[int(rng.integers(len(fresh)))])


class GreedyDegreeSpoiler:
    """Picks the unchosen vertex with the most edges meeting earlier picks on
    its side, then the highest degree.  The side with the better candidate
    wins; ties go to the side due by alternation."""

    name = "greedy"

    def choose(self, state, rng):
        due = 1 if state.round % 2 == 0 else 2  # round about to start is state.round + 1
        best = None
        for side in (due, 3 - due):
            G = state.graph(side)
            taken = set(state.picks(side))
            for u in range(G.vertex_count):
                if u in taken:
                    continue
                touch = sum(1 for f in G.incidence[u] if any(w in taken for w in f))
                score = (touch, G.degree(u))
                if best is None or score > best[0]:
                    best = (score, side, u)
        if best is None:  # everything already chosen: repeating is legal
            return due, state.picks(due)[0]
        return best[1], best[2]


class HumanSpoiler:
    """Reads ``<side> <vertex>`` from a terminal; EOF resigns."""

    name = "human"

    def __init__(self, stdin: TextIO | None = None, stdout: TextIO | None = None):
        self.stdin = stdin or sys.stdin
        self.stdout = stdout or sys.stderr

    def choose(self, state, rng):
        out = self.stdout
        print(f"round {state.round + 1} of {state.k}; picks so far (G1, G2): {state.history}", file=out)
        while True:
            print("spoiler> side (1|2) and vertex: ", end="", file=out, flush=True)
            line = self.stdin.readline()
            if not line:
                print("", file=out)
                return None
            parts = line.split()
            if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
                print("  expected two integers, e.g. '1 17'", file=out)
                continue
            side, v = int(parts[0]), int(parts[1])
            if side not in (1, 2):
                print("  side must be 1 or 2", file=out)
                continue
            if not 0 <= v < state.graph(side).vertex_count:
                print(f"  vertex must lie in 0..{state.graph(side).vertex_count - 1}", file=out)
                continue
            return side, v


POLICIES: dict[str, Callable[[], SpoilerPolicy]] = {
    "random": RandomSpoiler,
    "greedy": GreedyDegreeSpoiler,
    "human": HumanSpoiler,
}


# ---------------------------------------------------------------------------
# matches


@dataclass
class MatchResult:
    state: GameState
    transcript: list[dict]
    schedule: tuple[int, ...]

    @property
    def duplicator_won(self) -> bool:
        return self.state.status is Status.DUPLICATOR_WON


def play_match(
    g1: Hypergraph,
    g2: Hypergraph,
    k: int,
    spoiler: SpoilerPolicy,
    alpha: Exponent,
    seed: int | np.random.Generator = 0,
    schedule: Sequence[int] | None = None,
    on_round: Callable[[dict], None] | None = None,
) -> MatchResult:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.Philox(seed))
    schedule = tuple(schedule) if schedule is not None else lookahead_schedule(k, alpha)
    if len(schedule) != k:
        raise ValueError(f"schedule has {len(schedule)} entries for {k} rounds")
    state = GameState(g1, g2, k)
    cache = ClosureCache(alpha)
    transcript: list[dict] = []
    while state.status is Status.ONGOING:
        pick = spoiler.choose(state, rng)
        r = state.round + 1
        if pick is None:
            spoiler_resign(state)
            entry = {"round": r, "spoiler": "resign"}
        else:
            side, x = pick
            spoiler_move(state, side, x)
            forced = state.forced_reply() is not None
            w = duplicator_respond(state, schedule, alpha, cache)
            duplicator_move(state, w)
            entry = {
                "round": r,
                "side": side,
                "spoiler": x,
                "duplicator": "resign" if w is None else w,
                "forced": forced,
                "t": schedule[r - 1],
            }
        transcript.append(entry)
        if on_round is not None:
            on_round(entry)
    return MatchResult(state, transcript, schedule)


def verdict_record(result: MatchResult) -> dict:
    st = result.state
    return {
        "verdict": st.status.value,
        "resigned": st.resigned,
        "rounds": len(st.history),
        "schedule": list(result.schedule),
    }


# ---------------------------------------------------------------------------
# tournaments


@dataclass(frozen=True)
class MatchSpec:
    arity: int
    n: int
    m: int
    alpha: Exponent
    k: int
    policy: str
    seed: int
    index: int


def random_match(spec: MatchSpec) -> dict:
    """One match on fresh ``G^s(n, p)`` and ``G^s(m, p)`` samples, each with
    ``p = size^-alpha``."""
    from .randmodel import rng_for, sample

    a = spec.alpha
    g1 = sample(spec.arity, spec.n, a.p(spec.n), rng_for(spec.seed, spec.index, 1))
    g2 = sample(spec.arity, spec.m, a.p(spec.m), rng_for(spec.seed, spec.index, 2))
    res = play_match(g1, g2, spec.k, POLICIES[spec.policy](), a, rng_for(spec.seed, spec.index, 3))
    rec = verdict_record(res)
    rec["game"] = spec.index
    rec["transcript"] = res.transcript
    return rec


def run_tournament(
    arity: int,
    n: int,
    m: int,
    alpha: Exponent,
    k: int,
    policy: str,
    games: int,
    seed: int = 0,
    jobs: int = 1,
) -> dict:
    if policy == "human":
        raise ValueError("tournaments need an automatic Spoiler")
    specs = [MatchSpec(arity, n, m, alpha, k, policy, seed, g) for g in range(games)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(random_match, specs))
    else:
        records = [random_match(s) for s in specs]
    wins = sum(1 for r in records if r["verdict"] == Status.DUPLICATOR_WON.value)
    resigns = sum(1 for r in records if r["resigned"] == "duplicator")
    return {
        "games": games,
        "duplicator_wins": wins,
        "spoiler_wins": games - wins,
        "duplicator_resigns": resigns,
        "duplicator_win_rate": wins / games if games else 0.0,
        "schedule": list(lookahead_schedule(k, alpha)),
        "matches": records,
    }
