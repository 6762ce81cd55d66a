"""The binomial random hypergraph and Monte Carlo experiments on it.

Random streams come from numpy's counter-based Philox generator keyed by a
``SeedSequence`` built from ``(master_seed, *work_unit_index)``, so each
replicate is reproducible on its own and results do not depend on how the
replicates are scheduled.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .balance import is_strictly_balanced, max_density
from .closure import closure_t, finite_closure_constants
from .extension import Exponent, RootedHypergraph, classify_rooted, expected_extensions
from .formats import parse_hypergraph, read_hypergraph
from .hypercore import Hypergraph, HypergraphError, count_automorphisms, make_hypergraph

RNG_DESCRIPTION = "numpy Philox4x64 keyed by SeedSequence([master_seed, *unit_index])"


def rng_for(master_seed: int, *index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([master_seed, *index])))


# ---------------------------------------------------------------------------
# sampling


def _colex_unrank(ranks: np.ndarray, n: int, s: int) -> np.ndarray:
    out = np.empty((len(ranks), s), dtype=np.int64)
    rem = ranks.astype(np.int64, copy=True)
    for j in range(s, 0, -1):
        table = np.array([math.comb(c, j) for c in range(n)], dtype=np.int64)
        c = np.searchsorted(table, rem, side="right") - 1
        out[:, j - 1] = c
        rem -= table[c]
    return out


def sample(s: int, n: int, p: float, seed: int | np.random.Generator) -> Hypergraph:
    """``G^s(n, p)``: every s-subset is an edge independently with probability p.

    Edges are located by geometric jumps over the colex ranks of the
    s-subsets, so the cost is proportional to the number of edges drawn.
    """
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if n < s:
        raise ValueError(f"need n >= s, got n={n}, s={s}")
    rng = seed if isinstance(seed, np.random.Generator) else rng_for(int(seed))
    total = math.comb(n, s)
    if total >= 2**62:
        raise ValueError("C(n, s) too large for 64-bit ranks")
    if p == 0.0:
        ranks = np.empty(0, dtype=np.int64)
    else:
        mu = total * p
        chunk = int(mu + 6 * math.sqrt(mu) + 16)
        parts = []
        pos = -1
        while True:
            steps = rng.geometric(p, size=chunk).astype(np.int64)
            cs = pos + np.cumsum(steps)
            keep = cs[cs < total]
            parts.append(keep)
            if len(keep) < len(cs):
                break
            pos = int(cs[-1])
        ranks = np.concatenate(parts)
    verts = _colex_unrank(ranks, n, s)
    edges = tuple(map(tuple, verts.tolist()))
    return Hypergraph(s, n, edges, frozenset(edges))


# ---------------------------------------------------------------------------
# counting


def _search_order(pattern: Hypergraph, fixed: Sequence[int]) -> list[int]:
    placed = set(fixed)
    todo = [u for u in range(pattern.vertex_count) if u not in placed]
    order = []
    while todo:
        u = max(
            todo,
            key=lambda x: (
                sum(1 for f in pattern.incidence[x] if any(w in placed for w in f)),
                pattern.degree(x),
                -x,
            ),
        )
        order.append(u)
        placed.add(u)
        todo.remove(u)
    return order


def _embeddings(
    G: Hypergraph,
    pattern: Hypergraph,
    fixed: dict[int, int],
    induced: bool,
    stop_at: int | None = None,
) -> int:
    """Count injective maps extending ``fixed`` that send pattern edges (those
    with a free vertex) onto edges of ``G``; with ``induced`` also reflect them."""
    if pattern.arity != G.arity:
        raise HypergraphError("arity", f"pattern arity {pattern.arity} != host arity {G.arity}")
    order = _search_order(pattern, list(fixed))
    img = dict(fixed)
    used = set(img.values())
    n_host = G.vertex_count
    count = 0

    def candidates(u: int):
        for f in pattern.incidence[u]:
            placed = [img[w] for w in f if w in img]
            if placed:
                a = placed[0]
                out = set()
                for g in G.incidence[a]:
                    if all(b in g for b in placed):
                        out.update(w for w in g if w not in used)
                return sorted(out)
        return [w for w in range(n_host) if w not in used]

    def ok(u: int, w: int) -> bool:
        c1 = 0
        for f in pattern.incidence[u]:
            if all(x in img for x in f if x != u):
                if tuple(sorted(w if x == u else img[x] for x in f)) not in G.edge_set:
                    return False
                c1 += 1
        if induced:
            c2 = sum(1 for g in G.incidence[w] if all(y in used for y in g if y != w))
            if c2 != c1:
                return False
        return True

    def rec(i: int) -> bool:
        nonlocal count
        if i == len(order):
            count += 1
            return stop_at is not None and count >= stop_at
        u = order[i]
        for w in candidates(u):
            if ok(u, w):
                img[u] = w
                used.add(w)
                stop = rec(i + 1)
                del img[u]
                used.discard(w)
                if stop:
                    return True
        return False

    rec(0)
    return count


def count_copies(G: Hypergraph, pattern: Hypergraph, induced: bool = False) -> int:
    """Number of copies of ``pattern`` in ``G``: embeddings / automorphisms.

    By default a copy is any sub-hypergraph isomorphic to the pattern; with
    ``induced=True`` the copy must also carry no extra edges.
    """
    if pattern.vertex_count > G.vertex_count:
        return 0
    emb = _embeddings(G, pattern, {}, induced)
    a = count_automorphisms(pattern)
    assert emb % a == 0
    return emb // a


def contains(G: Hypergraph, pattern: Hypergraph) -> bool:
    if pattern.vertex_count > G.vertex_count:
        return False
    return _embeddings(G, pattern, {}, induced=False, stop_at=1) > 0


def count_copies_bruteforce(G: Hypergraph, pattern: Hypergraph, induced: bool = False) -> int:
    """Reference count over all vertex subsets of the pattern's size."""
    import itertools

    k = pattern.vertex_count
    total = 0
    pat_edges = pattern.edges
    for S in itertools.combinations(range(G.vertex_count), k):
        for perm in itertools.permutations(S):
            imgs = {tuple(sorted(perm[u] for u in f)) for f in pat_edges}
            if not imgs <= G.edge_set:
                continue
            if induced:
                inside = set(S)
                here = {f for u in S for f in G.incidence[u] if all(w in inside for w in f)}
                if here != imgs:
                    continue
            total += 1
    return total // count_automorphisms(pattern)


def count_extensions(G: Hypergraph, x: Sequence[int], rh: RootedHypergraph) -> int:
    """Ordered tuples of distinct vertices outside ``x`` realising every
    pattern edge that has a non-root (extra edges allowed)."""
    if rh.graph.arity != G.arity:
        raise HypergraphError("arity", f"pattern arity {rh.graph.arity} != host arity {G.arity}")
    if len(x) != rh.r:
        raise ValueError(f"expected {rh.r} root images, got {len(x)}")
    if len(set(x)) != len(x):
        raise ValueError("root images must be distinct")
    # drop edges among roots only: they impose nothing
    pat = make_hypergraph(rh.graph.arity, rh.graph.vertex_count, rh.pattern_edges)
    return _embeddings(G, pat, dict(zip(rh.roots, x)), induced=False)


def count_extensions_bruteforce(G: Hypergraph, x: Sequence[int], rh: RootedHypergraph) -> int:
    import itertools

    rest = [u for u in range(G.vertex_count) if u not in set(x)]
    nonroots = rh.nonroots
    total = 0
    for y in itertools.permutations(rest, len(nonroots)):
        img = dict(zip(rh.roots, x))
        img.update(zip(nonroots, y))
        if all(tuple(sorted(img[u] for u in f)) in G.edge_set for f in rh.pattern_edges):
            total += 1
    return total


# ---------------------------------------------------------------------------
# experiments

KINDS = ("poisson", "threshold", "extensions", "closure_bound")


@dataclass
class ExperimentConfig:
    kind: str
    arity: int = 3
    n: int = 100
    alpha: Exponent | None = None
    p: float | None = None
    pattern: Hypergraph | None = None
    roots: tuple[int, ...] = ()
    replicates: int = 1000
    seed: int = 0
    alphas: tuple[float, ...] = ()
    t: int = 1
    r: int = 1
    roots_per_graph: int = 1
    tolerance: float = 0.0
    pr0_tolerance: float = 0.05
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.pattern is not None and self.pattern.arity != self.arity:
            raise ValueError("pattern arity differs from the experiment arity")

    def params(self) -> dict[str, Any]:
        d = {
            "arity": self.arity,
            "n": self.n,
            "replicates": self.replicates,
        }
        if self.alpha is not None:
            d["alpha"] = str(self.alpha)
            d["genericity_bound"] = self.alpha.bound
        if self.p is not None:
            d["p"] = self.p
        if self.pattern is not None:
            d["pattern"] = {
                "vertices": self.pattern.vertex_count,
                "edges": [list(f) for f in self.pattern.edges],
            }
        if self.roots:
            d["roots"] = list(self.roots)
        if self.kind == "threshold":
            d["alphas"] = list(self.alphas)
        if self.kind in ("extensions", "closure_bound"):
            d["roots_per_graph"] = self.roots_per_graph
        if self.kind == "closure_bound":
            d["t"], d["r"] = self.t, self.r
        d["tolerance"] = self.tolerance
        if self.kind == "extensions":
            d["pr0_tolerance"] = self.pr0_tolerance
        return d


@dataclass
class ExperimentReport:
    kind: str
    params: dict[str, Any]
    seed: int
    estimates: dict[str, Any]
    reference: dict[str, Any]
    verdict: str
    runtime_ms: float
    flags: list[str] = field(default_factory=list)
    per_replicate: list[Any] = field(default_factory=list)
    rng: str = RNG_DESCRIPTION

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self, with_replicates: bool = False) -> dict[str, Any]:
        d = asdict(self)
        if not with_replicates:
            d.pop("per_replicate")
        return d

    def to_json(self, with_replicates: bool = False) -> str:
        return json.dumps(self.to_dict(with_replicates), sort_keys=True)


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _fsum_mean_sd(xs: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    mean = math.fsum(xs) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var)


def _poisson_unit(args) -> int:
    cfg, i, p = args
    G = sample(cfg.arity, cfg.n, p, rng_for(cfg.seed, i))
    return count_copies(G, cfg.pattern)


def _run_poisson(cfg: ExperimentConfig, jobs: int) -> tuple[dict, dict, bool, list, list]:
    pat = cfg.pattern
    if pat is None:
        raise ValueError("poisson experiment needs a pattern")
    if not is_strictly_balanced(pat).strictly_balanced:
        raise ValueError("poisson experiment needs a strictly balanced pattern")
    v, e = pat.vertex_count, pat.e
    p = cfg.p if cfg.p is not None else cfg.n ** (-v / e)
    a = count_automorphisms(pat)
    lam = math.prod(range(cfg.n - v + 1, cfg.n + 1)) / a * p**e
    counts = _map(_poisson_unit, [(cfg, i, p) for i in range(cfg.replicates)], jobs)
    mean, sd = _fsum_mean_sd(counts)
    se = sd / math.sqrt(len(counts))
    pr0 = sum(1 for c in counts if c == 0) / len(counts)
    hist: dict[int, int] = {}
    for c in counts:
        hist[c] = hist.get(c, 0) + 1
    tol = cfg.tolerance or 0.02
    mean_ok = abs(mean - lam) <= 3 * se if se > 0 else abs(mean - lam) <= 1e-12
    pr0_ok = abs(pr0 - math.exp(-lam)) <= tol
    est = {
        "mean": mean,
        "stderr": se,
        "pr0": pr0,
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "mean_within_3se": mean_ok,
        "pr0_within_tolerance": pr0_ok,
    }
    ref = {
        "p": p,
        "automorphisms": a,
        "lambda_n": lam,
        "limit_mean": 1 / a,
        "pr0": math.exp(-lam),
        "poisson_pmf": [math.exp(-lam) * lam**k / math.factorial(k) for k in range(6)],
        "pr0_tolerance": tol,
    }
    return est, ref, mean_ok and pr0_ok, [], counts


def _threshold_unit(args) -> bool:
    cfg, gi, i, p = args
    G = sample(cfg.arity, cfg.n, p, rng_for(cfg.seed, gi, i))
    return contains(G, cfg.pattern)


def _run_threshold(cfg: ExperimentConfig, jobs: int):
    pat = cfg.pattern
    if pat is None:
        raise ValueError("threshold experiment needs a pattern")
    rho_max, _ = max_density(pat)
    thr = 1 / rho_max
    tol = cfg.tolerance or 0.1
    freqs = {}
    ok = True
    per = []
    for gi, a in enumerate(cfg.alphas):
        p = cfg.n ** (-float(a))
        hits = _map(_threshold_unit, [(cfg, gi, i, p) for i in range(cfg.replicates)], jobs)
        f = sum(hits) / len(hits)
        freqs[str(a)] = f
        per.append(hits)
        if float(a) < thr:
            ok &= f >= 1 - tol
        elif float(a) > thr:
            ok &= f <= tol
    est = {"containment_frequency": freqs}
    ref = {
        "rho_max": f"{rho_max.numerator}/{rho_max.denominator}",
        "threshold_alpha": f"{thr.numerator}/{thr.denominator}",
        "below_threshold_min": 1 - tol,
        "above_threshold_max": tol,
    }
    return est, ref, ok, [], per


def _extension_unit(args):
    cfg, g, rh = args
    rng = rng_for(cfg.seed, g)
    G = sample(cfg.arity, cfg.n, cfg.alpha.p(cfg.n), rng)
    out = []
    for _ in range(cfg.roots_per_graph):
        x = tuple(int(u) for u in rng.choice(cfg.n, size=rh.r, replace=False))
        out.append(count_extensions(G, x, rh))
    return out


def _run_extensions(cfg: ExperimentConfig, jobs: int):
    if cfg.pattern is None or cfg.alpha is None:
        raise ValueError("extensions experiment needs a rooted pattern and alpha")
    rh = RootedHypergraph(cfg.pattern, cfg.roots)
    tax = classify_rooted(rh, cfg.alpha)
    if not tax.safe:
        raise ValueError("extension counting needs a safe rooted pattern")
    mu = expected_extensions(rh, cfg.n, alpha=cfg.alpha)
    per = _map(_extension_unit, [(cfg, g, rh) for g in range(cfg.replicates)], jobs)
    flat = [c for graph in per for c in graph]
    dev = max(abs(c / mu - 1) for c in flat)
    mean, sd = _fsum_mean_sd(flat)
    pr0 = sum(1 for c in flat if c == 0) / len(flat)
    tol = cfg.tolerance or 0.4
    flags = []
    if abs(pr0 - math.exp(-mu)) > cfg.pr0_tolerance:
        flags.append(
            f"empirical Pr[N=0]={pr0:.4f} differs from exp(-mu)={math.exp(-mu):.4f} "
            f"by more than {cfg.pr0_tolerance}"
        )
    est = {
        "max_relative_deviation": dev,
        "mean": mean,
        "stderr": sd / math.sqrt(len(flat)),
        "pr0": pr0,
        "samples": len(flat),
    }
    # maps of H to itself fixing the roots; N_x is a multiple of this
    a_root = count_extensions(rh.graph, rh.roots, rh)
    ref = {
        "mu": mu,
        "pr0": math.exp(-mu),
        "root_fixing_automorphisms": a_root,
        "pr0_symmetry_adjusted": math.exp(-mu / a_root),
        "type": list(tax.ext_type),
        "minimally_safe": tax.minimally_safe,
        "max_relative_deviation_allowed": tol,
    }
    return est, ref, dev <= tol, flags, per


def _closure_unit(args):
    cfg, g = args
    rng = rng_for(cfg.seed, g)
    G = sample(cfg.arity, cfg.n, cfg.alpha.p(cfg.n), rng)
    sizes = []
    for _ in range(cfg.roots_per_graph):
        X = [int(u) for u in rng.choice(cfg.n, size=cfg.r, replace=False)]
        sizes.append(len(closure_t(G, X, cfg.t, cfg.alpha).closure))
    return sizes


def _run_closure_bound(cfg: ExperimentConfig, jobs: int):
    if cfg.alpha is None:
        raise ValueError("closure_bound experiment needs alpha")
    eps, K = finite_closure_constants(cfg.t, cfg.r, cfg.alpha)
    per = _map(_closure_unit, [(cfg, g) for g in range(cfg.replicates)], jobs)
    flat = [c for graph in per for c in graph]
    biggest = max(flat)
    hist: dict[int, int] = {}
    for c in flat:
        hist[c] = hist.get(c, 0) + 1
    est = {"max_closure_size": biggest, "histogram": {str(k): hist[k] for k in sorted(hist)}}
    ref = {"epsilon": f"{eps.numerator}/{eps.denominator}", "K": K, "bound": K + cfg.r}
    return est, ref, biggest <= K + cfg.r, [], per


_RUNNERS = {
    "poisson": _run_poisson,
    "threshold": _run_threshold,
    "extensions": _run_extensions,
    "closure_bound": _run_closure_bound,
}


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    est, ref, ok, flags, per = _RUNNERS[cfg.kind](cfg, jobs)
    ms = (time.perf_counter() - t0) * 1000
    return ExperimentReport(
        kind=cfg.kind,
        params=cfg.params(),
        seed=cfg.seed,
        estimates=est,
        reference=ref,
        verdict="pass" if ok else "fail",
        runtime_ms=round(ms, 3),
        flags=flags,
        per_replicate=per,
    )


# ---------------------------------------------------------------------------
# config files


def _pattern_from(d: dict[str, Any], arity: int, base: Path | None) -> Hypergraph | None:
    if "pattern_file" in d:
        path = Path(d["pattern_file"])
        if base is not None and not path.is_absolute():
            path = base / path
        return read_hypergraph(path)
    if "pattern" in d:
        pat = d["pattern"]
        if isinstance(pat, str):
            return parse_hypergraph(pat if pat.endswith("\n") else pat + "\n")
        edges = pat["edges"]
        nv = pat.get("vertices", 1 + max((u for f in edges for u in f), default=-1))
        return make_hypergraph(pat.get("arity", arity), nv, edges)
    if "pattern_edges" in d:
        raw = d["pattern_edges"]
        if isinstance(raw, str):
            edges = [[int(u) for u in part.replace(",", " ").split()] for part in raw.split(";") if part.strip()]
        else:
            edges = raw
        nv = int(d.get("pattern_vertices", 1 + max((u for f in edges for u in f), default=-1)))
        return make_hypergraph(arity, nv, edges)
    return None


def _int_list(v: Any) -> tuple[int, ...]:
    if isinstance(v, str):
        return tuple(int(x) for x in v.replace(",", " ").split())
    if isinstance(v, int):
        return (v,)
    return tuple(int(x) for x in v)


def config_from_mapping(d: dict[str, Any], base: Path | None = None) -> ExperimentConfig:
    known = {
        "kind", "arity", "n", "alpha", "generic_bound", "p", "pattern", "pattern_file",
        "pattern_edges", "pattern_vertices", "roots", "replicates", "graphs", "seed", "alphas",
        "t", "r", "roots_per_graph", "tolerance", "pr0_tolerance",
    }
    unknown = set(d) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    arity = int(d.get("arity", 3))
    alpha = None
    if "alpha" in d:
        alpha = Exponent.parse(str(d["alpha"]), int(d["generic_bound"]) if "generic_bound" in d else None)
    alphas: tuple = ()
    if "alphas" in d:
        raw = d["alphas"]
        items = raw.replace(",", " ").split() if isinstance(raw, str) else list(raw)
        alphas = tuple(float(Fraction(str(a))) for a in items)
    reps = d.get("replicates", d.get("graphs", 1000))
    return ExperimentConfig(
        kind=str(d["kind"]),
        arity=arity,
        n=int(d.get("n", 100)),
        alpha=alpha,
        p=float(d["p"]) if "p" in d else None,
        pattern=_pattern_from(d, arity, base),
        roots=_int_list(d.get("roots", ())),
        replicates=int(reps),
        seed=int(d.get("seed", 0)),
        alphas=alphas,
        t=int(d.get("t", 1)),
        r=int(d.get("r", 1)),
        roots_per_graph=int(d.get("roots_per_graph", 1)),
        tolerance=float(d.get("tolerance", 0.0)),
        pr0_tolerance=float(d.get("pr0_tolerance", 0.05)),
    )


def load_config(path: str | Path, kind: str | None = None) -> ExperimentConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        d = json.loads(text)
    else:
        d = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            d[key.strip()] = val.strip()
    if kind is not None:
        if "kind" in d and d["kind"] != kind:
            raise ValueError(f"config kind {d['kind']!r} does not match requested {kind!r}")
        d["kind"] = kind
    return config_from_mapping(d, base=path.parent)
