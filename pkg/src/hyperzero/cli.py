"""Command-line front end.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or input
error, 3 internal error.  Results go to stdout (or ``--out``); the resolved
options and all diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .balance import is_strictly_balanced, max_density
from .closure import closure_t
from .construct import ConstructionError, DensityTarget, construct_strictly_balanced
from .extension import Exponent, GenericityError, RootedHypergraph, classify_rooted, witness_structure
from .formats import FormatError, format_hypergraph, parse_hypergraph, parse_rooted
from .hypercore import Hypergraph, HypergraphError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    try:
        if not sep:
            raise ValueError
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational M/N, got {text!r}") from None


def _probability(text: str) -> float:
    try:
        p = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a probability such as 1/100, got {text!r}") from None
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError(f"probability outside [0, 1]: {text}")
    return p


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected vertex ids, got {text!r}") from None


def _global_flags() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=None, help="master seed (default 0; experiments: the config's)")
    g.add_argument("--jobs", type=int, default=1, help="parallel workers for harnesses (default 1)")
    g.add_argument("--out", type=Path, help="write results here instead of stdout")
    g.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    return g


def _alpha_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--alpha", type=_rational, required=required, help="exponent NUM/DEN, p = n^-alpha")
    p.add_argument(
        "--bound", "--generic-bound", type=int, default=None, dest="bound",
        help="genericity bound B (default min(64, max(num, den)-1))",
    )


def _file_flags(p: argparse.ArgumentParser, help: str | None = None) -> None:
    p.add_argument("file", type=Path, nargs="?", help=help)
    p.add_argument("--in", type=Path, dest="in_file", help="same as the positional file")


def build_parser() -> argparse.ArgumentParser:
    glob = _global_flags()
    parser = _Parser(prog="hyperzero", description="Random hypergraph zero-one law toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[glob], help="build a strictly balanced hypergraph")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--rho", type=_rational, required=True)
    p.add_argument("--max-search-vertices", type=int, default=8)

    p = sub.add_parser("verify", parents=[glob], help="check strict balance")
    _file_flags(p)

    p = sub.add_parser("maxdensity", parents=[glob], help="maximum sub-hypergraph density")
    _file_flags(p)

    p = sub.add_parser("classify", parents=[glob], help="classify a rooted hypergraph")
    _file_flags(p, help="rooted format, or plain with --roots")
    p.add_argument("--roots", type=_int_list)
    _alpha_flags(p)

    p = sub.add_parser("closure", parents=[glob], help="t-closure of a vertex set")
    _file_flags(p)
    p.add_argument("--roots", "--x", type=_int_list, required=True, dest="roots")
    p.add_argument("--t", type=int, required=True)
    _alpha_flags(p)

    p = sub.add_parser("sample", parents=[glob], help="draw from G^s(n, p)")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=_probability)
    grp.add_argument("--alpha", type=_rational)
    p.add_argument("--bound", type=int, default=None)

    p = sub.add_parser("experiment", parents=[glob], help="run a Monte Carlo experiment")
    p.add_argument("kind", choices=("poisson", "threshold", "extensions", "closure_bound"))
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--replicates", action="store_true", help="include per-replicate data")

    for verb in ("play", "tournament"):
        p = sub.add_parser(verb, parents=[glob], help="Ehrenfeucht game" if verb == "play" else "many games")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--rounds", type=int, required=True)
        p.add_argument("--arity", type=int, default=2)
        p.add_argument("--spoiler", choices=("random", "greedy", "human"), default="random")
        _alpha_flags(p)
        if verb == "tournament":
            p.add_argument("--games", type=int, required=True)
    return parser


def _exponent(args) -> Exponent:
    a = args.alpha
    return Exponent(a.numerator, a.denominator, args.bound or 0)


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


class _Output:
    def __init__(self, args):
        self.fmt = args.fmt
        self.path = args.out
        self.chunks: list[str] = []

    def emit(self, obj: Any) -> None:
        if isinstance(obj, str):
            self.chunks.append(obj if obj.endswith("\n") else obj + "\n")
        elif self.fmt == "json":
            self.chunks.append(json.dumps(obj, sort_keys=True) + "\n")
        else:
            self.chunks.append(_as_text(obj))

    def flush(self) -> None:
        text = "".join(self.chunks)
        if self.path is not None:
            self.path.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()


def _as_text(obj: Any, indent: str = "") -> str:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{indent}{k}:\n" + _as_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {json.dumps(v)}\n")
        return "".join(lines)
    return f"{indent}{json.dumps(obj)}\n"


def _graph_payload(G: Hypergraph, fmt: str) -> Any:
    if fmt == "json":
        return {"arity": G.arity, "vertices": G.vertex_count, "edges": [list(f) for f in G.edges]}
    return format_hypergraph(G)


def _resolved(args) -> str:
    opts = {k: (str(v) if isinstance(v, (Fraction, Path)) else v) for k, v in sorted(vars(args).items())}
    return "resolved: " + json.dumps(opts, sort_keys=True)


# ---------------------------------------------------------------------------
# verbs


def cmd_construct(args, out: _Output) -> int:
    try:
        G = construct_strictly_balanced(DensityTarget(args.arity, args.rho), args.max_search_vertices)
    except ConstructionError as exc:
        print(f"construct: {exc}", file=sys.stderr)
        return EXIT_USAGE if exc.reason in ("arity", "rho") else EXIT_FAIL
    out.emit(_graph_payload(G, args.fmt))
    return EXIT_OK


def cmd_verify(args, out: _Output) -> int:
    G = parse_hypergraph(_read(args.file))
    verdict = is_strictly_balanced(G)
    out.emit(json.loads(verdict.to_json()))
    return EXIT_OK if verdict.strictly_balanced else EXIT_FAIL


def cmd_maxdensity(args, out: _Output) -> int:
    G = parse_hypergraph(_read(args.file))
    rho, S = max_density(G)
    out.emit({"rho_max": _frac(rho), "witness": list(S), "threshold_alpha": _frac(1 / rho)})
    return EXIT_OK


def cmd_classify(args, out: _Output) -> int:
    raw = _read(args.file)
    if args.roots is not None:
        G, roots = parse_hypergraph(raw), args.roots
    else:
        G, roots = parse_rooted(raw)
    rh = RootedHypergraph(G, roots)
    alpha = _exponent(args)
    tax = classify_rooted(rh, alpha)
    wit = witness_structure(rh, alpha)
    out.emit(
        {
            "alpha": str(alpha),
            "type": list(tax.ext_type),
            "polarity": tax.polarity,
            "rigid": tax.rigid,
            "safe": tax.safe,
            "minimally_safe": tax.minimally_safe,
            "rigid_subextension": list(wit.rigid_subextension) if wit.rigid_subextension is not None else None,
            "safe_nailextension": list(wit.safe_nailextension) if wit.safe_nailextension is not None else None,
        }
    )
    return EXIT_OK


def cmd_closure(args, out: _Output) -> int:
    G = parse_hypergraph(_read(args.file))
    if any(not 0 <= u < G.vertex_count for u in args.roots):
        raise UsageError(f"roots must lie in 0..{G.vertex_count - 1}")
    res = closure_t(G, args.roots, args.t, _exponent(args))
    out.emit(
        {
            "closure": sorted(res.closure),
            "size": len(res.closure),
            "chain": [sorted(b - a) for a, b in zip(res.chain, res.chain[1:])],
        }
    )
    return EXIT_OK


def cmd_sample(args, out: _Output) -> int:
    from .randmodel import rng_for, sample

    p = args.p if args.p is not None else _exponent(args).p(args.n)
    G = sample(args.arity, args.n, p, rng_for(args.seed))
    out.emit(_graph_payload(G, args.fmt))
    return EXIT_OK


def cmd_experiment(args, out: _Output) -> int:
    from .randmodel import load_config, run_experiment

    try:
        cfg = load_config(args.config, kind=args.kind)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load config {args.config}: {exc}") from None
    if args.seed is not None:
        cfg.seed = args.seed
    report = run_experiment(cfg, jobs=args.jobs)
    for flag in report.flags:
        print(f"flag: {flag}", file=sys.stderr)
    out.emit(report.to_dict(with_replicates=args.replicates))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_play(args, out: _Output) -> int:
    from .game import POLICIES, play_match, verdict_record
    from .randmodel import rng_for, sample

    alpha = _exponent(args)
    g1 = sample(args.arity, args.n, alpha.p(args.n), rng_for(args.seed, 0, 1))
    g2 = sample(args.arity, args.m, alpha.p(args.m), rng_for(args.seed, 0, 2))
    policy = POLICIES[args.spoiler]()
    live = args.spoiler == "human" and args.out is None

    def show(entry):
        if live:
            print(json.dumps(entry), flush=True)

    res = play_match(g1, g2, args.rounds, policy, alpha, rng_for(args.seed, 0, 3), on_round=show)
    if not live:
        for entry in res.transcript:
            out.emit(json.dumps(entry))
    out.emit(json.dumps(verdict_record(res)))
    return EXIT_OK


def cmd_tournament(args, out: _Output) -> int:
    from .game import run_tournament

    if args.spoiler == "human":
        raise UsageError("tournament needs --spoiler random or greedy")
    summary = run_tournament(
        args.arity, args.n, args.m, _exponent(args), args.rounds, args.spoiler, args.games, args.seed, args.jobs
    )
    summary.pop("matches")
    out.emit(summary)
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "maxdensity": cmd_maxdensity,
    "classify": cmd_classify,
    "closure": cmd_closure,
    "sample": cmd_sample,
    "experiment": cmd_experiment,
    "play": cmd_play,
    "tournament": cmd_tournament,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"hyperzero: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if hasattr(args, "in_file"):
        if (args.file is None) == (args.in_file is None):
            print("hyperzero: error: give the input file once, positionally or with --in", file=sys.stderr)
            return EXIT_USAGE
        args.file = args.file or args.in_file
        del args.in_file
    if args.jobs < 1:
        print("hyperzero: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is None and args.verb != "experiment":
        args.seed = 0
    print(_resolved(args), file=sys.stderr)
    out = _Output(args)
    try:
        code = COMMANDS[args.verb](args, out)
    except UsageError as exc:
        print(f"hyperzero: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"hyperzero: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenericityError as exc:
        print(f"hyperzero: genericity error: {exc} (colliding type v={exc.v}, e={exc.e})", file=sys.stderr)
        return EXIT_USAGE
    except (HypergraphError, ValueError) as exc:
        print(f"hyperzero: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
