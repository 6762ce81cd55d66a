"""Zero-one law machinery for random s-uniform hypergraphs."""

__version__ = "0.1.0"

from .balance import BalanceVerdict, is_strictly_balanced, max_density
from .closure import closure_t, finite_closure_constants, is_generic_extension, same_t_type
from .construct import DensityTarget, construct_circular, construct_strictly_balanced, construct_tree, lift_arity
from .extension import Exponent, RootedHypergraph, classify_rooted, expected_extensions, witness_structure
from .formats import format_hypergraph, parse_hypergraph
from .game import lookahead_schedule, play_match, run_tournament
from .hypercore import Hypergraph, HypergraphError, count_automorphisms, make_hypergraph
from .randmodel import ExperimentConfig, count_copies, count_extensions, rng_for, run_experiment, sample

__all__ = [
    "BalanceVerdict",
    "DensityTarget",
    "ExperimentConfig",
    "Exponent",
    "Hypergraph",
    "HypergraphError",
    "RootedHypergraph",
    "classify_rooted",
    "closure_t",
    "construct_circular",
    "construct_strictly_balanced",
    "construct_tree",
    "count_automorphisms",
    "count_copies",
    "count_extensions",
    "expected_extensions",
    "finite_closure_constants",
    "format_hypergraph",
    "is_generic_extension",
    "is_strictly_balanced",
    "lift_arity",
    "lookahead_schedule",
    "make_hypergraph",
    "max_density",
    "parse_hypergraph",
    "play_match",
    "rng_for",
    "run_experiment",
    "run_tournament",
    "same_t_type",
    "sample",
    "witness_structure",
]
