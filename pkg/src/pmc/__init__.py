"""Partial model checking of mu-calculus formulas on networks of LTSs."""

from .engine import Verdict, check_global, check_partial, satisfying_states, select_next
from .fgraph import build_quotient_network, check_formula_graph, decode, encode, quotient
from .lts import Lts, parse_aut, strong_bisim_reduce, tau_star_a_reduce, write_aut
from .mucalc import expand_regular, parse_formula, prepare, show
from .network import Network, SyncRule, extract_subnetwork, load_net, parse_net, product
from .simplify import evaluate_constants, simplify_pipeline

__all__ = [
    "Lts", "Network", "SyncRule", "Verdict", "build_quotient_network", "check_formula_graph",
    "check_global", "check_partial", "decode", "encode", "evaluate_constants", "expand_regular",
    "extract_subnetwork", "load_net", "parse_aut", "parse_formula", "parse_net", "prepare",
    "product", "quotient",
    "satisfying_states", "select_next", "show", "simplify_pipeline", "strong_bisim_reduce",
    "tau_star_a_reduce", "write_aut",
]
