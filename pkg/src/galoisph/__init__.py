"""Persistence diagrams by Mobius inversion over finite posets, with Galois
connections as the morphisms between index posets."""
from .diagram import (
    Diagram,
    diagram_of,
    fibered_barcode,
    from_points,
    pushforward_diagram,
    rank_diagram_direct,
    rank_diagram_via_formula,
)
from .errors import GaloisPHError
from .ext import INF
from .homology import parse_filtration, persistence_module
from .interleave import Interleaving, build_from_shift, stability_matching
from .matching import DiagonalPoint, Matching, bottleneck_distance, glue_matchings
from .mobius import IntFn, mobius_invert, pullback, pushforward, rgct_check, zeta_transform
from .pmod import PersistenceModule, build_free_presentation, pull_module
from .poset import FinitePoset, GaloisConnection, build_poset, chain, grid, validate_galois

__version__ = "0.1.0"

__all__ = [
    "INF", "Diagram", "DiagonalPoint", "FinitePoset", "GaloisConnection", "GaloisPHError",
    "IntFn", "Interleaving", "Matching", "PersistenceModule", "bottleneck_distance",
    "build_free_presentation", "build_from_shift", "build_poset", "chain", "diagram_of",
    "fibered_barcode", "from_points", "glue_matchings", "grid", "mobius_invert",
    "parse_filtration", "persistence_module", "pull_module", "pullback", "pushforward",
    "pushforward_diagram", "rank_diagram_direct", "rank_diagram_via_formula", "rgct_check",
    "stability_matching", "validate_galois", "zeta_transform",
]
