"""Candidate encodings, fitness, symmetry masks and translation."""

from .candidates import (
    Candidate,
    DualCandidate,
    PrimalCandidate,
    debug_enabled,
    delta_relabel_dual,
    delta_swap_primal,
    dual_fitness,
    primal_fitness,
    set_debug,
    swap_deltas,
    swap_moves,
)
from .io import dump_candidate, format_candidate, load_candidate, parse_candidate
from .symmetry import (
    SymmetryMask,
    embed,
    genotype_count,
    move_space,
    random_candidate,
    random_dual,
    random_primal,
    symmetry_mask,
    symmetry_mask_dual,
    symmetry_mask_primal,
)
from .translate import dual_to_primal, primal_to_dual, translate, verify_solution

__all__ = [
    "Candidate",
    "DualCandidate",
    "PrimalCandidate",
    "SymmetryMask",
    "debug_enabled",
    "delta_relabel_dual",
    "delta_swap_primal",
    "dual_fitness",
    "dual_to_primal",
    "dump_candidate",
    "embed",
    "format_candidate",
    "genotype_count",
    "load_candidate",
    "move_space",
    "parse_candidate",
    "primal_fitness",
    "primal_to_dual",
    "random_candidate",
    "random_dual",
    "random_primal",
    "set_debug",
    "swap_deltas",
    "swap_moves",
    "symmetry_mask",
    "symmetry_mask_dual",
    "symmetry_mask_primal",
    "translate",
    "verify_solution",
]
