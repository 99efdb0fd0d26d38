"""Construction and verification of integer relative Heffter arrays.

An integer relative Heffter array is an m x n partially filled array with s
entries per row and k per column, using exactly one of +x, -x for every
value x outside a fixed excluded subgroup, with every row and column
summing to zero over the integers. This package builds such arrays for all
covered parameter families, verifies arbitrary candidates against the
definition, and cross-checks tiny cases by exhaustive search.
"""

from .assembler import ConstructionResult, construct
from .catalog import lookup, make_Bab, self_test_catalog
from .core import (
    Block,
    BlockSequence,
    Contract,
    Parameters,
    PFArray,
    col_sums,
    derive_parameters,
    juxtapose,
    row_sums,
    shift,
    support_of,
    target_support,
    transpose,
)
from .oracle import SearchBudget, recheck_sequence_support, search_small
from .sequences import (
    XSet,
    build_F_rho,
    build_G_tail,
    build_seq_8p,
    build_seq_non8p,
    build_seqB,
    build_seqB_OLD,
    xset_k4,
)
from .verifier import check_necessary, is_shiftable, verify_full

__all__ = [
    "Block",
    "BlockSequence",
    "ConstructionResult",
    "Contract",
    "PFArray",
    "Parameters",
    "SearchBudget",
    "XSet",
    "build_F_rho",
    "build_G_tail",
    "build_seqB",
    "build_seqB_OLD",
    "build_seq_8p",
    "build_seq_non8p",
    "check_necessary",
    "col_sums",
    "construct",
    "derive_parameters",
    "is_shiftable",
    "juxtapose",
    "lookup",
    "make_Bab",
    "recheck_sequence_support",
    "row_sums",
    "search_small",
    "self_test_catalog",
    "shift",
    "support_of",
    "target_support",
    "transpose",
    "verify_full",
    "xset_k4",
]

__version__ = "0.1.0"
