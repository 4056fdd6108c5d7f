"""Concrete computable injective endomaps of the naturals.

Default pointwise-verification window: the first 2000 carrier indices.
"""

from .carrier import CanonicalMap, Spec, zigzag_decode, zigzag_encode
from .factorization import FactorResult, eval_conjugate_product, factor_into_conjugates
from .maps import (
    CoimageMismatchError,
    CoimagePoints,
    ComposedMap,
    DressedMap,
    FinitaryPerm,
    LazyBijection,
    PreconditionViolatedError,
    WitnessUnsupportedError,
    compose,
    conjugate,
    dressed,
)
from .structure import FWD_KEY, OPEN_KEY, MapStructure, fin_key
from .textio import format_dressed, format_perm, parse_dressed, parse_perm
from .witnesses import (
    complete_to_permutation,
    conjugacy_witness,
    even_adjust_witness,
    inverse_dressed,
    merge_witness,
    parity_effect,
    relate_witness,
    reversal_involution,
    split_witness,
)

DEFAULT_WINDOW = 2000

__all__ = [
    "DEFAULT_WINDOW",
    "CanonicalMap",
    "Spec",
    "zigzag_encode",
    "zigzag_decode",
    "FinitaryPerm",
    "DressedMap",
    "ComposedMap",
    "CoimagePoints",
    "LazyBijection",
    "dressed",
    "compose",
    "conjugate",
    "MapStructure",
    "OPEN_KEY",
    "FWD_KEY",
    "fin_key",
    "conjugacy_witness",
    "complete_to_permutation",
    "split_witness",
    "merge_witness",
    "parity_effect",
    "even_adjust_witness",
    "relate_witness",
    "reversal_involution",
    "inverse_dressed",
    "FactorResult",
    "factor_into_conjugates",
    "eval_conjugate_product",
    "format_perm",
    "parse_perm",
    "format_dressed",
    "parse_dressed",
    "CoimageMismatchError",
    "PreconditionViolatedError",
    "WitnessUnsupportedError",
]
