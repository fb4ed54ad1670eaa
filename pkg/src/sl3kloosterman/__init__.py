"""Exact SL3 Kloosterman sums through their fine stratification.

The closed-form evaluators live in :mod:`.sums`, the independent
brute-force sums in :mod:`.oracle`, and exact values are
:class:`.cyclo.CycSum` elements of cyclotomic integer rings.
"""
from ._kernels import BACKEND
from .arith import kloosterman, ramanujan_c
from .cyclo import CycSum, root_of_unity
from .oracle import enumerate_plucker, oracle_coarse, oracle_fine, realize_matrix
from .slmat import IntMat3, Weyl, bruhat_coords, canonical_rep, coset_equal, dagger
from .strata import CharPair, StratumKey, coset_count, enumerate_cosets
from .sums import (
    coarse_kloosterman,
    fine_kloosterman,
    fine_kloosterman_braid,
    hyper_kloosterman_ab,
    hyper_kloosterman_ba,
    ramanujan_general,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CharPair", "CycSum", "IntMat3", "StratumKey", "Weyl",
    "bruhat_coords", "canonical_rep", "coarse_kloosterman", "coset_count",
    "coset_equal", "dagger", "enumerate_cosets", "enumerate_plucker",
    "fine_kloosterman", "fine_kloosterman_braid", "hyper_kloosterman_ab",
    "hyper_kloosterman_ba", "kloosterman", "oracle_coarse", "oracle_fine",
    "ramanujan_c", "ramanujan_general", "realize_matrix", "root_of_unity",
]
