"""Brute-force Kloosterman sums over Plücker-labelled double cosets.

Nothing here touches the closed-form evaluators: cosets come from the
sextuple parametrization, characters from Bruhat coordinates of a
realized matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .arith import egcd
from .cyclo import CycSum
from .slmat import IntMat3, stratum_invariants, stratum_invariants_braid, w0_coords
from .strata import CharPair, RefinedKey, StratumKey, classify_refined, in_level
from .sums import SumResult


@dataclass(frozen=True)
class PluckerSextuple:
    A1: int
    B1: int
    C1: int
    A2: int
    B2: int
    C2: int

    def __post_init__(self):
        if self.A1 < 1 or self.A2 < 1:
            raise ValueError("A1 and A2 must be positive")
        if self.A1 * self.C2 + self.B1 * self.B2 + self.C1 * self.A2 != 0:
            raise ValueError("sextuple violates A1*C2 + B1*B2 + C1*A2 = 0")
        if math.gcd(self.A1, self.B1, self.C1) != 1 or math.gcd(self.A2, self.B2, self.C2) != 1:
            raise ValueError("both triples must be primitive")

    def as_tuple(self) -> tuple:
        return (self.A1, self.B1, self.C1, self.A2, self.B2, self.C2)


def enumerate_plucker(c1: int, c2: int):
    """Sextuples with A1 = c1, A2 = c2, one per double coset.

    B1 and B2 are fixed as integers in [0, A) first; only then is C1 run
    over its residues, which pins C2 exactly.
    """
    if c1 < 1 or c2 < 1:
        raise ValueError("moduli must be positive")
    A1, A2 = c1, c2
    for B1 in range(A1):
        for B2 in range(A2):
            for C1 in range(A1):
                top = B1 * B2 + C1 * A2
                if top % A1:
                    continue
                C2 = -top // A1
                if math.gcd(A1, B1, C1) == 1 and math.gcd(A2, B2, C2) == 1:
                    yield PluckerSextuple(A1, B1, C1, A2, B2, C2)


def enumerate_plucker_naive(c1: int, c2: int):
    """Residue tuples (B1, C1 mod A1; B2, C2 mod A2) admitting some valid lift.

    This is the simultaneous choice that forgets the order of the
    variables.  It overcounts; kept for regression tests only.
    """
    A1, A2 = c1, c2
    for B1 in range(A1):
        for C1 in range(A1):
            if math.gcd(A1, B1, C1) != 1:
                continue
            for B2 in range(A2):
                for C2 in range(A2):
                    if math.gcd(A2, B2, C2) != 1:
                        continue
                    lift = _naive_lift(A1, B1, C1, A2, B2, C2)
                    if lift is not None:
                        yield PluckerSextuple(*lift)


def _naive_lift(A1, B1, C1, A2, B2, C2):
    # B1 + i*A1 and B2 + j*A2, then C1, C2 shifted to kill the remainder
    for i in range(A2):
        b1 = B1 + i * A1
        for j in range(A1):
            b2 = B2 + j * A2
            rest = A1 * C2 + b1 * b2 + C1 * A2
            if rest % (A1 * A2) == 0:
                return (A1, b1, C1, A2, b2, C2 - A2 * (rest // (A1 * A2)))
    return None


def _egcd3(a, b, c):
    """(x, y, z) with x*a + y*b + z*c = gcd(a, b, c)."""
    if a == 0 and b == 0:
        _, _, z = egcd(0, c)
        return 0, 0, z
    g, s, t = egcd(a, b)
    _, p, q = egcd(g, c)
    return p * s, p * t, q


def realize_matrix(s: PluckerSextuple) -> IntMat3:
    """An integral determinant-one matrix with bottom row (A1, B1, C1) and the sextuple's minors."""
    A1, B1, C1, A2, B2, C2 = s.as_tuple()
    # row 2 r solves r x (A1, B1, C1) = (C2, B2, A2)
    g, sa, tb = egcd(A1, B1)
    assert A2 % g == 0
    r1, r2 = tb * A2 // g, -sa * A2 // g
    a = A1 // g
    X = B2 + r1 * C1
    assert X % a == 0, "no second-row completion exists"
    # shift along (A1, B1)/g until A1 divides X: C1*k = -X/a (mod g)
    k = (-(X // a) * pow(C1, -1, g)) % g if g > 1 else 0
    r1 += k * a
    r2 += k * (B1 // g)
    assert (B2 + r1 * C1) % A1 == 0
    r3 = (B2 + r1 * C1) // A1
    x, y, z = _egcd3(C2, B2, A2)
    A = IntMat3(((x, y, z), (r1, r2, r3), (A1, B1, C1)))
    assert (A.minor(1, 3), -A.minor(1, 2), A.minor(1, 1)) == (A2, B2, C2)
    return A


# --------------------------------------------------------------------------
# character sums


@lru_cache(maxsize=512)
def _coset_table(c1: int, c2: int):
    """Matrices of every coset for (c1, c2) plus the four scaled phase numerators.

    Row r of the array holds the numerators over L = lcm(c1, c2) of
    (uL12, uL23, uR12, uR23).
    """
    L = math.lcm(c1, c2)
    mats, coords = [], []
    for s in enumerate_plucker(c1, c2):
        A = realize_matrix(s)
        bc = w0_coords(A)
        row = []
        for x in (bc.uL[0][1], bc.uL[1][2], bc.uR[0][1], bc.uR[1][2]):
            assert L % x.denominator == 0
            row.append(x.numerator * (L // x.denominator))
        mats.append(A)
        coords.append(row)
    arr = np.array(coords, dtype=np.int64).reshape(-1, 4)
    arr.setflags(write=False)
    return tuple(mats), arr


def _mask(c1, c2, keep):
    mats, _ = _coset_table(c1, c2)
    return np.array([keep(A) for A in mats], dtype=bool)


def _charsum(ch, c1, c2, mask=None, formula="oracle") -> SumResult:
    ch = ch if isinstance(ch, CharPair) else CharPair(*ch)
    _, coords = _coset_table(c1, c2)
    if mask is not None:
        coords = coords[mask]
    L = math.lcm(c1, c2)
    hist = _kernels.phase_histogram(coords, ch.m + ch.n, L)
    return SumResult(CycSum.from_histogram(L, hist), formula, len(coords))


def oracle_cosets(c1: int, c2: int) -> tuple:
    """Realized representatives, one per coset of the coarse set."""
    return _coset_table(c1, c2)[0]


def oracle_coarse(ch, c1: int, c2: int) -> SumResult:
    """Direct sum of psi_m(uL) psi_n(uR) over all double cosets."""
    return _charsum(ch, c1, c2)


def oracle_fine(ch, key) -> SumResult:
    """The direct sum restricted to one fine stratum (either reduced word)."""
    if not isinstance(key, StratumKey):
        key = StratumKey(*key)
    if key.d1 < 0 or key.d2 < 0:
        raise ValueError("the oracle handles positive moduli only")
    invariants = stratum_invariants if key.word == "aba" else stratum_invariants_braid
    mask = _mask(key.c1, key.c2, lambda A: invariants(A).f == key.f)
    return _charsum(ch, key.c1, key.c2, mask, f"oracle-fine-{key.word}")


def oracle_refined(ch, d1: int, d2: int, f1: int, f2: int, e: int) -> SumResult:
    """The direct sum over the intersection stratum (d1, d2, f1, f2, e)."""
    key = RefinedKey(d1, d2, f1, f2, e)
    scale = f1 * f2 * e
    c1, c2 = d1 * scale, d2 * scale
    mask = _mask(c1, c2, lambda A: classify_refined(A) == key)
    return _charsum(ch, c1, c2, mask, "oracle-refined")


@lru_cache(maxsize=512)
def _level_mask(c1, c2, N):
    mask = _mask(c1, c2, lambda A: in_level(A, N))
    mask.setflags(write=False)
    return mask


def oracle_level(ch, c1: int, c2: int, N: int) -> SumResult:
    """The direct sum over cosets whose bottom row is (0, 0, *) mod N."""
    if N < 1:
        raise ValueError("level must be positive")
    return _charsum(ch, c1, c2, _level_mask(c1, c2, N), "oracle-level")
