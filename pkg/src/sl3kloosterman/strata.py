"""Fine Kloosterman sets: keys, enumeration, classification, level filtering."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import divisors, euler_phi
from .cyclo import CycSum
from .slmat import (
    CellParams,
    IntMat3,
    canonical_rep,
    coset_key,
    dagger,
    stratum_invariants,
    unit_lifts,
    x3y3_pairs,
)

WORDS = ("aba", "bab")


@dataclass(frozen=True)
class StratumKey:
    """Identifies the fine set Omega_word(d1, d2, f)."""

    d1: int
    d2: int
    f: int
    word: str = "aba"

    def __post_init__(self):
        if self.d1 == 0 or self.d2 == 0:
            raise ValueError("d1 and d2 must be nonzero")
        if self.f < 1:
            raise ValueError("f must be positive")
        if self.word not in WORDS:
            raise ValueError(f"word must be one of {WORDS}, got {self.word!r}")

    @property
    def c1(self) -> int:
        return self.d1 * self.f

    @property
    def c2(self) -> int:
        return self.d2 * self.f

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "f": self.f, "word": self.word}


@dataclass(frozen=True)
class CharPair:
    """Left and right character vectors m = (m1, m2), n = (n1, n2)."""

    m: tuple
    n: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if len(self.m) != 2 or len(self.n) != 2:
            raise ValueError("character vectors have two components")

    def to_json(self) -> dict:
        return {"m": list(self.m), "n": list(self.n)}


@dataclass(frozen=True)
class RefinedKey:
    """The intersection stratum of both reduced words: (d1, d2, f1, f2, e)."""

    d1: int
    d2: int
    f1: int
    f2: int
    e: int

    def aba_key(self) -> StratumKey:
        return StratumKey(self.d1 * self.f2, self.d2 * self.f2, self.f1 * self.e, "aba")

    def bab_key(self) -> StratumKey:
        return StratumKey(self.d1 * self.f1, self.d2 * self.f1, self.f2 * self.e, "bab")


# --------------------------------------------------------------------------


def enumerate_cosets(key: StratumKey):
    """Canonical parameters of every double coset in the stratum, in a fixed order.

    For the beta-alpha-beta word the parameters are those of the preimage
    stratum under the dagger involution (d1 and d2 swapped); see
    :func:`stratum_matrices` for representatives of the set itself.
    """
    d1, d2, f = (key.d2, key.d1, key.f) if key.word == "bab" else (key.d1, key.d2, key.f)
    Q = abs(d1 * d2 * f)
    for x2 in unit_lifts(d2, Q):
        for y1 in unit_lifts(d1, Q):
            for x3, y3 in x3y3_pairs(f):
                for k in range(f):
                    yield CellParams(d1, d2, f, x2, y1, x3, y3, k)


def stratum_matrices(key: StratumKey):
    """One representative matrix per double coset of the stratum."""
    for p in enumerate_cosets(key):
        A = canonical_rep(p)
        yield dagger(A) if key.word == "bab" else A


def stratum_size(key: StratumKey) -> int:
    return euler_phi(abs(key.d1)) * euler_phi(abs(key.d2)) * euler_phi(key.f) * key.f


def strata_of(c1: int, c2: int, word: str = "aba"):
    """The fine keys partitioning the coarse set for moduli (c1, c2)."""
    for f in divisors(math.gcd(c1, c2)):
        yield StratumKey(c1 // f, c2 // f, f, word)


def coset_count(c1: int, c2: int) -> int:
    """Number of double cosets in the coarse Kloosterman set for (c1, c2)."""
    if c1 == 0 or c2 == 0:
        raise ValueError("moduli must be nonzero")
    return sum(stratum_size(k) for k in strata_of(c1, c2))


def classify(A: IntMat3) -> tuple[StratumKey, CellParams]:
    """The alpha-beta-alpha stratum of A and its canonical coset parameters."""
    inv = stratum_invariants(A)
    return StratumKey(inv.d1, inv.d2, inv.f), coset_key(A)


def classify_refined(A: IntMat3) -> RefinedKey:
    """The refined key (d1, d2, f1, f2, e) of A."""
    if A.e(3, 1) == 0 or A.minor(1, 3) == 0:
        raise ValueError("matrix is not in the big Bruhat cell")
    g1 = math.gcd(A.e(3, 1), A.e(3, 2))
    g2 = math.gcd(A.e(3, 1), A.e(2, 1))
    e = math.gcd(g1, g2)
    f1, f2 = g1 // e, g2 // e
    scale = f1 * f2 * e
    return RefinedKey(A.e(3, 1) // scale, A.minor(1, 3) // scale, f1, f2, e)


def level_filter(keys, N: int):
    """Keep the strata that survive for the congruence subgroup of level N."""
    if N < 1:
        raise ValueError("level must be positive")
    for key in keys:
        if key.f % N == 0:
            yield key


def in_level(A: IntMat3, N: int) -> bool:
    """Matrix-level test: N divides both A31 and A32."""
    return A.e(3, 1) % N == 0 and A.e(3, 2) % N == 0


def psi(v, u) -> CycSum:
    """e(v1*u12 + v2*u23) for an upper unipotent u with rational entries."""
    x = Fraction(v[0]) * Fraction(u[0][1]) + Fraction(v[1]) * Fraction(u[1][2])
    hist = [0] * x.denominator
    hist[x.numerator % x.denominator] = 1
    return CycSum.from_histogram(x.denominator, hist)
