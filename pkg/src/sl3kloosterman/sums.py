"""Closed-form evaluators for SL3 Kloosterman sums, plus bounds.

Every evaluator accumulates a raw residue histogram over Z/L and reduces it
to a canonical :class:`CycSum` once at the end.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .arith import divisors, euler_phi, inv_mod, kloosterman_histogram, primary_part, tau, units
from .cyclo import CycSum
from .slmat import Weyl
from .strata import CharPair, StratumKey, level_filter, strata_of


@dataclass(frozen=True)
class SumResult:
    value: CycSum
    formula: str
    terms: int = 0
    approx: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "approx", self.value.to_complex())

    def to_json(self) -> dict:
        return {
            "exact": self.value.to_json(),
            "approx": [self.approx.real, self.approx.imag],
            "formula": self.formula,
            "terms": self.terms,
        }


class HiddenConditionWarning(UserWarning):
    """A hyper-Kloosterman sum was evaluated without its divisibility side condition."""


class IncompatibleCharacters(ValueError):
    """The characters are not compatible with the Weyl element and moduli."""


def _as_chars(ch):
    if isinstance(ch, CharPair):
        return ch
    m, n = ch
    return CharPair(m, n)


def _key(key, word="aba"):
    if isinstance(key, StratumKey):
        return key
    d1, d2, f = key
    return StratumKey(d1, d2, f, word)


# --------------------------------------------------------------------------
# histogram accumulation


class _Accumulator:
    """An int64 residue histogram that spills to Python ints if it must."""

    def __init__(self, L):
        self.L = L
        self.hist = np.zeros(L, dtype=np.int64)
        self.terms = 0

    def add_product(self, h1, d1, h2, d2, weight):
        try:
            _kernels.accumulate_product(h1, h2, self.L // d1, self.L // d2, weight, self.hist)
        except OverflowError:
            self.hist = self.hist.astype(object)
            _kernels.accumulate_product(h1, h2, self.L // d1, self.L // d2, weight, self.hist)

    def value(self) -> CycSum:
        return CycSum.from_histogram(self.L, self.hist)


def _unsign(m, n, d1, d2):
    # Negative moduli come from conjugating by sign matrices:
    # Omega(-d1, d2, f) = Omega(d1, d2, f) diag(-1, -1, 1), which flips n2,
    # and diag(-1, -1, 1) Omega(d1, -d2, f) = Omega(d1, d2, f), which flips m2.
    m1, m2 = m
    n1, n2 = n
    if d1 < 0:
        n2 = -n2
    if d2 < 0:
        m2 = -m2
    return (m1, m2), (n1, n2), abs(d1), abs(d2)


def _fine_into(acc, m, n, d1, d2, f):
    (m1, m2), (n1, n2) = m, n
    if math.gcd(m2 * d2, f) != math.gcd(n2 * d1, f):
        return
    for y3 in units(f):
        top = m2 * d2 + n2 * d1 * y3
        if top % f:
            continue
        x3 = inv_mod(y3, f)
        other = m2 * d2 * x3 + n2 * d1
        assert other % f == 0, "M(x3) failed to be integral"
        h1 = kloosterman_histogram(n1, top // f, d1)
        h2 = kloosterman_histogram(m1, other // f, d2)
        acc.add_product(h1, d1, h2, d2, f)
        acc.terms += euler_phi(d1) + euler_phi(d2)


def _fine_braid_into(acc, m, n, d1, d2, f):
    (m1, m2), (n1, n2) = m, n
    if math.gcd(n1 * d2, f) != math.gcd(m1 * d1, f):
        return
    for x3 in units(f):
        top = n1 * d2 + x3 * m1 * d1
        if top % f:
            continue
        y3 = inv_mod(x3, f)
        other = n1 * d2 * y3 + m1 * d1
        assert other % f == 0, "the partner argument failed to be integral"
        h1 = kloosterman_histogram(top // f, m2, d1)
        h2 = kloosterman_histogram(other // f, n2, d2)
        acc.add_product(h1, d1, h2, d2, f)
        acc.terms += euler_phi(d1) + euler_phi(d2)


_FILLERS = {"aba": _fine_into, "bab": _fine_braid_into}


def fine_kloosterman(ch, key) -> SumResult:
    """The sum over one fine stratum along alpha-beta-alpha, in closed form.

    ``key`` is a :class:`StratumKey` or a triple (d1, d2, f).
    """
    ch, key = _as_chars(ch), _key(key)
    m, n, d1, d2 = _unsign(ch.m, ch.n, key.d1, key.d2)
    acc = _Accumulator(math.lcm(d1, d2))
    _fine_into(acc, m, n, d1, d2, key.f)
    return SumResult(acc.value(), "fine", acc.terms)


def fine_kloosterman_braid(ch, key) -> SumResult:
    """The sum over one fine stratum along beta-alpha-beta, in closed form."""
    ch, key = _as_chars(ch), _key(key, "bab")
    m, n, d1, d2 = _unsign(ch.m, ch.n, key.d1, key.d2)
    acc = _Accumulator(math.lcm(d1, d2))
    _fine_braid_into(acc, m, n, d1, d2, key.f)
    return SumResult(acc.value(), "fine-braid", acc.terms)


def coarse_kloosterman(ch, c1: int, c2: int, word: str = "aba", level: int = 1) -> SumResult:
    """The long-word sum for moduli (c1, c2), assembled from fine strata.

    ``word`` picks which reduced word's stratification is summed; ``level``
    keeps only strata with level | f.
    """
    ch = _as_chars(ch)
    if c1 == 0 or c2 == 0:
        raise ValueError("moduli must be nonzero")
    fill = _FILLERS[word]
    acc = _Accumulator(math.lcm(abs(c1), abs(c2)))
    for key in level_filter(strata_of(abs(c1), abs(c2), word), level):
        d1 = key.d1 if c1 > 0 else -key.d1
        d2 = key.d2 if c2 > 0 else -key.d2
        m, n, a1, a2 = _unsign(ch.m, ch.n, d1, d2)
        fill(acc, m, n, a1, a2, key.f)
    return SumResult(acc.value(), f"coarse-{word}", acc.terms)


# --------------------------------------------------------------------------


def coprime_fast_path(ch, key) -> SumResult:
    """Closed form for strata with gcd(f, d1*d2) = 1; falls back otherwise."""
    ch, key = _as_chars(ch), _key(key)
    m, n, d1, d2 = _unsign(ch.m, ch.n, key.d1, key.d2)
    f = key.f
    if math.gcd(f, d1 * d2) != 1:
        return fine_kloosterman(ch, key)
    (m1, m2), (n1, n2) = m, n
    e = math.gcd(n2, f)
    L = math.lcm(d1, d2)
    if e != math.gcd(m2, f):
        return SumResult(CycSum.from_int(0, L), "coprime", 0)
    h = f // e
    h_star = primary_part(f, h)
    count = euler_phi(f // h_star) * (h_star // h)
    fbar = inv_mod(f, d1 * d2)
    acc = _Accumulator(L)
    acc.add_product(
        kloosterman_histogram(n1, m2 * d2 * fbar, d1), d1,
        kloosterman_histogram(m1, n2 * d1 * fbar, d2), d2,
        f * count,
    )
    return SumResult(acc.value(), "coprime", euler_phi(d1) + euler_phi(d2))


def bound_coprime(ch, key) -> float:
    """Weil-type bound for a coprime stratum: f e sqrt(...) tau(d1) tau(d2)."""
    ch, key = _as_chars(ch), _key(key)
    (m1, m2), (n1, n2) = ch.m, ch.n
    d1, d2, f = abs(key.d1), abs(key.d2), key.f
    e = math.gcd(n2, f)
    return (
        f * e
        * math.sqrt(math.gcd(m1, n2 * d1, d2) * d2)
        * math.sqrt(math.gcd(n1, m2 * d2, d1) * d1)
        * tau(d1) * tau(d2)
    )


# --------------------------------------------------------------------------
# shorter Weyl elements


def compatibility_check(w, ch, c1: int, c2: int) -> tuple[bool, str]:
    """Whether the sum for w is well defined for these characters and moduli.

    Implements the general criterion for SL3 (with c0 = c3 = 1); returns the
    verdict and a human-readable reason.
    """
    if isinstance(w, str):
        w = Weyl.from_name(w)
    ch = _as_chars(ch)
    m, n = ch.m, ch.n
    c = (1, c1, c2, 1)
    perm = w.perm
    inv = [0, 0, 0]
    for j, wj in enumerate(perm):
        inv[wj - 1] = j + 1
    for k in (1, 2):
        if perm[k - 1] < perm[k]:
            if perm[k] != perm[k - 1] + 1:
                if n[k - 1] != 0:
                    return False, f"n{k} must vanish for {w.name}"
            else:
                # n_k = c_k^2 / (c_{k-1} c_{k+1}) * m_{w(k)}
                lhs = n[k - 1] * c[k - 1] * c[k + 1]
                rhs = c[k] ** 2 * m[perm[k - 1] - 1]
                if lhs != rhs:
                    return False, (
                        f"need n{k} = c{k}^2/(c{k-1} c{k+1}) * m{perm[k - 1]} for {w.name}"
                    )
        if inv[k - 1] < inv[k] and inv[k] != inv[k - 1] + 1 and m[k - 1] != 0:
            return False, f"m{k} must vanish for {w.name}"
    return True, "compatible"


def _warn_or_raise(msg, strict):
    if strict:
        raise IncompatibleCharacters(msg)
    warnings.warn(msg, HiddenConditionWarning, stacklevel=3)


def hyper_kloosterman_ab(m1, n1, n2, d1, d2, *, strict=False) -> SumResult:
    """sum over units x1 mod d1, x2 mod d2 of e(m1 x1/d1 + n1 x1^-1 x2/d1 + n2 x2^-1/d2).

    The sum only depends on the chosen lifts when d1 divides n1*d2 (the
    side condition d2*n1 = d1*m2 with integral m2); without it a warning is
    issued, or an error when ``strict``.
    """
    if d1 < 1 or d2 < 1:
        raise ValueError("moduli must be positive")
    if (n1 * d2) % d1:
        _warn_or_raise(f"d1={d1} does not divide n1*d2={n1 * d2}", strict)
    L = math.lcm(d1, d2)
    s1, s2 = L // d1, L // d2
    hist = [0] * L
    for x1 in units(d1):
        x1b = inv_mod(x1, d1)
        for x2 in units(d2):
            x2b = inv_mod(x2, d2)
            hist[(m1 * x1 * s1 + n1 * x1b * x2 * s1 + n2 * x2b * s2) % L] += 1
    return SumResult(CycSum.from_histogram(L, hist), "hyper-ab", len(units(d1)) * len(units(d2)))


def hyper_kloosterman_ba(m1, m2, n1, d1, d2, *, strict=False) -> SumResult:
    """sum over units x1 mod d1, x2 mod d2 of e(m1 x2 x1^-1/d2 + m2 x1/d1 + n1 x2^-1/d2).

    Lift-independent when d2 divides d1*m1 (the side condition d2*n2 = d1*m1).
    """
    if d1 < 1 or d2 < 1:
        raise ValueError("moduli must be positive")
    if (d1 * m1) % d2:
        _warn_or_raise(f"d2={d2} does not divide d1*m1={d1 * m1}", strict)
    L = math.lcm(d1, d2)
    s1, s2 = L // d1, L // d2
    hist = [0] * L
    for x1 in units(d1):
        x1b = inv_mod(x1, d1)
        for x2 in units(d2):
            x2b = inv_mod(x2, d2)
            hist[(m1 * x2 * x1b * s2 + m2 * x1 * s1 + n1 * x2b * s2) % L] += 1
    return SumResult(CycSum.from_histogram(L, hist), "hyper-ba", len(units(d1)) * len(units(d2)))


# --------------------------------------------------------------------------
# trivial left character


def ramanujan_general(c1: int, c2: int, n1: int, n2: int) -> SumResult:
    """The long-word sum with m = (0, 0), as an explicit sum of Ramanujan sums."""
    from .arith import ramanujan_c

    if c1 < 1 or c2 < 1:
        raise ValueError("moduli must be positive")
    total = 0
    terms = 0
    for f in divisors(math.gcd(c1, c2)):
        if (n2 * c1) % (f * f):
            continue
        total += (
            f
            * ramanujan_c(c1 // f, n1)
            * ramanujan_c(f, n2)
            * ramanujan_c(c2 // f, c1 * n2 // (f * f))
        )
        terms += 1
    return SumResult(CycSum.from_int(total), "ramanujan", terms)


# --------------------------------------------------------------------------
# bounds


def _chars(ch):
    ch = _as_chars(ch)
    return ch.m + ch.n


def bound_stevens(ch, c1: int, c2: int) -> float:
    m1, m2, n1, n2 = _chars(ch)
    C = math.lcm(c1, c2)
    return (
        tau(c1) * tau(c2)
        * math.sqrt(math.gcd(m1 * n2, C) * math.gcd(m2 * n1, C) * math.gcd(c1, c2))
        * math.sqrt(c1 * c2)
    )


def bound_paper(ch, c1: int, c2: int) -> float:
    """sqrt(c1 c2 (c1,c2)) tau((c1,c2)) tau(c1) tau(c2) min(A, B)."""
    m1, m2, n1, n2 = _chars(ch)
    g = math.gcd(c1, c2)
    a = math.sqrt(math.gcd(m2 * n1, c1) * math.gcd(n2 * m1, c2))
    b = math.sqrt(math.gcd(m2 * n1, c2) * math.gcd(n2 * m1, c1))
    return math.sqrt(c1 * c2 * g) * tau(g) * tau(c1) * tau(c2) * min(a, b)


def bound_fine_sweep(ch, c1: int, c2: int, word: str = "aba") -> float:
    """Sum over strata of the Weil bound per stratum, for either reduced word."""
    m1, m2, n1, n2 = _chars(ch)
    total = 0.0
    root = math.sqrt(c1 * c2)
    for f in divisors(math.gcd(c1, c2)):
        d1, d2 = c1 // f, c2 // f
        if word == "aba":
            if math.gcd(m2 * d2, f) != math.gcd(n2 * d1, f):
                continue
            count = math.gcd(f, m2 * d2)
            weil = math.sqrt(math.gcd(n1, d1) * math.gcd(m1, d2))
        else:
            if math.gcd(n1 * d2, f) != math.gcd(m1 * d1, f):
                continue
            count = math.gcd(f, m1 * d1)
            weil = math.sqrt(math.gcd(m2, d1) * math.gcd(n2, d2))
        total += count * weil * root * tau(d1) * tau(d2)
    return total


# --------------------------------------------------------------------------
# geometric side of the level-N trace formula


@dataclass(frozen=True)
class KuznetsovTerm:
    kind: str
    eps: tuple
    moduli: tuple
    value: CycSum
    weight_arg: tuple

    def to_json(self) -> dict:
        z = self.value.to_complex()
        return {
            "kind": self.kind,
            "eps": list(self.eps),
            "moduli": list(self.moduli),
            "exact": self.value.to_json(),
            "approx": [z.real, z.imag],
            "weight_arg": list(self.weight_arg),
        }


def kuznetsov_geometric_indices(N: int, m, n, cutoff: int):
    """Every Kloosterman term of the geometric side with moduli up to ``cutoff``.

    Yields :class:`KuznetsovTerm` records; the integral transforms are not
    evaluated, only their arguments are reported.
    """
    if N < 1 or cutoff < 1:
        raise ValueError("N and cutoff must be positive")
    m1, m2 = m
    n1, n2 = n
    if min(m1, m2, n1, n2) < 1:
        raise ValueError("character entries must be positive")
    pairs = [(d1, d2) for d1 in range(1, cutoff + 1) for d2 in range(1, cutoff // d1 + 1)]
    for eps in (1, -1):
        for d1, d2 in pairs:
            if d2 * n1 == d1 * m2 and d2 % N == 0:
                val = hyper_kloosterman_ab(eps * m1, n1, n2, d1, d2, strict=True).value
                arg = math.sqrt(n1 * n2 * m1) / (d1 * math.sqrt(d2))
                yield KuznetsovTerm("Sigma4", (eps,), (d1, d1 * d2), val, (arg,))
    for eps in (1, -1):
        for d1, d2 in pairs:
            if d2 * n2 == d1 * m1 and d1 % N == 0:
                val = hyper_kloosterman_ab(eps * m2, n2, n1, d1, d2, strict=True).value
                arg = math.sqrt(n1 * n2 * m2) / (d1 * math.sqrt(d2))
                yield KuznetsovTerm("Sigma5", (eps,), (d1, d1 * d2), val, (arg,))
    for e1 in (1, -1):
        for e2 in (1, -1):
            for f in range(N, cutoff + 1, N):
                for d1 in range(1, cutoff // f + 1):
                    for d2 in range(1, cutoff // f + 1):
                        val = fine_kloosterman(((e1 * m1, e2 * m2), (n1, n2)), (d1, d2, f)).value
                        arg = (
                            math.sqrt(n2 * m1 * d1) / (d2 * math.sqrt(f)),
                            math.sqrt(n1 * m2 * d2) / (d1 * math.sqrt(f)),
                        )
                        yield KuznetsovTerm("Sigma6", (e1, e2), (d1, d2, f), val, arg)
