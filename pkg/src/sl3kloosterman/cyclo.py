"""Exact arithmetic in cyclotomic integer rings Z[zeta_L].

A :class:`CycSum` stores an element of Z[x]/(Phi_L) by its canonical
coefficient vector (degree < phi(L)).  Everything is exact: coefficients are
Python integers, and reduction modulo the monic polynomial Phi_L never
divides.  Values of different moduli are merged at the lcm.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DEFAULT_MODULUS_CAP = 10**6
_modulus_cap = DEFAULT_MODULUS_CAP

# Dense reduction matrices are only built for small L; above this the
# reduction runs as sparse long division on Python ints.
_MATRIX_LIMIT = 1024
_INT64_SAFE = 1 << 62


class ModulusCapError(ValueError):
    """Raised when an operation would need a modulus above the configured cap."""


def set_modulus_cap(cap: int) -> int:
    """Set the largest modulus binary operations may create; returns the old cap."""
    global _modulus_cap
    if cap < 1:
        raise ValueError("modulus cap must be positive")
    old, _modulus_cap = _modulus_cap, int(cap)
    return old


def get_modulus_cap() -> int:
    return _modulus_cap


def _check_cap(L):
    if L > _modulus_cap:
        raise ModulusCapError(
            f"modulus {L} exceeds cap {_modulus_cap}; raise it with set_modulus_cap()"
        )


# --------------------------------------------------------------------------
# cyclotomic polynomials


def _poly_exact_div(num, den):
    """Quotient of integer polynomials (lowest degree first), den monic, exact."""
    num = list(num)
    dn = len(den) - 1
    terms = [(k, c) for k, c in enumerate(den[:-1]) if c]
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            q[i - dn] = c
            base = i - dn
            for k, a in terms:
                num[base + k] -= c * a
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def _cyclotomic_squarefree(n):
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, for squarefree n
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, _cyclotomic_squarefree(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int) -> tuple:
    """Coefficients of Phi_L, lowest degree first."""
    if L < 1:
        raise ValueError(f"cyclotomic index must be positive, got {L}")
    rad = math.prod(_prime_factors(L))
    base = _cyclotomic_squarefree(rad)
    step = L // rad
    if step == 1:
        return base
    # Phi_L(x) = Phi_rad(x^(L/rad))
    out = [0] * ((len(base) - 1) * step + 1)
    for k, c in enumerate(base):
        out[k * step] = c
    return tuple(out)


def totient(L: int) -> int:
    return len(cyclotomic_poly(L)) - 1


@lru_cache(maxsize=None)
def _reduction_matrix(L):
    """(L, phi(L)) int64 matrix whose row i is x^i mod Phi_L, or None."""
    phi_poly = cyclotomic_poly(L)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(L):
        rows.append(cur)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * a for c, a in zip(cur, phi_poly[:-1])]
    biggest = max(abs(c) for row in rows for c in row)
    if biggest >= 1 << 31:
        return None
    mat = np.array(rows, dtype=np.int64)
    mat.setflags(write=False)
    return mat, biggest


def _reduce_long(L, hist):
    phi_poly = cyclotomic_poly(L)
    deg = len(phi_poly) - 1
    terms = [(k, a) for k, a in enumerate(phi_poly[:-1]) if a]
    h = [int(x) for x in hist]
    for i in range(len(h) - 1, deg - 1, -1):
        c = h[i]
        if c:
            h[i] = 0
            base = i - deg
            for k, a in terms:
                h[base + k] -= c * a
    return tuple(h[:deg])


def reduce_histogram(L: int, hist) -> tuple:
    """Canonical coefficients of sum_j hist[j] x^j modulo Phi_L.

    ``hist`` has length L (one slot per residue).
    """
    if len(hist) != L:
        raise ValueError(f"histogram length {len(hist)} does not match modulus {L}")
    packed = _reduction_matrix(L) if L <= _MATRIX_LIMIT else None
    if packed is not None:
        mat, biggest = packed
        if isinstance(hist, np.ndarray) and hist.dtype != object:
            weight = int(np.abs(hist).sum())
            if weight * biggest < _INT64_SAFE:
                return tuple((hist.astype(np.int64) @ mat).tolist())
        else:
            weight = sum(abs(int(x)) for x in hist)
            if weight * biggest < _INT64_SAFE:
                arr = np.array([int(x) for x in hist], dtype=np.int64)
                return tuple((arr @ mat).tolist())
    return _reduce_long(L, hist)


# --------------------------------------------------------------------------
# values


class CycSum:
    """An exact element sum_j a_j zeta_L^j of Z[zeta_L].

    Construct from any length-L coefficient list (interpreted modulo
    x^L - 1); the stored form is canonical modulo Phi_L.
    """

    __slots__ = ("_L", "_c")

    def __init__(self, modulus: int, coeffs=()):
        L = int(modulus)
        if L < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        hist = [0] * L
        for j, a in enumerate(coeffs):
            hist[j % L] += int(a)
        self._L = L
        self._c = reduce_histogram(L, hist)

    @classmethod
    def _canonical(cls, L, canon):
        obj = cls.__new__(cls)
        obj._L = L
        obj._c = tuple(canon)
        return obj

    @classmethod
    def from_histogram(cls, L: int, hist) -> "CycSum":
        """Reduce a raw residue histogram (length L) in one pass."""
        return cls._canonical(L, reduce_histogram(L, hist))

    @classmethod
    def from_int(cls, k: int, modulus: int = 1) -> "CycSum":
        canon = [0] * totient(modulus)
        canon[0] = int(k)
        return cls._canonical(modulus, canon)

    # -- accessors -----------------------------------------------------------

    @property
    def modulus(self) -> int:
        return self._L

    @property
    def canonical(self) -> tuple:
        """Coefficients of 1, zeta, ..., zeta^(phi(L)-1)."""
        return self._c

    @property
    def coeffs(self) -> tuple:
        """Length-L coefficient vector (canonical, trailing zeros)."""
        return self._c + (0,) * (self._L - len(self._c))

    def is_integer(self):
        """The rational integer this equals, or None."""
        if any(self._c[1:]):
            return None
        return self._c[0]

    def is_zero(self) -> bool:
        return not any(self._c)

    # -- moduli ----------------------------------------------------------------

    def rebase(self, modulus: int) -> "CycSum":
        """The same element viewed in Z[zeta_M] for a multiple M of the modulus."""
        M = int(modulus)
        if M % self._L:
            raise ValueError(f"{M} is not a multiple of {self._L}")
        if M == self._L:
            return self
        _check_cap(M)
        step = M // self._L
        hist = [0] * M
        for j, a in enumerate(self._c):
            hist[j * step] = a
        return CycSum.from_histogram(M, hist)

    def _align(self, other):
        if isinstance(other, CycSum):
            if other._L == self._L:
                return self, other
            L = math.lcm(self._L, other._L)
            _check_cap(L)
            return self.rebase(L), other.rebase(L)
        if isinstance(other, int):
            return self, CycSum.from_int(other, self._L)
        return None, None

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return CycSum._canonical(a._L, [x + y for x, y in zip(a._c, b._c)])

    __radd__ = __add__

    def __neg__(self):
        return CycSum._canonical(self._L, [-x for x in self._c])

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return CycSum._canonical(a._L, [x - y for x, y in zip(a._c, b._c)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycSum._canonical(self._L, [other * x for x in self._c])
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        L = a._L
        hist = [0] * L
        right = [(j, y) for j, y in enumerate(b._c) if y]
        for i, x in enumerate(a._c):
            if x:
                for j, y in right:
                    hist[(i + j) % L] += x * y
        return CycSum.from_histogram(L, hist)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result, base = CycSum.from_int(1, self._L), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycSum":
        """Complex conjugate: zeta^j -> zeta^(-j)."""
        L = self._L
        hist = [0] * L
        for j, a in enumerate(self._c):
            hist[-j % L] += a
        return CycSum.from_histogram(L, hist)

    def is_real(self) -> bool:
        return self == self.conjugate()

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a._c == b._c

    __hash__ = None  # equality crosses moduli, so no cheap consistent hash

    # -- floating point ----------------------------------------------------------

    def to_complex(self) -> complex:
        L = self._L
        re = im = 0.0
        for j, a in enumerate(self._c):
            if a:
                ang = 2.0 * math.pi * (j if 2 * j <= L else j - L) / L
                re += a * math.cos(ang)
                im += a * math.sin(ang)
        return complex(re, im)

    def error_bound(self) -> float:
        """A bound on |to_complex() - exact value| from rounding."""
        weight = sum(abs(a) for a in self._c)
        return weight * (len(self._c) + 4) * 2.0**-52

    def __complex__(self):
        return self.to_complex()

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {"L": self._L, "coeffs": list(self._c)}

    @classmethod
    def from_json(cls, data: dict) -> "CycSum":
        return cls(data["L"], data["coeffs"])

    def __repr__(self):
        k = self.is_integer()
        if k is not None:
            return f"CycSum({k})"
        terms = [f"{a}*z^{j}" if j else str(a) for j, a in enumerate(self._c) if a]
        return f"CycSum(L={self._L}: {' + '.join(terms)})"


class RationalAngle:
    """The argument num/den of e(num/den), reduced: 0 <= num < den, coprime."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den < 1:
            raise ValueError(f"denominator must be positive, got {den}")
        num %= den
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):
        raise AttributeError("RationalAngle is immutable")

    def __eq__(self, other):
        if isinstance(other, RationalAngle):
            return (self.num, self.den) == (other.num, other.den)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalAngle({self.num}/{self.den})"

    def __add__(self, other):
        if not isinstance(other, RationalAngle):
            return NotImplemented
        return RationalAngle(self.num * other.den + other.num * self.den, self.den * other.den)

    def exp(self) -> "CycSum":
        return root_of_unity(self.num, self.den)


def root_of_unity(a: int, q: int) -> CycSum:
    """e(a/q) = zeta_q^a as an exact value."""
    if q < 1:
        raise ValueError(f"root of unity needs a positive modulus, got {q}")
    hist = [0] * q
    hist[a % q] = 1
    return CycSum.from_histogram(q, hist)


def rebase(x: CycSum, modulus: int) -> CycSum:
    return x.rebase(modulus)


def add(a: CycSum, b: CycSum) -> CycSum:
    return a + b


def mul(a: CycSum, b: CycSum) -> CycSum:
    return a * b


def scale(a: CycSum, k: int) -> CycSum:
    return a * int(k)


def to_complex(a: CycSum) -> complex:
    return a.to_complex()


def is_integer(a: CycSum):
    return a.is_integer()


def exp_sum(phases, L: int) -> CycSum:
    """sum_j e(phases[j] / L) for an iterable of integers."""
    hist = [0] * L
    for p in phases:
        hist[p % L] += 1
    return CycSum.from_histogram(L, hist)


__all__ = [
    "CycSum",
    "ModulusCapError",
    "RationalAngle",
    "add",
    "cyclotomic_poly",
    "exp_sum",
    "get_modulus_cap",
    "is_integer",
    "mul",
    "rebase",
    "reduce_histogram",
    "root_of_unity",
    "scale",
    "set_modulus_cap",
    "to_complex",
    "totient",
]
