"""Elementary multiplicative number theory and rank-one exponential sums."""
from __future__ import annotations

import math
from functools import lru_cache

from . import _kernels
from .cyclo import CycSum


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) > 0 and s*a + t*b = g."""
    if a == 0 and b == 0:
        raise ValueError("egcd(0, 0) is undefined")
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def inv_mod(a: int, q: int) -> int:
    """The inverse of a modulo q, in [0, q)."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if q == 1:
        return 0
    if math.gcd(a, q) != 1:
        raise ValueError(f"{a} is not invertible modulo {q}")
    return pow(a, -1, q)


def crt(residues, moduli) -> tuple[int, int]:
    """Combine x = r_i (mod q_i) for pairwise coprime q_i; returns (x, prod q_i)."""
    x, M = 0, 1
    for r, q in zip(residues, moduli):
        g, s, _ = egcd(M, q)
        if g != 1:
            raise ValueError("moduli must be pairwise coprime")
        x = (x + (r - x) * s * M) % (M * q)
        M *= q
    return x, M


# --------------------------------------------------------------------------
# factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as ((p, e), ...) with p increasing."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    p = 2
    # the primality screen lets a large prime cofactor exit early
    prime_left = is_prime(n)
    while not prime_left and p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
            prime_left = is_prime(n)
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _positive(n, name="n"):
    if n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")


def euler_phi(n: int) -> int:
    _positive(n)
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def moebius(n: int) -> int:
    _positive(n)
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def tau(n: int) -> int:
    _positive(n)
    return math.prod(e + 1 for _, e in factorize(n))


def divisors(n: int) -> list[int]:
    _positive(n)
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def radical(n: int) -> int:
    _positive(n)
    return math.prod(p for p, _ in factorize(n))


def primary_part(n: int, m: int) -> int:
    """The largest divisor of n built only from primes dividing m."""
    _positive(n)
    out = 1
    for p, e in factorize(n):
        if m % p == 0:
            out *= p**e
    return out


def units(q: int) -> list[int]:
    """Reduced residues in [0, q); [0] when q = 1."""
    _positive(q, "q")
    if q == 1:
        return [0]
    return [a for a in range(1, q) if math.gcd(a, q) == 1]


# --------------------------------------------------------------------------
# rank-one sums


def ramanujan_c(q: int, n: int) -> int:
    """c_q(n) = sum_{g | (q, n)} mu(q/g) g."""
    _positive(q, "q")
    g0 = math.gcd(q, n)
    return sum(moebius(q // g) * g for g in divisors(g0))


def ramanujan_c_direct(q: int, n: int) -> int:
    """c_q(n) as the exponential sum over units, evaluated exactly."""
    value = kloosterman(0, n, q).is_integer()
    assert value is not None
    return value


@lru_cache(maxsize=1 << 16)
def kloosterman_histogram(m: int, n: int, c: int):
    """Residue histogram of m*a + n*a^-1 over units a mod c (read-only)."""
    h = _kernels.kloosterman_histogram(m % c, n % c, c)
    h.setflags(write=False)
    return h


def kloosterman(m: int, n: int, c: int) -> CycSum:
    """The classical Kloosterman sum S(m, n; c), exactly."""
    _positive(c, "c")
    return CycSum.from_histogram(c, kloosterman_histogram(m % c, n % c, c))


def weil_bound(m: int, n: int, c: int) -> float:
    return tau(c) * math.sqrt(math.gcd(m, n, c)) * math.sqrt(c)
