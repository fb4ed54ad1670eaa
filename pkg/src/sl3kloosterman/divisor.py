"""SL3 divisor sums and numerical checks of their Ramanujan-type expansions.

Values are exact :class:`~fractions.Fraction` objects when every exponent is
an integer, and Python complex numbers otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import divisors, factorize, ramanujan_c, tau


def _is_int(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return Fraction(x).denominator == 1
    if isinstance(x, float):
        return x.is_integer()
    return False


def _power(p: int, nu, exact: bool):
    """p**nu, as a Fraction when ``exact``, else complex."""
    if exact:
        return Fraction(p) ** int(nu)
    return complex(p) ** complex(nu)


def _exact(*nus) -> bool:
    return all(_is_int(nu) for nu in nus)


# --------------------------------------------------------------------------
# Schur route


def _bialternant(k1, k2, x, y, z):
    def det(e):
        return (
            x ** e[0] * (y ** e[1] - z ** e[1])
            - y ** e[0] * (x ** e[1] - z ** e[1])
            + z ** e[0] * (x ** e[1] - y ** e[1])
        )

    return det((k1 + k2 + 2, k1 + 1)) / det((2, 1))


def _complete_homogeneous(k, xs):
    if k < 0:
        return 0
    total = 0
    for i in range(k + 1):
        for j in range(k - i + 1):
            total += xs[0] ** i * xs[1] ** j * xs[2] ** (k - i - j)
    return total


def _jacobi_trudi(k1, k2, x, y, z):
    # s_lambda with lambda = (k1 + k2, k1, 0) as det(h_{lambda_i - i + j})
    lam = (k1 + k2, k1, 0)
    h = [[_complete_homogeneous(lam[i] - i + j, (x, y, z)) for j in range(3)] for i in range(3)]
    return (
        h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0])
    )


def schur_prime_power(p: int, k1: int, k2: int, nu1, nu2):
    """beta^-k1 * s_(k1+k2, k1, 0)(1, beta, alpha*beta) with alpha = p^nu1, beta = p^nu2.

    Uses the ratio of alternants unless two arguments coincide, where the
    ratio is 0/0 and the Jacobi-Trudi determinant is used instead.
    """
    exact = _exact(nu1, nu2)
    alpha, beta = _power(p, nu1, exact), _power(p, nu2, exact)
    args = (1, beta, alpha * beta)
    if exact:
        distinct = len(set(args)) == 3
    else:
        distinct = min(abs(args[0] - args[1]), abs(args[0] - args[2]), abs(args[1] - args[2])) > 1e-9
    value = _bialternant(k1, k2, *args) if distinct else _jacobi_trudi(k1, k2, *args)
    return value / beta**k1


def sigma2_schur(nu1, nu2, n1: int, n2: int):
    """sigma_{nu1,nu2}(n1, n2) assembled multiplicatively from prime powers."""
    _check_positive(n1, n2)
    exact = _exact(nu1, nu2)
    total = Fraction(1) if exact else complex(1)
    primes = {p for p, _ in factorize(n1)} | {p for p, _ in factorize(n2)}
    for p in sorted(primes):
        k1 = _valuation(n1, p)
        k2 = _valuation(n2, p)
        total *= schur_prime_power(p, k1, k2, nu1, nu2)
    return total


# --------------------------------------------------------------------------
# expansion route


def sigma2_expansion(nu1, nu2, n1: int, n2: int):
    """sum over e1 | n1, e2 | n2, e3 | n1 e2 / e1 of e1^(nu1+nu2) e2^nu2 e3^nu1."""
    _check_positive(n1, n2)
    exact = _exact(nu1, nu2)
    if exact:
        nu1, nu2 = int(nu1), int(nu2)
        pw = lambda a, nu: Fraction(a) ** nu  # noqa: E731
        total = Fraction(0)
    else:
        pw = lambda a, nu: complex(a) ** complex(nu)  # noqa: E731
        total = complex(0)
    for e1 in divisors(n1):
        for e2 in divisors(n2):
            for e3 in divisors(n1 * e2 // e1):
                total += pw(e1, nu1 + nu2) * pw(e2, nu2) * pw(e3, nu1)
    return total


def sigma2(nu1, nu2, n1: int, n2: int):
    """The SL3 divisor sum, computed by both routes; they must agree."""
    a = sigma2_schur(nu1, nu2, n1, n2)
    b = sigma2_expansion(nu1, nu2, n1, n2)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        if a != b:
            raise ArithmeticError(f"Schur and expansion routes disagree: {a} != {b}")
    elif abs(a - b) > 1e-9 * max(1.0, abs(b)):
        raise ArithmeticError(f"Schur and expansion routes disagree: {a} vs {b}")
    return a


def _valuation(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _check_positive(*ns):
    for n in ns:
        if n < 1:
            raise ValueError(f"arguments must be positive integers, got {n}")


# --------------------------------------------------------------------------
# classical divisor sums


def sigma(alpha, n: int):
    """sum_{d | n} d^alpha."""
    _check_positive(n)
    if _is_int(alpha):
        return sum(Fraction(d) ** int(alpha) for d in divisors(n))
    return sum(complex(d) ** complex(alpha) for d in divisors(n))


def hecke_check(alpha, n: int, p: int) -> bool:
    """sigma_a(np) = sigma_a(n) sigma_a(p) - p^a sigma_a(n/p), for p | n."""
    if n % p:
        raise ValueError(f"{p} does not divide {n}")
    lhs = sigma(alpha, n * p)
    rhs = sigma(alpha, n) * sigma(alpha, p) - _power(p, alpha, _is_int(alpha)) * sigma(alpha, n // p)
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs == rhs
    return abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


# --------------------------------------------------------------------------
# zeta

# B_2, B_4, ..., B_16
_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
)


def zeta(s, N: int = 20) -> complex:
    """Riemann zeta for Re(s) > 1 by Euler-Maclaurin with eight Bernoulli corrections."""
    s = complex(s)
    if s.real <= 1:
        raise ValueError("zeta is only evaluated for Re(s) > 1")
    total = sum(k ** -s for k in range(1, N))
    total += N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    rising = s  # s (s+1) ... (s+2j-2)
    fact = 1
    for j, b in enumerate(_BERNOULLI, start=1):
        fact *= (2 * j - 1) * (2 * j) if j > 1 else 2
        total += float(b) / fact * rising * N ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return total


# --------------------------------------------------------------------------
# truncated double series


def _require_convergent(*ss):
    for s in ss:
        if complex(s).real <= 1:
            raise ValueError(f"need Re(s) > 1 for convergence, got {s}")


@lru_cache(maxsize=8)
def _moebius_table(D: int):
    mu = np.ones(D + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(D + 1, dtype=bool)
    for p in range(2, D + 1):
        if not is_comp[p]:
            is_comp[2 * p :: p] = True
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return mu


@lru_cache(maxsize=8)
def _moebius_prefix(D: int, s: complex):
    """P[x] = sum_{q <= x} mu(q) q^-s for 0 <= x <= D."""
    mu = _moebius_table(D)
    q = np.arange(D + 1, dtype=float)
    q[0] = 1.0
    terms = mu * q ** (-s)
    terms[0] = 0
    return np.cumsum(terms)


def _ramanujan_dirichlet(k: int, s: complex, D: int) -> complex:
    # sum_{q <= D} c_q(k) q^-s = sum_{g | k} g^(1-s) * P(D // g)
    P = _moebius_prefix(D, s)
    return sum(g ** (1 - s) * P[D // g] for g in divisors(k) if g <= D)


def _report(lhs, rhs, D, tail):
    lhs = complex(lhs)
    return {
        "lhs": [lhs.real, lhs.imag],
        "rhs": [complex(rhs).real, complex(rhs).imag],
        "abs_err": float(abs(lhs - complex(rhs))),
        "D": D,
        "tail_bound": float(tail),
    }


def verify_divisor_identity(s1, s2, n: int, D: int = 2000) -> dict:
    """Compare zeta(s1) zeta(s2) zeta(s1+s2-1) times the double series cut at d1, d2 <= D
    with sigma_{1-s1, 1-s2}(1, n)."""
    _require_convergent(s1, s2)
    _check_positive(n, D)
    s1, s2 = complex(s1), complex(s2)
    w = s1 + s2 - 1
    mu = _moebius_table(D)
    partial = 0j
    for d1 in range(1, D + 1):
        if mu[d1] == 0:
            continue
        inner = 0j
        nd1 = n * d1
        for f in divisors(nd1):
            cf = ramanujan_c(f, n)
            if cf:
                inner += cf * f ** -w * _ramanujan_dirichlet(nd1 // f, s2, D)
        partial += int(mu[d1]) * d1 ** -s1 * inner
    zetas = zeta(s1) * zeta(s2) * zeta(w)
    lhs = zetas * partial
    rhs = sigma2(1 - _simplify(s1), 1 - _simplify(s2), 1, n)
    return _report(lhs, rhs, D, abs(zetas) * _tail_bound(s1.real, s2.real, n, D))


def _simplify(s: complex):
    # keep integer exponents exact so the target is computed exactly
    if s.imag == 0 and s.real.is_integer():
        return int(s.real)
    return s


def _tail_bound(sig1, sig2, n, D):
    """Crude majorant for the part of the double series outside d1, d2 <= D.

    Rankin's trick with delta = (min(sig1, sig2) - 1) / 2, combined with
    |c_q(k)| <= gcd(q, k), tau(n d) <= tau(n) tau(d) and
    sum |mu(d)| tau(d) d^-s <= zeta(s)^2.
    """
    delta = (min(sig1, sig2) - 1) / 2
    z = lambda s: zeta(s).real  # noqa: E731
    common = n * tau(n) * z(sig1 + sig2 - 1)
    d2_tail = D ** -delta * z(sig2 - delta) * z(sig1) ** 2
    d1_tail = D ** -delta * z(sig1 - delta) ** 2 * z(sig2)
    return common * (d1_tail + d2_tail)


def ramanujan_classical_check(s, n: int, D: int = 5000) -> dict:
    """Compare zeta(s) sum_{q <= D} c_q(n) q^-s with sigma_{1-s}(n)."""
    _require_convergent(s)
    _check_positive(n, D)
    s = complex(s)
    lhs = zeta(s) * _ramanujan_dirichlet(n, s, D)
    rhs = sigma(1 - _simplify(s), n)
    # |sum_{q > D} c_q(n) q^-s| <= sum_{g | n} g^(1-sig) sum_{q > D/g} q^-sig
    sig = s.real
    tail = sum(
        g ** (1 - sig) * (D / g) ** (1 - sig) * (1 / (sig - 1) + g / D) for g in divisors(n)
    )
    return _report(lhs, rhs, D, abs(zeta(s)) * tail)


def d3(n: int) -> int:
    """Number of ordered factorizations n = e1 e2 e3."""
    return int(sigma2_expansion(0, 0, 1, n))

