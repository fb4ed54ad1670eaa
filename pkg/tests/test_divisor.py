import itertools
from fractions import Fraction

import mpmath
import pytest

from sl3kloosterman.arith import divisors
from sl3kloosterman.divisor import (
    d3,
    hecke_check,
    ramanujan_classical_check,
    schur_prime_power,
    sigma,
    sigma2,
    sigma2_expansion,
    sigma2_schur,
    verify_divisor_identity,
    zeta,
)


def test_sigma_examples():
    assert sigma(0, 12) == 6
    assert sigma(1, 6) == 12
    assert sigma(-1, 6) == Fraction(2)
    assert sigma2(0, 0, 1, 1) == 1
    with pytest.raises(ValueError):
        sigma(1, 0)


def test_d3_counts_ordered_factorizations():
    for n in range(1, 60):
        brute = sum(1 for a in divisors(n) for b in divisors(n // a))
        assert d3(n) == brute


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_schur_routes_agree_on_prime_powers(p):
    for k1, k2 in itertools.product(range(5), repeat=2):
        for nu in [(0, 0), (1, 0), (0, 1), (-1, 2), (2, -1), (-1, -1), (3, 1)]:
            assert sigma2_schur(*nu, p**k1, p**k2) == sigma2_expansion(*nu, p**k1, p**k2)


def test_routes_agree_on_composites():
    for n1, n2 in itertools.product(range(1, 40), range(1, 40, 3)):
        for nu in [(0, 0), (1, -1), (-1, -1)]:
            sigma2(*nu, n1, n2)  # raises on disagreement
    for n in range(1, 201):
        assert sigma2(0, 0, 1, n) == d3(n)


def test_complex_exponents_agree():
    for n1, n2 in [(4, 6), (12, 18), (9, 27)]:
        a = sigma2_schur(0.5 + 1j, -0.3, n1, n2)
        b = sigma2_expansion(0.5 + 1j, -0.3, n1, n2)
        assert abs(a - b) < 1e-9 * abs(b)


def test_coinciding_arguments_use_jacobi_trudi():
    # nu2 = 0 makes the first two Schur arguments equal
    assert schur_prime_power(3, 2, 1, 1, 0) == sigma2_expansion(1, 0, 9, 3)


def test_hecke_relation():
    for alpha in (0, 1, 2, -1, 0.5 + 0.25j):
        for n in range(2, 60):
            for p in (2, 3, 5, 7):
                if n % p == 0:
                    assert hecke_check(alpha, n, p)
    with pytest.raises(ValueError):
        hecke_check(1, 9, 2)


@pytest.mark.parametrize("s", [1.5, 2, 3, 2 + 5j, 1.1 - 0.5j])
def test_zeta_matches_mpmath(s):
    assert abs(zeta(s) - complex(mpmath.zeta(s))) < 1e-12
    with pytest.raises(ValueError):
        zeta(1)


def test_truncation_error_shrinks():
    small = verify_divisor_identity(2, 2, 12, D=250)["abs_err"]
    large = verify_divisor_identity(2, 2, 12, D=2000)["abs_err"]
    assert large < small


def test_reports_are_consistent():
    r = verify_divisor_identity(2, 2, 6, D=500)
    assert set(r) == {"lhs", "rhs", "abs_err", "D", "tail_bound"}
    assert r["abs_err"] <= r["tail_bound"]
    r = ramanujan_classical_check(2, 6, D=2000)
    assert r["abs_err"] <= r["tail_bound"]
    with pytest.raises(ValueError):
        verify_divisor_identity(1, 2, 3)
