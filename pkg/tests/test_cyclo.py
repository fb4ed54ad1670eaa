import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sl3kloosterman.cyclo import (
    CycSum,
    ModulusCapError,
    RationalAngle,
    add,
    cyclotomic_poly,
    get_modulus_cap,
    is_integer,
    mul,
    rebase,
    reduce_histogram,
    root_of_unity,
    scale,
    set_modulus_cap,
    to_complex,
    totient,
)


def test_roots_of_unity_examples():
    assert root_of_unity(0, 1) == 1
    assert root_of_unity(1, 2) == -1
    assert root_of_unity(3, 6) == -1
    with pytest.raises(ValueError):
        root_of_unity(1, 0)


def test_ring_examples():
    z3 = root_of_unity(1, 3)
    assert add(z3, add(root_of_unity(2, 3), CycSum.from_int(1))) == 0
    z4 = root_of_unity(1, 4)
    assert mul(z4, z4) == -1
    assert scale(CycSum.from_int(1), 5) == 5


def test_complex_projection_examples():
    assert to_complex(CycSum.from_int(0)) == 0
    assert abs(to_complex(root_of_unity(1, 4)) - 1j) < 1e-15
    assert abs(to_complex(root_of_unity(1, 3) + root_of_unity(2, 3)) + 1) < 1e-15


def test_is_integer_examples():
    assert is_integer(root_of_unity(0, 3) + root_of_unity(1, 3) + root_of_unity(2, 3)) == 0
    assert is_integer(root_of_unity(1, 4)) is None
    assert is_integer(scale(CycSum.from_int(1), -3)) == -3


@pytest.mark.parametrize("L", [1, 2, 6, 12, 30, 36, 105, 128])
def test_cyclotomic_degree_and_roots(L):
    poly = cyclotomic_poly(L)
    assert poly[-1] == 1
    assert totient(L) == sum(1 for k in range(1, L + 1) if math.gcd(k, L) == 1)
    z = cmath.exp(2j * math.pi / L)
    assert abs(sum(c * z**k for k, c in enumerate(poly))) < 1e-8


def test_cyclotomic_105_has_a_coefficient_minus_two():
    assert -2 in cyclotomic_poly(105)


def test_rational_angle_reduces():
    assert RationalAngle(9, 6) == RationalAngle(1, 2)
    assert RationalAngle(-1, 4).num == 3
    assert RationalAngle(1, 3) + RationalAngle(1, 6) == RationalAngle(1, 2)
    assert RationalAngle(5, 10).exp() == -1


cyc = st.builds(
    lambda L, cs: CycSum(L, cs),
    st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 12, 15]),
    st.lists(st.integers(-50, 50), max_size=15),
)


@given(cyc, cyc, cyc)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == 0


@given(cyc, st.integers(1, 6))
def test_rebase_preserves_equality(x, k):
    y = rebase(x, k * x.modulus)
    assert y == x
    assert abs(y.to_complex() - x.to_complex()) < 1e-9


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_complex_matches_trig(a, q):
    z = root_of_unity(a, q).to_complex()
    assert abs(z - cmath.exp(2j * math.pi * (a % q) / q)) < 1e-12


@given(cyc)
def test_reduction_is_idempotent(x):
    again = reduce_histogram(x.modulus, list(x.coeffs))
    assert again == x.canonical


@given(cyc)
def test_json_round_trip(x):
    assert CycSum.from_json(x.to_json()) == x


def test_large_modulus_uses_long_division():
    L = 2 * 3 * 5 * 7 * 11  # beyond the dense-matrix limit
    hist = [1] * L
    assert CycSum.from_histogram(L, hist) == 0


def test_big_coefficients_stay_exact():
    big = 10**30
    x = CycSum(7, [big, -big, 3])
    assert (x - CycSum(7, [big, -big, 0])) == 3 * root_of_unity(2, 7)


def test_modulus_cap():
    old = set_modulus_cap(30)
    try:
        assert get_modulus_cap() == 30
        with pytest.raises(ModulusCapError):
            root_of_unity(1, 7) + root_of_unity(1, 11)
    finally:
        set_modulus_cap(old)
    assert (root_of_unity(1, 7) + root_of_unity(1, 11)).modulus == 77


def test_unhashable():
    with pytest.raises(TypeError):
        hash(CycSum.from_int(1))
