import itertools
import math
import random
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sl3kloosterman.arith import inv_mod, kloosterman, ramanujan_c, tau, units
from sl3kloosterman.cyclo import CycSum
from sl3kloosterman.strata import strata_of
from sl3kloosterman.sums import (
    HiddenConditionWarning,
    IncompatibleCharacters,
    bound_coprime,
    bound_fine_sweep,
    bound_paper,
    bound_stevens,
    coarse_kloosterman,
    compatibility_check,
    coprime_fast_path,
    fine_kloosterman,
    fine_kloosterman_braid,
    hyper_kloosterman_ab,
    hyper_kloosterman_ba,
    kuznetsov_geometric_indices,
    ramanujan_general,
)

chars = st.tuples(*(st.integers(-4, 4) for _ in range(4))).map(lambda t: ((t[0], t[1]), (t[2], t[3])))


def test_trivial_moduli():
    assert coarse_kloosterman(((3, -1), (2, 5)), 1, 1).value == 1
    assert fine_kloosterman(((1, 1), (1, 1)), (1, 1, 1)).value == 1


def test_spot_values():
    assert coarse_kloosterman(((1, 1), (1, 1)), 5, 5).value == 6
    assert fine_kloosterman(((1, 3), (1, 3)), (3, 1, 3)).value == -6


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_stratum_product(p):
    # f = 1: the sum factors as two classical sums
    ch = ((1, 2), (3, 1))
    got = fine_kloosterman(ch, (p, p, 1)).value
    assert got == kloosterman(3, 2 * p, p) * kloosterman(1, p, p)


def test_fine_vanishes_when_gcds_differ():
    # gcd(m2 d2, f) = gcd(2, 2) = 2 but gcd(n2 d1, f) = gcd(1, 2) = 1
    assert fine_kloosterman(((1, 2), (1, 1)), (1, 1, 2)).value == 0


@given(chars, st.integers(1, 6), st.integers(1, 6))
def test_coarse_words_agree_and_are_real(ch, c1, c2):
    a = coarse_kloosterman(ch, c1, c2, "aba").value
    assert a == coarse_kloosterman(ch, c1, c2, "bab").value
    assert a.is_real()


@given(chars, st.integers(1, 6), st.integers(1, 6))
def test_coarse_is_sum_of_fine(ch, c1, c2):
    total = sum((fine_kloosterman(ch, k).value for k in strata_of(c1, c2)), CycSum.from_int(0))
    assert total == coarse_kloosterman(ch, c1, c2).value


@given(chars, st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_braid_stratum_is_dagger_mirror(ch, d1, d2, f):
    (m1, m2), (n1, n2) = ch
    assert (
        fine_kloosterman_braid(ch, (d1, d2, f)).value
        == fine_kloosterman(((m2, m1), (n2, n1)), (d2, d1, f)).value
        == fine_kloosterman(((n2, n1), (m2, m1)), (d1, d2, f)).value
    )


@given(chars, st.integers(1, 6), st.integers(1, 6))
def test_signed_moduli_by_twist(ch, c1, c2):
    (m1, m2), (n1, n2) = ch
    assert coarse_kloosterman(ch, -c1, c2).value == coarse_kloosterman(((m1, m2), (n1, -n2)), c1, c2).value
    assert coarse_kloosterman(ch, c1, -c2).value == coarse_kloosterman(((m1, -m2), (n1, n2)), c1, c2).value


def test_zero_modulus_rejected():
    with pytest.raises(ValueError):
        coarse_kloosterman(((1, 1), (1, 1)), 0, 3)


@given(chars, st.integers(1, 10), st.integers(1, 10), st.integers(1, 10))
def test_coprime_fast_path(ch, d1, d2, f):
    assert coprime_fast_path(ch, (d1, d2, f)).value == fine_kloosterman(ch, (d1, d2, f)).value


def test_coprime_bound_holds():
    for d1, d2, f in itertools.product(range(1, 7), repeat=3):
        if math.gcd(f, d1 * d2) != 1:
            continue
        for ch in [((1, 1), (1, 1)), ((2, 3), (1, 2)), ((0, 1), (1, 0)), ((3, 2), (4, 1))]:
            S = abs(fine_kloosterman(ch, (d1, d2, f)).approx)
            assert S <= bound_coprime(ch, (d1, d2, f)) * (1 + 1e-9)


# --------------------------------------------------------------------------
# length-2 cells


def test_hyper_trivial_and_degenerate():
    assert hyper_kloosterman_ab(3, 1, 2, 1, 1).value == 1
    assert hyper_kloosterman_ba(3, 1, 2, 1, 1).value == 1
    for d2 in range(1, 13):
        for n2 in range(-5, 6):
            assert hyper_kloosterman_ab(4, 7, n2, 1, d2).value == ramanujan_c(d2, n2)


def test_hyper_side_condition_warns_or_raises():
    with pytest.warns(HiddenConditionWarning):
        hyper_kloosterman_ab(1, 1, 1, 2, 1)
    with pytest.raises(IncompatibleCharacters):
        hyper_kloosterman_ab(1, 1, 1, 2, 1, strict=True)
    with pytest.raises(IncompatibleCharacters):
        hyper_kloosterman_ba(1, 1, 1, 1, 2, strict=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hyper_kloosterman_ab(1, 2, 1, 2, 1)
    with pytest.raises(ValueError):
        hyper_kloosterman_ab(1, 1, 1, 0, 1)


def _hyper_ab_direct(m1, n1, n2, d1, d2, shift):
    """The displayed sum with the inverse of x2 lifted to xbar2 + shift*d2."""
    total = CycSum.from_int(0)
    L = d1 * d2
    for x1 in units(d1):
        for x2 in units(d2):
            x2b = inv_mod(x2, d2) + shift * d2
            num = m1 * x1 * d2 + n1 * inv_mod(x1, d1) * x2 * d2 + n2 * x2b * d1
            hist = [0] * L
            hist[num % L] = 1
            total = total + CycSum.from_histogram(L, hist)
    return total


def test_hyper_lift_independence_under_side_condition():
    for d1, d2 in itertools.product(range(1, 9), repeat=2):
        for m2 in (-1, 1, 2):
            if (d1 * m2) % d2:
                continue
            n1 = d1 * m2 // d2
            ref = hyper_kloosterman_ab(1, n1, 3, d1, d2, strict=True).value
            for shift in (1, 2):
                assert _hyper_ab_direct(1, n1, 3, d1, d2, shift) == ref


def test_hyper_cross_identity():
    for d1, d2 in itertools.product(range(1, 7), repeat=2):
        step = d2 // math.gcd(d1, d2)
        for m1 in (-step, step, 2 * step):
            n2 = d1 * m1 // d2
            for m2, n1 in itertools.product(range(-2, 3), repeat=2):
                assert (
                    hyper_kloosterman_ba(m1, m2, n1, d1, d2, strict=True).value
                    == hyper_kloosterman_ab(m2, n2, n1, d1, d2, strict=True).value
                )


def test_compatibility_table():
    ch = ((1, 2), (3, 4))
    assert compatibility_check("w0", ch, 3, 5) == (True, "compatible")
    assert compatibility_check("e", ((0, 0), (0, 0)), 1, 1)[0]
    assert not compatibility_check("e", ch, 1, 1)[0]
    assert compatibility_check("s_alpha", ((1, 0), (1, 0)), 1, 1)[0]
    ok, reason = compatibility_check("s_alpha", ((1, 0), (0, 1)), 1, 1)
    assert not ok and "n2" in reason
    ok, reason = compatibility_check("s_alpha", ((0, 1), (0, 0)), 1, 1)
    assert not ok and "m2" in reason


# --------------------------------------------------------------------------
# trivial left character


def test_ramanujan_general_examples():
    for p in (2, 3, 5, 7, 11):
        assert ramanujan_general(p, p, 1, 1).value == 1 - p
    assert ramanujan_general(1, 1, 5, -3).value == 1


def test_ramanujan_general_matches_coarse():
    rng = random.Random(5)
    for c1, c2 in itertools.product(range(1, 13), repeat=2):
        for _ in range(4):
            n = (rng.randint(-4, 4), rng.randint(-4, 4))
            assert ramanujan_general(c1, c2, *n).value == coarse_kloosterman(((0, 0), n), c1, c2).value


# --------------------------------------------------------------------------
# bounds


def test_stevens_and_sweep_bounds_hold():
    for c1, c2 in itertools.product(range(1, 9), repeat=2):
        for ch in [((1, 1), (1, 1)), ((1, 2), (2, 1)), ((2, 0), (0, 1)), ((1, -2), (3, 1))]:
            S = abs(coarse_kloosterman(ch, c1, c2).approx)
            assert S <= bound_stevens(ch, c1, c2) * (1 + 1e-6)
            assert S <= bound_fine_sweep(ch, c1, c2, "aba") * (1 + 1e-6)
            assert S <= bound_fine_sweep(ch, c1, c2, "bab") * (1 + 1e-6)


def test_bound_formula_values():
    ch = ((1, 1), (1, 1))
    assert bound_paper(ch, 5, 5) == pytest.approx(math.sqrt(125) * 2 * 2 * 2)
    assert bound_stevens(ch, 1, 1) == 1


# --------------------------------------------------------------------------
# geometric side


def test_kuznetsov_indices():
    terms = list(kuznetsov_geometric_indices(2, (1, 1), (1, 1), 6))
    kinds = {t.kind for t in terms}
    assert kinds == {"Sigma4", "Sigma5", "Sigma6"}
    for t in terms:
        if t.kind == "Sigma6":
            d1, d2, f = t.moduli
            assert f % 2 == 0 and d1 * f <= 6 and d2 * f <= 6
        else:
            d1, d1d2 = t.moduli
            assert d1d2 % d1 == 0
    sigma4 = [t for t in terms if t.kind == "Sigma4"]
    assert all((t.moduli[1] // t.moduli[0]) % 2 == 0 for t in sigma4)
    assert terms[0].to_json()["kind"] == terms[0].kind
    with pytest.raises(ValueError):
        list(kuznetsov_geometric_indices(1, (0, 1), (1, 1), 4))


def test_tau_is_used_consistently():
    assert tau(1) == 1 and tau(12) == 6
