"""The twelve acceptance criteria, each printing a single PASS/FAIL line."""
import itertools
import math
import random

import pytest

from conftest import CMAX, char_pairs
from sl3kloosterman import oracle
from sl3kloosterman.arith import kloosterman, tau
from sl3kloosterman.divisor import ramanujan_classical_check, verify_divisor_identity
from sl3kloosterman.oracle import (
    PluckerSextuple,
    enumerate_plucker,
    enumerate_plucker_naive,
    realize_matrix,
)
from sl3kloosterman.slmat import (
    CellParams,
    canonical_params,
    canonical_rep,
    cell_congruences,
    cell_matrix,
    coset_equal,
    coset_key,
    gamma_inf,
    is_integral,
    unit_lifts,
    x3y3_pairs,
)
from sl3kloosterman.strata import StratumKey, coset_count, enumerate_cosets, strata_of
from sl3kloosterman.sums import (
    bound_paper,
    bound_stevens,
    coarse_kloosterman,
    coprime_fast_path,
    fine_kloosterman,
)

SMALL_PRIMES = (3, 5, 7, 11, 13)


def _nonzero(v):
    return any(v)


def test_oracle_equivalence(corpus, criterion):
    bad = [k for k, (aba, _, direct) in corpus.items() if aba != direct]
    ok = criterion(1, "closed form equals oracle", not bad, f"{len(corpus)} cases, {len(bad)} mismatches")
    assert ok, bad[:5]


def test_example_p_times_p_minus_one(criterion):
    misses = [
        p for p in (3, 5, 7, 11)
        if coarse_kloosterman(((1, p), (1, p)), p * p, p).value != p * (p - 1) * kloosterman(1, 1, p)
    ]
    assert criterion(2, "p(p-1)S(1,1;p)", not misses, "p = 3, 5, 7, 11"), misses


@pytest.mark.xfail(
    strict=True,
    reason="the value is 1-p: closed form, Plücker oracle and elimination-based "
    "coordinates all agree; see the decisions ledger",
)
def test_example_two_minus_p(criterion):
    got = {p: coarse_kloosterman(((1, 1), (p, p)), p, p).value.is_integer() for p in SMALL_PRIMES}
    misses = [p for p, v in got.items() if v != 2 - p]
    assert criterion(3, "2-p", not misses, f"got {list(got.values())}"), got


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_example_one_minus_p(p):
    # f = 1 gives S(p, p + p^2; p) S(1, p + p^2; p) = -(p - 1); the f = p stratum is empty
    got = coarse_kloosterman(((1, 1), (p, p)), p, p).value
    assert got == 1 - p == oracle.oracle_coarse(((1, 1), (p, p)), p, p).value


def test_example_p_plus_one(criterion):
    misses = 0
    for p in SMALL_PRIMES:
        rng = random.Random(1000 + p)
        pool = [x for x in range(-5 * p, 5 * p) if x % p]
        for _ in range(20):
            ch = ((rng.choice(pool), rng.choice(pool)), (rng.choice(pool), rng.choice(pool)))
            misses += coarse_kloosterman(ch, p, p).value != p + 1
    assert criterion(4, "p+1", misses == 0, f"20 pairs at each p, {misses} misses")


def test_counting(criterion):
    bad = []
    for c1, c2 in itertools.product(range(1, CMAX + 1), repeat=2):
        n = coset_count(c1, c2)
        fine = sum(sum(1 for _ in enumerate_cosets(k)) for k in strata_of(c1, c2))
        plucker = sum(1 for _ in enumerate_plucker(c1, c2))
        if not n == fine == plucker:
            bad.append((c1, c2, n, fine, plucker))
    assert criterion(5, "coset count three ways", not bad, f"{CMAX * CMAX} moduli"), bad


def test_braid_independence(corpus, criterion):
    bad = [k for k, (aba, bab, _) in corpus.items() if aba != bab]
    ok = criterion(6, "both reduced words agree", not bad, f"{len(corpus)} cases")
    assert ok, bad[:5]


@pytest.mark.slow
def test_coprime_fast_path(criterion):
    r = range(-4, 5)
    checked, bad = 0, []
    for d1, d2, f in itertools.product(range(1, 11), repeat=3):
        if math.gcd(f, d1 * d2) != 1:
            continue
        for m1, m2, n1, n2 in itertools.product(r, r, r, r):
            ch = ((m1, m2), (n1, n2))
            checked += 1
            if coprime_fast_path(ch, (d1, d2, f)).value != fine_kloosterman(ch, (d1, d2, f)).value:
                bad.append((ch, (d1, d2, f)))
    assert criterion(7, "coprime closed form", not bad, f"{checked} cases"), bad[:5]


def test_level_structure(criterion):
    chars = char_pairs(range(-1, 2))
    bad = []
    for N in (2, 3, 4):
        for c1, c2 in itertools.product(range(1, CMAX + 1), repeat=2):
            for ch in chars:
                fine = coarse_kloosterman(ch, c1, c2, level=N).value
                if oracle.oracle_level(ch, c1, c2, N).value != fine:
                    bad.append((N, c1, c2, ch))
    # the level-2 sum for (4, 6) is one fine sum, and no coarse sum matches it identically
    grid = char_pairs()
    same = all(
        oracle.oracle_level(ch, 4, 6, 2).value == fine_kloosterman(ch, (2, 3, 2)).value for ch in grid
    )
    lookalikes = [
        (c1, c2)
        for c1, c2 in itertools.product(range(1, CMAX + 1), repeat=2)
        if all(coarse_kloosterman(ch, c1, c2).value == fine_kloosterman(ch, (2, 3, 2)).value for ch in grid)
    ]
    ok = criterion(
        8, "level-N oracle equals N | f strata", not bad and same and not lookalikes,
        f"{len(bad)} mismatches, {len(lookalikes)} coarse look-alikes",
    )
    assert ok, (bad[:5], lookalikes)


def _sharpness():
    """(ok, ratios) for the p^(5/2) example against both bounds."""
    ratios, ok = [], True
    for p in SMALL_PRIMES:
        ch = ((1, p), (1, p))
        S = abs(coarse_kloosterman(ch, p * p, p).approx)
        ratios.append(S / p**2.5)
        ok &= S <= bound_paper(ch, p * p, p) * (1 + 1e-6)
        ok &= S <= bound_stevens(ch, p * p, p) * (1 + 1e-6)
        ok &= bound_stevens(ch, p * p, p) / p**3 <= 6 + 1e-9
    # bounded by the Weil estimate, and not decaying
    ok &= max(ratios) <= 2 and max(ratios[2:]) > 0.5
    return ok, ratios


@pytest.mark.xfail(
    strict=True,
    reason="the stated min(A, B) bound fails when a character entry vanishes, "
    "e.g. m=(0,-2), n=(-2,0), c=(1,7): |S| = 6 > 2*sqrt(7); see the decisions ledger",
)
def test_bounds(corpus, criterion):
    bad = []
    for (c1, c2, ch), (aba, _, _) in corpus.items():
        if not (_nonzero(ch[0]) and _nonzero(ch[1])):
            continue
        if abs(aba.to_complex()) > bound_paper(ch, c1, c2) * (1 + 1e-6):
            bad.append((c1, c2, ch))
    sharp, ratios = _sharpness()
    detail = f"{len(bad)} violations; sharpness ratios " + ", ".join(f"{r:.3f}" for r in ratios)
    criterion(9, "bounds", not bad and sharp, detail)
    assert not bad and sharp, bad[:5]


def test_bound_sharpness():
    ok, ratios = _sharpness()
    assert ok, ratios


def test_bound_with_a_only_holds(corpus):
    # the A term alone is what both proof routes give
    for (c1, c2, ch), (aba, _, _) in corpus.items():
        (m1, m2), (n1, n2) = ch
        g = math.gcd(c1, c2)
        a = math.sqrt(math.gcd(m2 * n1, c1) * math.gcd(n2 * m1, c2))
        bound = math.sqrt(c1 * c2 * g) * tau(g) * tau(c1) * tau(c2) * a
        assert abs(aba.to_complex()) <= bound * (1 + 1e-6)


def test_bound_as_stated_holds_without_zero_entries(corpus):
    for (c1, c2, ch), (aba, _, _) in corpus.items():
        if 0 in ch[0] + ch[1]:
            continue
        assert abs(aba.to_complex()) <= bound_paper(ch, c1, c2) * (1 + 1e-6)


def test_divisor_identities(criterion):
    worst_double = max(verify_divisor_identity(2, 2, n, D=2000)["abs_err"] for n in range(1, 13))
    worst_single = max(ramanujan_classical_check(2, n, D=5000)["abs_err"] for n in range(1, 13))
    ok = worst_double < 1e-3 and worst_single < 1e-4
    assert criterion(10, "divisor series", ok, f"max errors {worst_double:.1e}, {worst_single:.1e}")


def test_integrality_and_bijection(criterion):
    points = bad_iff = bad_classes = 0
    for d1, d2, f in itertools.product(range(1, 5), repeat=3):
        Q = d1 * d2 * f
        for x2 in unit_lifts(d2, Q):
            for y1 in unit_lifts(d1, Q):
                for x3, y3 in x3y3_pairs(f):
                    integral = set()
                    for u, v in itertools.product(range(Q), repeat=2):
                        points += 1
                        hit = is_integral(cell_matrix(d1, d2, f, x2, y1, x3, y3, u, v))
                        bad_iff += hit != cell_congruences(d1, d2, f, x2, y1, x3, y3, u, v)
                        if hit:
                            integral.add((u, v))
                    params = [CellParams(d1, d2, f, x2, y1, x3, y3, k) for k in range(f)]
                    bad_classes += integral != {(p.u % Q, p.v % Q) for p in params}

    # coset_equal separates exactly the parameter classes
    rng = random.Random(7)
    bad_sep = 0
    for d1, d2, f in itertools.product(range(1, 5), repeat=3):
        params = list(enumerate_cosets(StratumKey(d1, d2, f)))
        reps = [canonical_rep(p) for p in params]
        for i, j in itertools.combinations(range(len(reps)), 2):
            bad_sep += coset_equal(reps[i], reps[j])
        for p, A in zip(params, reps):
            # other lifts of the same residues land in the same coset
            other = canonical_params(d1, d2, f, p.x2 + d2, p.y1 + d1, p.y3 + f, p.k + f)
            moved = gamma_inf(*(rng.randint(-9, 9) for _ in range(3))) @ A
            bad_sep += not coset_equal(A, canonical_rep(other))
            bad_sep += coset_key(moved) != p
    ok = not (bad_iff or bad_classes or bad_sep)
    assert criterion(
        11, "integrality iff congruences; bijection", ok,
        f"{points} points, {bad_iff + bad_classes + bad_sep} failures",
    )


def test_plucker_ordering(criterion):
    a = realize_matrix(PluckerSextuple(2, 1, 0, 2, 2, -1))
    b = realize_matrix(PluckerSextuple(2, 1, 1, 2, 0, -1))
    collide = coset_equal(a, b)
    over = []
    for c1, c2 in itertools.product(range(1, 7), repeat=2):
        naive = [realize_matrix(s) for s in enumerate_plucker_naive(c1, c2)]
        distinct = {coset_key(A) for A in naive}
        # the naive list covers every coset but repeats some
        assert len(distinct) == coset_count(c1, c2)
        if len(naive) > coset_count(c1, c2):
            over.append((c1, c2))
    ok = collide and (2, 2) in over
    assert criterion(12, "Plücker ordering", ok, f"naive overcounts at {len(over)} of 36 moduli")
