"""Integral 3x3 matrices of determinant one and their Bruhat structure.

Conventions used throughout:

* indices are 1-based in method names (``A.e(3, 1)`` is the bottom-left entry);
* ``minor(i, j)`` deletes row i and column j and carries *no* cofactor sign,
  so ``minor(1, 3)`` is the lower-left 2x2 determinant A21*A32 - A22*A31;
* a Weyl element w sends column j to row w(j) (the row holding the single
  nonzero entry of column j of its signed permutation matrix).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import egcd, inv_mod

# --------------------------------------------------------------------------
# small exact matrix helpers (tuples of rows)


def matmul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def det3(A):
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def _minor(A, i, j):
    r = [k for k in range(3) if k != i - 1]
    c = [k for k in range(3) if k != j - 1]
    return A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]


def inverse3(A):
    """Exact inverse of a 3x3 matrix with nonzero determinant (Fractions)."""
    d = det3(A)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return tuple(
        tuple(Fraction((-1) ** (i + j) * _minor(A, j + 1, i + 1), d) for j in range(3))
        for i in range(3)
    )


def transpose(A):
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))


def diag(a, b, c):
    return ((a, 0, 0), (0, b, 0), (0, 0, c))


def unipotent(a12, a13, a23):
    return ((1, a12, a13), (0, 1, a23), (0, 0, 1))


def is_integral(A) -> bool:
    return all(Fraction(x).denominator == 1 for row in A for x in row)


def as_int_rows(A):
    out = []
    for row in A:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"matrix entry {x} is not integral")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


def iota_alpha(g):
    """Embed a 2x2 matrix in the upper-left block."""
    (a, b), (c, d) = g
    return ((a, b, 0), (c, d, 0), (0, 0, 1))


def iota_beta(g):
    """Embed a 2x2 matrix in the lower-right block."""
    (a, b), (c, d) = g
    return ((1, 0, 0), (0, a, b), (0, c, d))


# --------------------------------------------------------------------------
# integral matrices


class IntMat3:
    """An integral 3x3 matrix with determinant 1 (immutable)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 matrix")
        if det3(rows) != 1:
            raise ValueError(f"determinant is {det3(rows)}, expected 1")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMat3 is immutable")

    @classmethod
    def identity(cls):
        return cls(diag(1, 1, 1))

    def e(self, i: int, j: int) -> int:
        """Entry A_ij, 1-based."""
        return self.rows[i - 1][j - 1]

    def minor(self, i: int, j: int) -> int:
        """Deletion minor M(i, j), no sign."""
        return _minor(self.rows, i, j)

    def __matmul__(self, other):
        if isinstance(other, IntMat3):
            return IntMat3(matmul(self.rows, other.rows))
        return NotImplemented

    def inverse(self) -> "IntMat3":
        return IntMat3(as_int_rows(inverse3(self.rows)))

    def transpose(self) -> "IntMat3":
        return IntMat3(transpose(self.rows))

    def __eq__(self, other):
        if isinstance(other, IntMat3):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMat3({[list(r) for r in self.rows]})"

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "IntMat3":
        return cls(data["rows"])


def gamma_inf(a12: int, a13: int, a23: int) -> IntMat3:
    """An element of the integral upper unipotent group."""
    return IntMat3(unipotent(a12, a13, a23))


@dataclass(frozen=True)
class MinorTable:
    """All nine deletion minors; ``table[i, j]`` is M(i, j) with 1-based i, j."""

    values: tuple

    def __getitem__(self, ij):
        i, j = ij
        return self.values[i - 1][j - 1]


def minors(A: IntMat3) -> MinorTable:
    return MinorTable(tuple(tuple(A.minor(i, j) for j in (1, 2, 3)) for i in (1, 2, 3)))


# --------------------------------------------------------------------------
# Weyl group


class Weyl(enum.Enum):
    """The six Weyl elements of SL3, as signed permutation matrices."""

    E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    S_ALPHA = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
    S_BETA = ((1, 0, 0), (0, 0, -1), (0, 1, 0))
    S_ALPHA_BETA = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    S_BETA_ALPHA = ((0, -1, 0), (0, 0, -1), (1, 0, 0))
    W0 = ((0, 0, 1), (0, -1, 0), (1, 0, 0))

    @property
    def matrix(self):
        return self.value

    @property
    def perm(self) -> tuple:
        """(w(1), w(2), w(3)), w(j) being the row of the nonzero entry of column j."""
        return tuple(
            next(i + 1 for i in range(3) if self.value[i][j]) for j in range(3)
        )

    @property
    def length(self) -> int:
        p = self.perm
        return sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])

    @classmethod
    def from_name(cls, name: str) -> "Weyl":
        aliases = {
            "e": cls.E, "id": cls.E, "identity": cls.E,
            "s_alpha": cls.S_ALPHA, "(12)": cls.S_ALPHA,
            "s_beta": cls.S_BETA, "(23)": cls.S_BETA,
            "s_alpha_s_beta": cls.S_ALPHA_BETA, "(123)": cls.S_ALPHA_BETA,
            "s_beta_s_alpha": cls.S_BETA_ALPHA, "(132)": cls.S_BETA_ALPHA,
            "w0": cls.W0, "(13)": cls.W0,
        }
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls[name.upper()]


_SUPER = ((1, 2), (1, 3), (2, 3))


def uw_patterns(w: Weyl) -> tuple[frozenset, frozenset]:
    """Free superdiagonal positions of U_w (movable across w) and of U^w.

    (i, j) is free in U_w iff w(i) < w(j); U^w gets the complementary
    positions, so every upper unipotent factors uniquely as (U_w)(U^w).
    """
    p = w.perm
    plus = frozenset((i, j) for i, j in _SUPER if p[i - 1] < p[j - 1])
    return plus, frozenset(_SUPER) - plus


def _rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def classify_cell(A: IntMat3) -> Weyl:
    """The Weyl element w with A in BwB.

    Decided by the ranks of the lower-left corners (rows i..3, columns 1..j),
    which are constant on each double coset of the upper triangular group.
    """
    rows = A.rows if isinstance(A, IntMat3) else A
    ranks = {
        (i, j): _rank([r[:j] for r in rows[i - 1:]]) for i in (2, 3) for j in (1, 2)
    }
    for w in Weyl:
        p = w.perm
        if all(ranks[i, j] == sum(1 for k in range(j) if p[k] >= i) for i, j in ranks):
            return w
    raise AssertionError("rank pattern matched no Weyl element")


# --------------------------------------------------------------------------
# Bruhat coordinates


@dataclass(frozen=True)
class BruhatCoords:
    """A = uL * w * diag(t) * uR with uR in U^w; all entries Fractions."""

    cell: Weyl
    t: tuple
    uL: tuple
    uR: tuple

    def reconstruct(self):
        return matmul(matmul(matmul(self.uL, self.cell.matrix), diag(*self.t)), self.uR)


def _split_unipotent(u, plus):
    """u = u_plus * u_minus with u_plus in U_w (positions ``plus``)."""
    a = {}
    b = {}
    for pos in ((1, 2), (2, 3)):
        (a if pos in plus else b)[pos] = Fraction(u[pos[0] - 1][pos[1] - 1])
    a12, b23 = a.get((1, 2), 0), b.get((2, 3), 0)
    corner = Fraction(u[0][2]) - a12 * b23
    (a if (1, 3) in plus else b)[(1, 3)] = corner
    u_plus = unipotent(a.get((1, 2), 0), a.get((1, 3), 0), a.get((2, 3), 0))
    u_minus = unipotent(b.get((1, 2), 0), b.get((1, 3), 0), b.get((2, 3), 0))
    return u_plus, u_minus


def bruhat_coords(A: IntMat3) -> BruhatCoords:
    """Exact Bruhat coordinates by elimination, normalised so uR lies in U^w."""
    rows = A.rows if isinstance(A, IntMat3) else A
    M = [[Fraction(x) for x in r] for r in rows]
    left = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    right = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    used = set()
    for j in range(3):
        p = max(i for i in range(3) if i not in used and M[i][j] != 0)
        used.add(p)
        piv = M[p][j]
        for r in range(p):
            if M[r][j] != 0:
                c = M[r][j] / piv
                M[r] = [x - c * y for x, y in zip(M[r], M[p])]
                left[r] = [x - c * y for x, y in zip(left[r], left[p])]
        for k in range(j + 1, 3):
            if M[p][k] != 0:
                c = M[p][k] / piv
                for r in range(3):
                    M[r][k] -= c * M[r][j]
                    right[r][k] -= c * right[r][j]
    # left * A * right is now monomial
    w = next(
        w for w in Weyl
        if all((M[i][j] != 0) == (w.matrix[i][j] != 0) for i in range(3) for j in range(3))
    )
    t = tuple(M[w.perm[j] - 1][j] / w.matrix[w.perm[j] - 1][j] for j in range(3))
    uL = inverse3(tuple(map(tuple, left)))
    uR = inverse3(tuple(map(tuple, right)))
    plus, _ = uw_patterns(w)
    u_plus, u_minus = _split_unipotent(uR, plus)
    # move the U_w part of uR through w t to the left
    wt = matmul(w.matrix, diag(*t))
    moved = matmul(matmul(wt, u_plus), inverse3(wt))
    uL = matmul(uL, moved)
    coords = BruhatCoords(w, t, uL, u_minus)
    assert coords.reconstruct() == tuple(tuple(Fraction(x) for x in r) for r in rows)
    return coords


def w0_coords(A: IntMat3) -> BruhatCoords:
    """Big-cell Bruhat coordinates read off from entries and minors."""
    a31, m13 = A.e(3, 1), A.minor(1, 3)
    if a31 == 0 or m13 == 0:
        raise ValueError("matrix is not in the big cell")
    F = Fraction
    uL = unipotent(F(A.minor(2, 3), m13), F(A.e(1, 1), a31), F(A.e(2, 1), a31))
    uR = unipotent(F(A.e(3, 2), a31), F(A.e(3, 3), a31), F(A.minor(1, 2), m13))
    t = (F(a31), F(m13, a31), F(1, m13))
    return BruhatCoords(Weyl.W0, t, uL, uR)


def same_double_coset(A: IntMat3, B: IntMat3) -> bool:
    """Decide U(Z) A U(Z) = U(Z) B U(Z) for big-cell matrices from Bruhat coordinates.

    With uR normalised into U^{w0} = U the decomposition is unique, so the
    cosets agree iff the torus parts match and uL(A) uL(B)^-1 and
    uR(B)^-1 uR(A) are both integral.
    """
    ca, cb = bruhat_coords(A), bruhat_coords(B)
    if ca.cell != Weyl.W0 or cb.cell != Weyl.W0:
        raise ValueError("double-coset test is implemented for the big cell only")
    if ca.t != cb.t:
        return False
    left = matmul(ca.uL, inverse3(cb.uL))
    right = matmul(inverse3(cb.uR), ca.uR)
    return is_integral(left) and is_integral(right)


# --------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class StratumInvariants:
    c1: int
    c2: int
    f: int
    d1: int
    d2: int


def _require_big_cell(A):
    if A.e(3, 1) == 0 or A.minor(1, 3) == 0:
        raise ValueError("matrix is not in the big Bruhat cell")


def stratum_invariants(A: IntMat3) -> StratumInvariants:
    """(c1, c2, f, d1, d2) for the stratification along the word alpha-beta-alpha."""
    _require_big_cell(A)
    c1, c2 = A.e(3, 1), A.minor(1, 3)
    f = math.gcd(c1, A.e(3, 2))
    assert f == math.gcd(c2, A.minor(2, 3)), "the two bottom gcds disagree"
    return StratumInvariants(c1, c2, f, c1 // f, c2 // f)


def stratum_invariants_braid(A: IntMat3) -> StratumInvariants:
    """(c1, c2, f, d1, d2) for the stratification along beta-alpha-beta."""
    _require_big_cell(A)
    c1, c2 = A.e(3, 1), A.minor(1, 3)
    f = math.gcd(c1, A.e(2, 1))
    assert f == math.gcd(c2, A.minor(1, 2)), "the two left gcds disagree"
    return StratumInvariants(c1, c2, f, c1 // f, c2 // f)


@dataclass(frozen=True)
class Shifted:
    """A shifted representative together with its unipotent witnesses."""

    matrix: IntMat3
    left: IntMat3
    right: IntMat3


def shift_representative(A: IntMat3, n1=0, n2=0, n3=0, n4=0) -> Shifted:
    """Move inside the double coset of A, shifting four coset data.

    The result A' = left * A * right has
    A'32 = A32 + n1*A31, A'33 = A33 + n2*f, M'(3,3) = M(3,3) + n3*f and
    M'(2,3) = M(2,3) + n4*d2*f, all other of these four unchanged.
    """
    inv = stratum_invariants(A)
    f = inv.f
    _, k, l = egcd(A.e(3, 1), A.e(3, 2))
    right = gamma_inf(n1, n2 * k, n2 * l)
    _, r, s = egcd(A.minor(1, 3), A.minor(2, 3))
    left = gamma_inf(n4, -n3 * r + n4 * n3 * s, n3 * s)
    out = left @ A @ right
    assert out.e(3, 2) == A.e(3, 2) + n1 * A.e(3, 1)
    assert out.e(3, 3) == A.e(3, 3) + n2 * f
    assert out.minor(3, 3) == A.minor(3, 3) + n3 * f
    assert out.minor(2, 3) == A.minor(2, 3) + n4 * inv.d2 * f
    return Shifted(out, left, right)


def ensure_d_nonzero(A: IntMat3) -> IntMat3:
    """A representative with A33*M(3,3) != 1 (one shift of A33 always suffices)."""
    if A.e(3, 3) * A.minor(3, 3) != 1:
        return A
    return shift_representative(A, n2=1).matrix


# --------------------------------------------------------------------------
# reduced-word factorizations


@dataclass(frozen=True)
class BSFactors:
    """Three 2x2 blocks with A = embed(g2) embed'(g3) embed(g1)."""

    gamma2: tuple
    gamma3: tuple
    gamma1: tuple
    D: int
    word: str = "aba"

    def product(self):
        if self.word == "aba":
            outer, inner = iota_alpha, iota_beta
        else:
            outer, inner = iota_beta, iota_alpha
        return matmul(matmul(outer(self.gamma2), inner(self.gamma3)), outer(self.gamma1))


def _sl2(x, d, y):
    x, y = Fraction(x), Fraction(y)
    return ((x, (x * y - 1) / d), (Fraction(d), y))


def bott_samelson(A: IntMat3) -> BSFactors:
    """Factor a big-cell A as iota_a(g2) iota_b(g3) iota_a(g1)."""
    inv = stratum_invariants(A)
    f = inv.f
    num = A.e(3, 3) * A.minor(3, 3) - 1
    if num == 0:
        raise ValueError("A33*M(3,3) = 1; shift the representative first")
    D = num // f
    g2 = _sl2(Fraction(A.minor(2, 3), f), inv.d2, Fraction(A.e(2, 3), D))
    g3 = ((Fraction(A.minor(3, 3)), Fraction(D)), (Fraction(f), Fraction(A.e(3, 3))))
    g1 = _sl2(Fraction(A.minor(3, 2), D), inv.d1, Fraction(A.e(3, 2), f))
    bs = BSFactors(g2, g3, g1, D, "aba")
    assert bs.product() == tuple(tuple(Fraction(x) for x in r) for r in A.rows)
    return bs


def braid_factorization(A: IntMat3) -> BSFactors:
    """Factor a big-cell A as iota_b(g1) iota_a(g3) iota_b(g2).

    The returned blocks keep the names of the mirrored word: ``gamma2`` is
    the leftmost factor, matching :func:`bott_samelson`'s field order.
    """
    inv = stratum_invariants_braid(A)
    f = inv.f
    num = A.e(1, 1) * A.minor(1, 1) - 1
    if num == 0:
        raise ValueError("A11*M(1,1) = 1; shift the representative first")
    D = num // f
    left = _sl2(Fraction(A.e(2, 1), f), inv.d1, Fraction(A.minor(2, 1), D))
    mid = ((Fraction(A.e(1, 1)), Fraction(D)), (Fraction(f), Fraction(A.minor(1, 1))))
    right = _sl2(Fraction(A.e(1, 2), D), inv.d2, Fraction(A.minor(1, 2), f))
    bs = BSFactors(left, mid, right, D, "bab")
    assert bs.product() == tuple(tuple(Fraction(x) for x in r) for r in A.rows)
    return bs


def dagger(A: IntMat3) -> IntMat3:
    """w0 (A^T)^-1 w0^-1, written out as a table of deletion minors."""
    M = A.minor
    return IntMat3(
        ((M(3, 3), M(3, 2), M(3, 1)), (M(2, 3), M(2, 2), M(2, 1)), (M(1, 3), M(1, 2), M(1, 1)))
    )


# --------------------------------------------------------------------------
# canonical double-coset representatives


def _lift_coprime(r, step, modulus):
    """Smallest r + k*step (k >= 0) coprime to modulus."""
    x = r
    while math.gcd(x, modulus) != 1:
        x += step
    return x


def unit_lifts(d: int, modulus: int) -> list[int]:
    """One lift per unit class mod |d|, each coprime to ``modulus``."""
    d = abs(d)
    base = [0] if d == 1 else [a for a in range(1, d) if math.gcd(a, d) == 1]
    return [_lift_coprime(a, d, modulus) for a in base]


def x3y3_pairs(f: int) -> list[tuple[int, int]]:
    """Pairs (x3, y3) in (f, 2f]^2 with x3*y3 = 1 mod f, ordered by x3."""
    return [
        (x, y)
        for x in range(f + 1, 2 * f + 1)
        if math.gcd(x, f) == 1
        for y in [f + inv_mod(x, f) if f > 1 else 2]
    ]


@dataclass(frozen=True)
class CellParams:
    """Coordinates of one double coset in a fine stratum.

    ``x2`` and ``y1`` are lifts coprime to d1*d2*f, ``x3*y3 = 1 (mod f)`` with
    ``x3*y3 != 1``, and ``k`` is taken mod f.
    """

    d1: int
    d2: int
    f: int
    x2: int
    y1: int
    x3: int
    y3: int
    k: int

    def __post_init__(self):
        if self.d1 == 0 or self.d2 == 0 or self.f < 1:
            raise ValueError("need nonzero d1, d2 and positive f")
        Q = self.modulus
        if math.gcd(self.x2, Q) != 1 or math.gcd(self.y1, Q) != 1:
            raise ValueError("x2 and y1 must be coprime to d1*d2*f")
        if (self.x3 * self.y3 - 1) % self.f:
            raise ValueError("x3*y3 must be 1 mod f")
        if self.x3 * self.y3 == 1:
            raise ValueError("x3*y3 = 1 exactly; pick another lift")

    @property
    def modulus(self) -> int:
        return abs(self.d1 * self.d2 * self.f)

    @property
    def u(self) -> int:
        Q = self.modulus
        d1, d2 = self.d1, self.d2
        return d1 * self.x3 * inv_mod(self.x2, Q) + d2 * inv_mod(self.y1, Q) + d1 * d2 * self.k

    @property
    def v(self) -> int:
        Q = self.modulus
        d1, d2 = self.d1, self.d2
        return (
            d2 * inv_mod(self.y1, Q) * self.y3
            + d1 * inv_mod(self.x2, Q)
            + d1 * d2 * self.y3 * self.k
        )

    def residues(self) -> tuple:
        """The data that identify the coset: (x2 mod d2, y1 mod d1, x3, y3 mod f, k mod f)."""
        f = self.f
        return (
            self.x2 % abs(self.d2),
            self.y1 % abs(self.d1),
            self.x3 % f,
            self.y3 % f,
            self.k % f,
        )

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("d1", "d2", "f", "x2", "y1", "x3", "y3", "k")}


def cell_matrix(d1, d2, f, x2, y1, x3, y3, u, v):
    """The product uL w0 t uR for the given coset coordinates (Fractions)."""
    F = Fraction
    return (
        (
            F(u * x2 - d1 * x3, d2),
            F(u * x2 * y1 - d1 * x3 * y1 - x2 * d2, d1 * d2),
            F(-v * x2 + u * x2 * y3 + d1 * (1 - x3 * y3), d1 * d2 * f),
        ),
        (F(u), F(u * y1 - d2, d1), F(u * y3 - v, d1 * f)),
        (F(d1 * f), F(f * y1), F(y3)),
    )


def cell_congruences(d1, d2, f, x2, y1, x3, y3, u, v) -> bool:
    """The five congruences that make :func:`cell_matrix` integral."""
    return (
        (u * x2 - d1 * x3) % d2 == 0
        and (u * y1 - d2) % d1 == 0
        and (u * x2 * y1 - d1 * x3 * y1 - d2 * x2) % (d1 * d2) == 0
        and (v - u * y3) % (d1 * f) == 0
        and (v * x2 - u * y3 * x2 - d1 * (1 - x3 * y3)) % (d1 * d2 * f) == 0
    )


def canonical_rep(p: CellParams) -> IntMat3:
    """The representative matrix of the coset labelled by ``p``."""
    M = cell_matrix(p.d1, p.d2, p.f, p.x2, p.y1, p.x3, p.y3, p.u, p.v)
    if not is_integral(M):
        raise ValueError(f"parameters {p} violate the integrality congruences")
    return IntMat3(as_int_rows(M))


def canonical_params(d1, d2, f, x2_res, y1_res, y3_res, k) -> CellParams:
    """CellParams with the canonical lifts for the given residues."""
    Q = abs(d1 * d2 * f)
    x2 = _lift_coprime(x2_res % abs(d2), abs(d2), Q)
    y1 = _lift_coprime(y1_res % abs(d1), abs(d1), Q)
    y3 = f + (y3_res % f) if f > 1 else 2
    x3 = f + inv_mod(y3, f) if f > 1 else 2
    return CellParams(d1, d2, f, x2, y1, x3, y3, k % f)


def coset_key(A: IntMat3) -> CellParams:
    """Canonical parameters of the double coset of a big-cell matrix."""
    inv = stratum_invariants(A)
    d1, d2, f = inv.d1, inv.d2, inv.f
    base = canonical_params(
        d1, d2, f, A.minor(2, 3) // f, A.e(3, 2) // f, A.e(3, 3), 0
    )
    n1 = (base.y1 - A.e(3, 2) // f) // d1
    n2 = (base.y3 - A.e(3, 3)) // f
    n3 = (base.x3 - A.minor(3, 3)) // f
    n4 = (base.x2 - A.minor(2, 3) // f) // d2
    B = shift_representative(A, n1, n2, n3, n4).matrix
    assert (B.e(3, 2), B.e(3, 3), B.minor(3, 3), B.minor(2, 3)) == (
        f * base.y1, base.y3, base.x3, f * base.x2
    )
    Q = abs(d1 * d2 * f)
    u0 = base.u  # k = 0
    diff = B.e(2, 1) - u0
    assert diff % (d1 * d2) == 0, "u is off the arithmetic progression"
    k = (diff // (d1 * d2)) % f
    key = CellParams(d1, d2, f, base.x2, base.y1, base.x3, base.y3, k)
    assert (B.minor(1, 2) - key.v) % Q == 0, "v does not match its predicted class"
    return key


def coset_equal(A: IntMat3, B: IntMat3) -> bool:
    """True iff A and B lie in the same double coset of the integral unipotents."""
    ka, kb = stratum_invariants(A), stratum_invariants(B)
    if ka != kb:
        return False
    return coset_key(A) == coset_key(B)


def random_gamma_inf(rng, bound=20) -> IntMat3:
    return gamma_inf(*(rng.randint(-bound, bound) for _ in range(3)))
