"""
Legendrian and Stein handlebody combinatorics: stabilizations, rotation
number spectra, Chern vectors, and exact classification of integral
symmetric bilinear forms (definiteness, parity, diagonalizability).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product


class SteinError(ValueError):
    pass


@dataclass(frozen=True)
class LegendrianComponent:
    tb: int
    rot: int
    reversed: bool = False

    def __post_init__(self):
        # tb + rot is always odd for a Legendrian knot
        if (self.tb + self.rot) % 2 == 0:
            raise SteinError(f"tb={self.tb}, rot={self.rot}: tb + rot must be odd")

    @property
    def framing(self) -> int:
        return self.tb - 1

    def reverse(self) -> "LegendrianComponent":
        return LegendrianComponent(self.tb, -self.rot, not self.reversed)


def stabilize(c: LegendrianComponent, sign: int) -> LegendrianComponent:
    if sign not in (1, -1):
        raise SteinError("stabilization sign must be +1 or -1")
    return LegendrianComponent(c.tb - 1, c.rot + sign, c.reversed)


def stabilized_rotations(tb_max: int, rot: int, target_tb: int) -> set[int]:
    """Rotation numbers reachable from (tb_max, rot) by stabilizing down to target_tb."""
    s = tb_max - target_tb
    if s < 0:
        raise SteinError("cannot raise tb by stabilization")
    return {rot - s + 2 * k for k in range(s + 1)}


@dataclass(frozen=True)
class RotationSpectrum:
    tb: int
    rotations: frozenset
    guaranteed: int | None  # the lower bound sl + n, when its hypothesis holds
    overlap: bool

    @property
    def count(self) -> int:
        return len(self.rotations)


def rotation_spectrum(tb_max: int, rot_at_max: int, n: int) -> RotationSpectrum:
    """
    Rotation numbers at tb = 1 - n of the mirror knot, from a tb-maximising
    representative (tb_max, rot_at_max) with tb_max - rot_at_max = sl >= 0
    and rot_at_max <= 0, closed under orientation reversal.
    """
    sl = tb_max - rot_at_max
    if sl < 0:
        raise SteinError("need sl = tb_max - rot_at_max >= 0")
    if rot_at_max > 0:
        raise SteinError("orient the representative so that rot_at_max <= 0")
    if n < max(1 - tb_max, 0):
        raise SteinError(f"need n >= max(1 - tb_max, 0) = {max(1 - tb_max, 0)}")
    direct = stabilized_rotations(tb_max, rot_at_max, 1 - n)
    rots = frozenset(direct | {-r for r in direct})
    overlap = n > 1 - tb_max - rot_at_max
    return RotationSpectrum(1 - n, rots, sl + n if overlap else None, overlap)


def positive_knot_rotations(g: int) -> RotationSpectrum:
    """A positive knot of genus g has max tb = 2g - 1; g - 1 stabilizations give g rotations at tb = g."""
    if g < 1:
        raise SteinError("genus must be positive")
    rots = frozenset(stabilized_rotations(2 * g - 1, 0, g))
    return RotationSpectrum(g, rots, g, True)


# Stein handlebodies -----------------------------------------------------

@dataclass(frozen=True)
class SteinHandlebodyModel:
    """Legendrian link in the boundary of B^4 (no 1-handles) with its pairwise linking numbers."""

    components: tuple
    linking: tuple  # symmetric integer matrix; diagonal ignored

    def __post_init__(self):
        comps = tuple(c if isinstance(c, LegendrianComponent) else LegendrianComponent(*c)
                      for c in self.components)
        object.__setattr__(self, "components", comps)
        n = len(comps)
        lk = tuple(tuple(int(x) for x in row) for row in self.linking) if self.linking else \
            tuple(tuple(0 for _ in range(n)) for _ in range(n))
        if len(lk) != n or any(len(r) != n for r in lk):
            raise SteinError("linking matrix has the wrong shape")
        for i in range(n):
            for j in range(n):
                if i != j and lk[i][j] != lk[j][i]:
                    raise SteinError("linking matrix must be symmetric")
        object.__setattr__(self, "linking", lk)

    def intersection_form(self) -> list[list[int]]:
        n = len(self.components)
        return [[self.components[i].framing if i == j else self.linking[i][j] for j in range(n)]
                for i in range(n)]

    def conjugate(self) -> "SteinHandlebodyModel":
        return SteinHandlebodyModel(tuple(c.reverse() for c in self.components), self.linking)


def gompf_chern(model: SteinHandlebodyModel) -> tuple:
    """c_1(J) evaluated on the 2-handle classes: the rotation numbers."""
    return tuple(c.rot for c in model.components)


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


def rank_lower_bound_from_stein(chern_vectors, torsion_free: bool = True) -> int:
    """
    Number of pairwise distinct Chern vectors. Without torsion-freeness the
    vectors might agree over R, so only the trivial bound 1 is returned.
    """
    vs = [tuple(v) for v in chern_vectors]
    if not vs:
        return 0
    if not torsion_free:
        return 1
    return len(set(vs))


# integral forms ---------------------------------------------------------

def _check_symmetric(M):
    n = len(M)
    for i in range(n):
        if len(M[i]) != n:
            raise SteinError("matrix is not square")
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise SteinError("matrix is not symmetric")


def determinant(M) -> int:
    """Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def congruence_diagonal(M) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalisation P^T M P (symmetric pivoting)."""
    _check_symmetric(M)
    a = [[Fraction(x) for x in r] for r in M]
    n = len(a)
    out = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                out.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # replace basis vector e_i by e_i + e_j: the new diagonal is 2 a_ij (a_ii = a_jj = 0)
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        out.append(d)
        rest = [i for i in active if i != piv]
        for i in rest:
            f = a[i][piv] / d
            if f:
                for k in rest:
                    a[i][k] -= f * a[piv][k]
        for i in rest:
            a[i][piv] = a[piv][i] = Fraction(0)
        active = rest
    return out


def inertia(M) -> tuple[int, int, int]:
    d = congruence_diagonal(M)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0))


def definiteness(M) -> str:
    pos, neg, zero = inertia(M)
    if zero:
        return "degenerate"
    if neg == 0:
        return "positive_definite"
    if pos == 0:
        return "negative_definite"
    return "indefinite"


def h1_order(M) -> int:
    """|H_1| of the boundary of the plumbing/handlebody; 0 means b_1 > 0."""
    _check_symmetric(M)
    return abs(determinant(M))


def is_even(M) -> bool:
    return all(M[i][i] % 2 == 0 for i in range(len(M)))


def short_vectors(M, bound: int) -> list[tuple]:
    """All nonzero integer x with x^T M x <= bound for positive definite M (Fincke-Pohst)."""
    n = len(M)
    q = [[Fraction(x) for x in r] for r in M]
    # q -> upper triangular form: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    out = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            if any(x):
                out.append(tuple(x))
            return
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        # need q_ii (x_i - c)^2 <= remaining
        r2 = remaining / q[i][i]
        lo = _ceil_sqrt_shift(c, r2, -1)
        hi = _ceil_sqrt_shift(c, r2, 1)
        for v in range(lo, hi + 1):
            t = q[i][i] * (v - c) ** 2
            if t <= remaining:
                x[i] = v
                rec(i - 1, remaining - t)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    return out


def _ceil_sqrt_shift(c: Fraction, r2: Fraction, side: int) -> int:
    """Integer bracket for c +- sqrt(r2), rounded outward (exact via integer square roots)."""
    from math import floor, isqrt
    # sqrt(r2) <= isqrt(floor(r2)) + 1
    s = isqrt(floor(r2)) + 1
    return floor(c) - s if side < 0 else floor(c) + s + 1


def is_diagonalizable(M) -> bool:
    """
    Whether a unimodular form is isomorphic over Z to a diagonal form of +-1's.
    Even forms never are. Odd indefinite unimodular forms always are. A
    definite unimodular form is diagonal iff it has 2n vectors of norm 1
    (the norm-1 vectors span an orthogonal summand Z^k).
    """
    _check_symmetric(M)
    n = len(M)
    if abs(determinant(M)) != 1:
        raise SteinError("diagonalizability is only decided for unimodular forms")
    if n == 0:
        return True
    if is_even(M):
        return False
    kind = definiteness(M)
    if kind == "indefinite":
        return True
    P = M if kind == "positive_definite" else [[-x for x in r] for r in M]
    ones = [v for v in short_vectors(P, 1) if _qform(P, v) == 1]
    return len(ones) == 2 * n


def _qform(M, v):
    n = len(M)
    return sum(M[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def b_matrix(k: int) -> list[list[int]]:
    """k x k tridiagonal form with diagonal (-1, -2, ..., -2) and off-diagonal 1."""
    if k < 1:
        raise SteinError("k must be positive")
    M = [[0] * k for _ in range(k)]
    for i in range(k):
        M[i][i] = -1 if i == 0 else -2
        if i + 1 < k:
            M[i][i + 1] = M[i + 1][i] = 1
    return M


def block_sum(*blocks) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    M = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                M[off + i][off + j] = x
        off += len(b)
    return M


def chain_model(head: LegendrianComponent, length: int) -> tuple[list, list]:
    """head followed by a chain of `length` tb = -1 unknots, each linking the previous once."""
    comps = [head] + [LegendrianComponent(-1, 0) for _ in range(length)]
    n = len(comps)
    lk = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        lk[i][i + 1] = lk[i + 1][i] = 1
    return comps, lk


def two_chain_model(m: int, n: int, rot1: int = 1, rot2: int = 1) -> SteinHandlebodyModel:
    """
    Two linking-number-zero knots, each stabilized once to tb = 0 with rotation
    +-1, followed by chains of m - 1 and n - 1 tb = -1 unknots. The
    intersection form is B_m + B_n.
    """
    if m < 1 or n < 1:
        raise SteinError("m and n must be positive")
    c1, l1 = chain_model(LegendrianComponent(0, rot1), m - 1)
    c2, l2 = chain_model(LegendrianComponent(0, rot2), n - 1)
    return SteinHandlebodyModel(tuple(c1 + c2), tuple(map(tuple, block_sum(l1, l2))))


@dataclass(frozen=True)
class FormSummary:
    b2: int
    det: int
    definiteness: str
    even: bool
    diagonalizable: bool | None = field(default=None)


def summarize_form(M) -> FormSummary:
    det = determinant(M)
    diag = is_diagonalizable(M) if abs(det) == 1 else None
    return FormSummary(len(M), det, definiteness(M) if M else "degenerate", is_even(M), diag)


def enumerate_stabilizations(tb_max: int, rot: int, count: int) -> set[int]:
    """Brute force over every +- sequence; used to cross-check stabilized_rotations."""
    out = set()
    for signs in product((1, -1), repeat=count):
        c = LegendrianComponent(tb_max, rot)
        for s in signs:
            c = stabilize(c, s)
        out.add(c.rot)
    return out
