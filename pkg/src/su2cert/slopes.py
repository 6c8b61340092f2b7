"""
Surgery slope arithmetic: reduced slopes p/q (with 1/0 for infinity),
continued fractions, the mediant sequence toward a rational slope, and
rank bookkeeping for exact triangles, connected sums and cable surgeries.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


class SlopeError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if q < 0:
            p, q = -p, -q
        if q == 0:
            if p == 0:
                raise SlopeError("0/0 is not a slope")
            p = 1
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @classmethod
    def _reduced(cls, p: int, q: int) -> "Slope":
        """Skip normalisation for a pair already known to be reduced with q >= 0."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "q", q)
        return obj

    @classmethod
    def of(cls, x) -> "Slope":
        if isinstance(x, Slope):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        s = text.strip().replace(" ", "")
        if s.lower() in ("inf", "infinity", "oo", "∞"):
            return cls(1, 0)
        m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", s)
        if not m:
            raise SlopeError(f"cannot parse slope {text!r}")
        return cls(int(m[1]), int(m[2]) if m[2] is not None else 1)

    @property
    def is_infinite(self):
        return self.q == 0

    @property
    def is_integer(self):
        return self.q == 1

    def value(self) -> Fraction:
        if self.is_infinite:
            raise SlopeError("infinity has no rational value")
        return Fraction(self.p, self.q)

    def h1_order(self) -> int:
        """|H_1| of p/q-surgery on a knot in S^3; 0 signals b_1 > 0."""
        return abs(self.p)

    def __neg__(self):
        if self.is_infinite:
            return self
        return Slope(-self.p, self.q)

    def __lt__(self, other):
        other = Slope.of(other)
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.p * other.q < other.p * self.q

    def __str__(self):
        if self.is_infinite:
            return "1/0"
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def __repr__(self):
        return f"Slope({self})"


INFINITY = Slope(1, 0)


def mediant(a: Slope, b: Slope) -> Slope:
    return Slope(a.p + b.p, a.q + b.q)


def farey_det(a: Slope, b: Slope) -> int:
    return a.p * b.q - a.q * b.p


# continued fractions ---------------------------------------------------

def cf_eval(terms) -> Fraction:
    """a0 - 1/(a1 - 1/(... - 1/ak))."""
    terms = list(terms)
    if not terms:
        raise SlopeError("empty continued fraction")
    x = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        x = a - 1 / x
    return x


def positive_cf(r, n: int) -> list[int]:
    """Expansion r = [a0; a1, ..., ak] with a0 >= n+1 and every later ai >= 2."""
    x = Slope.of(r).value()
    if x <= n:
        raise SlopeError(f"need r > {n}, got {x}")
    out = []
    while True:
        a = math.ceil(x)
        out.append(a)
        if a == x:
            return out
        x = 1 / (a - x)


def negative_cf(r) -> list[int]:
    """Expansion r = [a0; a1, ...] (minus-convention) with every ai <= -2; needs r < -1."""
    x = Slope.of(r).value()
    if x >= -1:
        raise SlopeError(f"need r < -1, got {x}")
    out = []
    while True:
        a = math.floor(x)
        out.append(a)
        if a == x:
            return out
        x = 1 / (a - x)


# mediant sequence ------------------------------------------------------

@dataclass(frozen=True)
class FareyStep:
    slope: Slope
    j: int | None  # index of the other parent; None for the first two entries


def farey_sequence(r) -> list[FareyStep]:
    """
    r_0 = 1/0, r_1 = floor(r)/1, and r_i = mediant(r_{j_i}, r_{i-1}) where
    r_{j_i} is the bracketing neighbour on the side of r, ending at r.
    """
    target = Slope.of(r)
    if target.is_infinite or target.p <= 0 or target.is_integer:
        raise SlopeError("farey_sequence needs a positive non-integral slope")
    tp, tq = target.p, target.q
    pts = [(1, 0), (tp // tq, 1)]
    parents = [None, None]
    lo, hi = 1, 0  # indices of the lower and upper bracket
    while True:
        prev = len(pts) - 1
        (a, b), (c, d) = pts[lo], pts[hi]
        m = (a + c, b + d)  # Farey neighbours, so already in lowest terms
        pts.append(m)
        parents.append(hi if prev == lo else lo)
        if m == (tp, tq):
            break
        if m[0] * tq < tp * m[1]:
            lo = len(pts) - 1
        else:
            hi = len(pts) - 1
    return [FareyStep(Slope._reduced(p, q), j) for (p, q), j in zip(pts, parents)]


def check_farey(seq) -> bool:
    """The three determinant-one conditions at every step i >= 2."""
    slopes = [s.slope for s in seq]
    for i in range(2, len(seq)):
        j = seq[i].j
        a, b, c = slopes[j], slopes[i - 1], slopes[i]
        if abs(farey_det(a, b)) != 1 or abs(farey_det(c, b)) != 1 or abs(farey_det(c, a)) != 1:
            return False
        if mediant(a, b) != c:
            return False
    return True


# rank calculus ---------------------------------------------------------

def rank_decompose(p: int, rank: int) -> int:
    """rank = |p| + 2e; returns e (0 exactly for an L-space)."""
    p = abs(p)
    if rank < p:
        raise SlopeError(f"rank {rank} is below the Euler characteristic bound {p}")
    if (rank - p) % 2:
        raise SlopeError(f"rank {rank} and |H_1| = {p} have different parity")
    return (rank - p) // 2


@dataclass(frozen=True)
class RankInterval:
    lo: int
    hi: int
    parity: int

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi and x % 2 == self.parity

    def values(self):
        return list(range(self.lo, self.hi + 1, 2))


def triangle_rank_interval(rank_a: int, rank_b: int) -> RankInterval:
    """Possible ranks of the third group in an exact triangle."""
    if rank_a < 0 or rank_b < 0:
        raise SlopeError("ranks are nonnegative")
    return RankInterval(abs(rank_a - rank_b), rank_a + rank_b, (rank_a + rank_b) % 2)


def kunneth_rank(*ranks: int) -> int:
    return math.prod(ranks)


def lens_rank(p: int) -> int:
    if p == 0:
        raise SlopeError("L(0,1) is not a rational homology sphere")
    return abs(p)


def rp3_rank() -> int:
    return lens_rank(2)


@dataclass(frozen=True)
class CableSurgery:
    """m-surgery on C_{p,q}(K) identified as slope-surgery on K, plus an optional lens summand L(a, b)."""

    slope: Slope
    lens: tuple | None

    def h1_order(self) -> int:
        return self.slope.h1_order() * (self.lens[0] if self.lens else 1)

    def __str__(self):
        s = f"S^3_{self.slope}(K)"
        if self.lens:
            a, b = self.lens
            name = "RP^3" if (a, b) == (2, 1) else f"L({a},{b})"
            s += f" # {name}"
        return s


def gordon_cable(p: int, q: int, m) -> CableSurgery:
    """Cable surgeries at slopes pq and pq +- 1 (longitudinal winding q)."""
    if q < 1:
        raise SlopeError("longitudinal winding q must be positive")
    if math.gcd(p, q) != 1:
        raise SlopeError("cable parameters must be coprime")
    ms = Slope.of(m)
    if not ms.is_integer:
        raise SlopeError("cable surgery slope must be an integer")
    m = ms.p
    if m == p * q:
        return CableSurgery(Slope(p, q), (q, p % q) if q > 1 else None)
    if abs(m - p * q) == 1:
        return CableSurgery(Slope(m, q * q), None)
    raise SlopeError(f"slope {m} is not within 1 of pq = {p * q}")
