"""
Seifert fibered spaces over S^2 in unnormalised notation M(e; r_1, ..., r_k),
their star-shaped negative plumbings, and the Legendrian realisations of
those plumbings as Stein handlebodies.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .slopes import negative_cf
from .stein import LegendrianComponent, SteinHandlebodyModel, gompf_chern, is_zero_vector


class SeifertError(ValueError):
    pass


class LensSpaceError(SeifertError):
    """Fewer than three singular fibres: the space is a lens space (or S^1 x S^2)."""


@dataclass(frozen=True)
class SeifertData:
    e: int
    fractions: tuple  # each in (0, 1), sorted

    @classmethod
    def make(cls, e, fractions) -> "SeifertData":
        e = Fraction(e)
        out = []
        for r in fractions:
            r = Fraction(r)
            fl = math.floor(r)
            e += fl
            r -= fl
            if r:
                out.append(r)
        if e.denominator != 1:
            raise SeifertError("e must be an integer")
        return cls(int(e), tuple(sorted(out)))

    @classmethod
    def parse(cls, text: str) -> "SeifertData":
        m = re.fullmatch(r"\s*M\s*\(\s*([+-]?\d+)\s*(?:;\s*(.*?))?\s*\)\s*", text)
        if not m:
            raise SeifertError(f"cannot parse Seifert data {text!r}")
        body = (m[2] or "").strip()
        fr = [Fraction(x.strip()) for x in body.split(",")] if body else []
        return cls.make(int(m[1]), fr)

    @property
    def k(self) -> int:
        return len(self.fractions)

    @property
    def multiplicities(self) -> tuple:
        return tuple(r.denominator for r in self.fractions)

    def __str__(self):
        return f"M({self.e}; " + ", ".join(str(r) for r in self.fractions) + ")"


def seifert_h1(Y: SeifertData) -> int:
    """|H_1| = prod p_i * |e + sum r_i|; 0 means b_1 > 0."""
    x = (Y.e + sum(Y.fractions, Fraction(0))) * math.prod(Y.multiplicities)
    if x.denominator != 1:
        raise SeifertError("non-integral |H_1|; malformed data")
    return abs(x.numerator)


def seifert_reverse(Y: SeifertData) -> SeifertData:
    """-M(e; r_1..r_k) = M(-e - k; 1 - r_1, ..., 1 - r_k)."""
    return SeifertData.make(-Y.e - Y.k, [1 - r for r in Y.fractions])


def is_homology_sphere(Y: SeifertData) -> bool:
    return seifert_h1(Y) == 1


@dataclass(frozen=True)
class SeifertPlumbing:
    data: SeifertData          # the orientation the diagram bounds
    reversed: bool             # True if data is the reverse of the input
    central: int
    chains: tuple              # tuples of framings, each <= -2
    model: SteinHandlebodyModel
    source: str = "plumbing"

    @property
    def c1_nonzero(self) -> bool:
        return not is_zero_vector(gompf_chern(self.model))


def _unknot(framing: int) -> LegendrianComponent:
    """Legendrian unknot with tb = framing + 1, rotation chosen as large as possible."""
    tb = framing + 1
    if tb > -1:
        raise SeifertError(f"framing {framing} cannot be realised by a Legendrian unknot")
    return LegendrianComponent(tb, -tb - 1)


def _plumbing(Y: SeifertData, reversed_: bool) -> SeifertPlumbing:
    chains = tuple(tuple(negative_cf(-1 / r)) for r in Y.fractions)
    framings = [Y.e]
    edges = []
    for ch in chains:
        prev = 0
        for a in ch:
            framings.append(a)
            edges.append((prev, len(framings) - 1))
            prev = len(framings) - 1
    n = len(framings)
    lk = [[0] * n for _ in range(n)]
    for i, j in edges:
        lk[i][j] = lk[j][i] = 1
    comps = tuple(_unknot(a) for a in framings)
    model = SteinHandlebodyModel(comps, tuple(map(tuple, lk)))
    return SeifertPlumbing(Y, reversed_, Y.e, chains, model)


def seifert_stein_diagram(Y: SeifertData) -> SeifertPlumbing:
    """
    Stein handlebody on Y (e <= -2) or on -Y (e >= -1, k >= 3) from the
    star-shaped negative plumbing. c_1 is nonzero iff some framing is <= -3.
    """
    if Y.k < 3:
        raise LensSpaceError(f"{Y} has fewer than three singular fibres")
    if Y.e <= -2:
        return _plumbing(Y, False)
    return _plumbing(seifert_reverse(Y), True)


def _trefoil_model() -> SteinHandlebodyModel:
    # right-handed trefoil, stabilized once: tb = 0, rot = 1; Legendrian surgery gives framing -1
    return SteinHandlebodyModel((LegendrianComponent(0, 1),), ((0,),))


# Curated fillings for spaces without a c_1 != 0 plumbing on either side.
# Keyed by the orientation class {Y, -Y}; orientation does not affect
# representation varieties.
OVERRIDES = {
    SeifertData.make(-2, [Fraction(1, 2), Fraction(2, 3), Fraction(6, 7)]): _trefoil_model,
}

POINCARE = SeifertData.make(-2, [Fraction(1, 2), Fraction(2, 3), Fraction(4, 5)])


def orientation_class(Y: SeifertData) -> frozenset:
    return frozenset((Y, seifert_reverse(Y)))


def _override_for(Y: SeifertData):
    cls = orientation_class(Y)
    for key, build in OVERRIDES.items():
        if key in cls:
            return key, build
    return None


def seifert_filling(Y: SeifertData, use_overrides: bool = True) -> SeifertPlumbing:
    """
    A Stein filling of Y or -Y with c_1 != 0 when one is known, otherwise the
    plumbing diagram with c_1 = 0 (caller decides what that means).
    """
    if Y.k < 3:
        raise LensSpaceError(f"{Y} has fewer than three singular fibres")
    first = seifert_stein_diagram(Y)
    if first.c1_nonzero:
        return first
    other = seifert_stein_diagram(seifert_reverse(Y))
    if other.data != first.data and other.c1_nonzero:
        return other
    if use_overrides:
        hit = _override_for(Y)
        if hit is not None:
            key, build = hit
            return SeifertPlumbing(key, key != Y, -1, (), build(), source="override")
    return first


def sfs_lspace_classify(Y: SeifertData) -> bool:
    """For a Seifert fibered homology sphere with >= 3 fibres: L-space iff +-Poincare sphere."""
    if not is_homology_sphere(Y):
        raise SeifertError(f"{Y} is not an integer homology sphere")
    if Y.k < 3:
        return True  # S^3
    return POINCARE in orientation_class(Y)


def homology_sphere_sweep(max_p: int = 9, k_range=(3, 4)) -> list[SeifertData]:
    """Seifert homology spheres with pairwise coprime multiplicities 2..max_p, one per orientation class."""
    seen = set()
    out = []
    for k in k_range:
        for ps in combinations(range(2, max_p + 1), k):
            if any(math.gcd(a, b) != 1 for a, b in combinations(ps, 2)):
                continue
            P = math.prod(ps)
            for qs in _numerators(ps):
                s = sum((Fraction(q, p) for q, p in zip(qs, ps)), Fraction(0))
                for sign in (1, -1):
                    e = Fraction(sign, P) - s
                    if e.denominator != 1:
                        continue
                    Y = SeifertData.make(int(e), [Fraction(q, p) for q, p in zip(qs, ps)])
                    cls = orientation_class(Y)
                    if cls in seen:
                        continue
                    seen.add(cls)
                    out.append(min(cls, key=lambda d: (d.e > -2, -d.e, d.fractions)))
    return out


def _numerators(ps):
    if not ps:
        yield ()
        return
    head, rest = ps[0], ps[1:]
    for q in range(1, head):
        if math.gcd(q, head) == 1:
            for tail in _numerators(rest):
                yield (q,) + tail


def sweep_exceptions(spaces) -> list[SeifertData]:
    """Spaces with no c_1 != 0 plumbing on either orientation (overrides disabled)."""
    return [Y for Y in spaces if not seifert_filling(Y, use_overrides=False).c1_nonzero]
