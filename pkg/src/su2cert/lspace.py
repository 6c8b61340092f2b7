"""
Fact store for instanton L-space assertions about surgeries on one knot,
closed under a fixed list of deduction rules.

Each derived fact records the rule that produced it and the facts it was
derived from, so any conclusion (in particular a contradiction) can be
replayed as a chain. Regions of slopes are intervals of Q with open or
closed ends; rays [n, inf) are stored as intervals, never enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LaurentPoly
from .knots import genus1_alexander
from .slopes import Slope, SlopeError, rank_decompose

# rule id -> short statement
RULES = {
    "R1": "an L-space at integer n >= 1 gives L-spaces at every rational r >= n",
    "R2": "an L-space at r > 0 gives an L-space at max(floor(r), 1)",
    "R3": "genus > 1 rules out L-spaces for 0 < r < 2",
    "R4": "a nontrivial knot has no L-space surgeries for 0 < r < 1",
    "R5": "a nontrivial knot has no L-space at 1/2",
    "R6": "an L-space at 0 < r < 2 forces genus 1 and Alexander polynomial t-1+t^-1 or -t+3-t^-1",
    "R7": "an L-space at 0 < r < 1 gives L-spaces on [m/(m+1), 1] with m = max(floor(r/(1-r)), 1)",
    "CP": "no L-space at some s >= 1 rules out L-spaces at every r with max(floor(r),1) <= s",
    "RK": "rank = |p| + 2e: exact rank |p| is an L-space, rank above |p| is not",
    "RT": "exact triangle with S^3 along consecutive integer surgeries moves a rank bound by at most 1",
    "NT": "positive genus or nontrivial Alexander polynomial means the knot is nontrivial",
    "ST": "n Stein structures on one filling with distinct real Chern classes give rank I# >= n",
    "AX": "supplied fact",
    "X": "contradiction",
}

LSPACE, NOT_LSPACE = "lspace", "not_lspace"


@dataclass(frozen=True)
class Region:
    """Interval of slopes; hi None means +infinity."""

    lo: Fraction
    hi: Fraction | None
    lo_closed: bool = True
    hi_closed: bool = True

    @classmethod
    def point(cls, x):
        x = Fraction(x)
        return cls(x, x, True, True)

    @classmethod
    def ray(cls, x):
        return cls(Fraction(x), None, True, False)

    @classmethod
    def open(cls, lo, hi):
        return cls(Fraction(lo), None if hi is None else Fraction(hi), False, False)

    @property
    def is_point(self):
        return self.hi is not None and self.lo == self.hi

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return x < self.hi or (x == self.hi and self.hi_closed)

    def is_empty(self):
        if self.hi is None:
            return False
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def intersect(self, other: "Region") -> "Region":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi is None:
            hi, hc = other.hi, other.hi_closed
        elif other.hi is None or self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Region(lo, hi, lc, hc)

    def meets(self, other: "Region") -> bool:
        return not self.intersect(other).is_empty()

    def largest_integer(self):
        """Largest integer in the region, math.inf if unbounded, None if none."""
        if self.hi is None:
            return math.inf
        m = math.floor(self.hi)
        if m == self.hi and not self.hi_closed:
            m -= 1
        return m if m in self else None

    def __str__(self):
        if self.is_point:
            return str(Slope.of(self.lo))
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed and self.hi is not None else ")"
        hi = "inf" if self.hi is None else str(Slope.of(self.hi))
        return f"{lb}{Slope.of(self.lo)}, {hi}{rb}"


POSITIVE = Region.open(0, None)


@dataclass(frozen=True)
class Fact:
    id: int
    kind: str
    region: Region | None
    value: object
    rule: str
    premises: tuple = ()
    note: str = ""

    def statement(self) -> str:
        k = self.kind
        if k == LSPACE:
            return f"L-space at {self.region}"
        if k == NOT_LSPACE:
            return f"not an L-space at {self.region}"
        if k == "rank_exact":
            return f"rank I# = {self.value} at {self.region}"
        if k == "rank_lower":
            return f"rank I# >= {self.value} at {self.region}"
        if k == "contradiction":
            return f"CONTRADICTION: {self.note}"
        if k == "alexander":
            return f"Alexander polynomial {self.value}"
        if k == "alexander_constraint":
            return "Alexander polynomial in {" + ", ".join(str(v) for v in self.value) + "}"
        return f"{k} = {self.value}"

    def key(self):
        if self.kind == "contradiction":
            return (self.kind, tuple(sorted(self.premises)))
        v = self.value
        if isinstance(v, (list, set)):
            v = tuple(sorted(str(x) for x in v))
        return (self.kind, self.region, str(v))

    def to_record(self) -> dict:
        return {"id": self.id, "statement": self.statement(), "rule": self.rule,
                "premises": list(self.premises)}


class ContradictionError(Exception):
    def __init__(self, kb: "LSpaceKB", fact: Fact):
        self.kb, self.fact = kb, fact
        super().__init__(fact.statement())


@dataclass
class LSpaceKB:
    """Facts about surgeries on a single knot; call close() to saturate."""

    facts: list = field(default_factory=list)
    label: str = "K"
    _keys: dict = field(default_factory=dict, repr=False)

    # assertions ---------------------------------------------------------
    def _add(self, kind, region, value, rule, premises=(), note="") -> Fact | None:
        probe = Fact(-1, kind, region, value, rule, tuple(premises), note)
        if probe.key() in self._keys:
            return None
        f = Fact(len(self.facts), kind, region, value, rule, tuple(premises), note)
        self.facts.append(f)
        self._keys[f.key()] = f
        return f

    def _ensure(self, kind, region, value, rule, premises=(), note="") -> Fact:
        probe = Fact(-1, kind, region, value, rule, tuple(premises), note)
        return self._keys.get(probe.key()) or self._add(kind, region, value, rule, premises, note)

    def assert_nontrivial(self, flag=True):
        return self._add("nontrivial", None, bool(flag), "AX")

    def assert_genus(self, g: int):
        return self._add("genus", None, int(g), "AX")

    def assert_alexander(self, delta: LaurentPoly):
        return self._add("alexander", None, delta, "AX")

    def assert_lspace(self, where, rule="AX", premises=(), note=""):
        return self._add(LSPACE, _region(where), None, rule, premises, note)

    def assert_not_lspace(self, where, rule="AX", premises=(), note=""):
        return self._add(NOT_LSPACE, _region(where), None, rule, premises, note)

    def assert_not_lspace_integers_from(self, n=None, rule="AX", premises=(), note=""):
        """No L-space at any integer >= n; n None means 'for all sufficiently large n'."""
        start = Fraction(n if n is not None else 1)
        note = note or ("for all sufficiently large integers" if n is None else f"for all integers >= {n}")
        return self._add(NOT_LSPACE, Region.ray(start), "integers" if n is not None else "eventually",
                         rule, premises, note)

    def assert_rank(self, slope, value: int, exact=False, rule="AX", premises=(), note=""):
        s = Slope.of(slope)
        return self._add("rank_exact" if exact else "rank_lower", Region.point(s.value()), int(value),
                         rule, premises, note)

    # queries ------------------------------------------------------------
    def attribute(self, kind):
        for f in self.facts:
            if f.kind == kind:
                return f
        return None

    def nontrivial_fact(self):
        for f in self.facts:
            if f.kind == "nontrivial" and f.value:
                return f
        return None

    def contradictions(self) -> list:
        return [f for f in self.facts if f.kind == "contradiction"]

    def status(self, slope):
        """('lspace' | 'not_lspace' | 'unknown' | 'contradiction', supporting fact)."""
        x = Slope.of(slope).value()
        pos = neg = None
        for f in self.facts:
            if f.kind == LSPACE and pos is None and _covers(f, x):
                pos = f
            elif f.kind == NOT_LSPACE and neg is None and _covers(f, x):
                neg = f
        if pos and neg:
            return "contradiction", (pos, neg)
        if pos:
            return LSPACE, pos
        if neg:
            return NOT_LSPACE, neg
        return "unknown", None

    def chain(self, fact: Fact) -> list:
        """The fact together with everything it depends on, premises first."""
        seen, order = set(), []

        def visit(i):
            if i in seen:
                return
            seen.add(i)
            for p in self.facts[i].premises:
                visit(p)
            order.append(self.facts[i])

        visit(fact.id)
        return order

    def statements(self) -> set:
        return {(f.kind, f.region, str(f.value) if f.kind != "contradiction" else
                 tuple(sorted(self.facts[p].statement() for p in f.premises))) for f in self.facts}

    # closure ------------------------------------------------------------
    def close(self, raise_on_contradiction=False) -> "LSpaceKB":
        rules = [self._rule_nt, self._rule_rank, self._rule_triangle, self._rule_r2, self._rule_r1,
                 self._rule_r7, self._rule_r3, self._rule_r4, self._rule_r5, self._rule_r6,
                 self._rule_cp, self._rule_conflict]
        while True:
            before = len(self.facts)
            for rule in rules:
                rule()
            if len(self.facts) == before:
                break
        if raise_on_contradiction and self.contradictions():
            raise ContradictionError(self, self.contradictions()[0])
        return self

    def _of_kind(self, *kinds):
        return [f for f in list(self.facts) if f.kind in kinds]

    def _rule_nt(self):
        if self.nontrivial_fact():
            return
        g = self.attribute("genus")
        if g is not None and g.value >= 1:
            self._add("nontrivial", None, True, "NT", (g.id,))
            return
        a = self.attribute("alexander")
        if a is not None and a.value != 1:
            self._add("nontrivial", None, True, "NT", (a.id,))

    def _rule_rank(self):
        for f in self._of_kind("rank_exact", "rank_lower"):
            x = f.region.lo
            if x == 0 or x.denominator == 0:
                continue
            p = abs(x.numerator)
            if f.kind == "rank_exact":
                try:
                    e = rank_decompose(p, f.value)
                except SlopeError as exc:
                    self._add("contradiction", None, None, "X", (f.id,), str(exc))
                    continue
                if e == 0:
                    self._add(LSPACE, f.region, None, "RK", (f.id,))
                else:
                    self._add(NOT_LSPACE, f.region, None, "RK", (f.id,))
            elif f.value > p:
                self._add(NOT_LSPACE, f.region, None, "RK", (f.id,))

    def _rule_triangle(self):
        for f in self._of_kind("rank_lower", "rank_exact"):
            x = f.region.lo
            if x.denominator != 1 or x < 1:
                continue
            n, b = int(x), f.value - 1
            for m in (n + 1, n - 1):
                if m >= 1 and b > m:
                    self._add("rank_lower", Region.point(m), b, "RT", (f.id,))

    def _rule_r2(self):
        for f in self._of_kind(LSPACE):
            if f.region.is_point and f.region.lo > 0 and f.region.lo.denominator != 1:
                m = max(math.floor(f.region.lo), 1)
                self._add(LSPACE, Region.point(m), None, "R2", (f.id,))

    def _rule_r1(self):
        for f in self._of_kind(LSPACE):
            if f.region.is_point and f.region.lo >= 1 and f.region.lo.denominator == 1:
                self._add(LSPACE, Region.ray(f.region.lo), None, "R1", (f.id,))

    def _rule_r7(self):
        for f in self._of_kind(LSPACE):
            r = f.region.lo
            if f.region.is_point and 0 < r < 1:
                m = max(math.floor(r / (1 - r)), 1)
                self._add(LSPACE, Region(Fraction(m, m + 1), Fraction(1)), None, "R7", (f.id,))

    def _rule_r3(self):
        g = self.attribute("genus")
        if g is not None and g.value > 1:
            self._add(NOT_LSPACE, Region.open(0, 2), None, "R3", (g.id,))

    def _rule_r4(self):
        nt = self.nontrivial_fact()
        if nt:
            self._add(NOT_LSPACE, Region.open(0, 1), None, "R4", (nt.id,))

    def _rule_r5(self):
        nt = self.nontrivial_fact()
        if nt:
            self._add(NOT_LSPACE, Region.point(Fraction(1, 2)), None, "R5", (nt.id,))

    def _rule_r6(self):
        nt = self.nontrivial_fact()
        if not nt:
            return
        window = Region.open(0, 2)
        allowed = [genus1_alexander(1), genus1_alexander(-1)]
        for f in self._of_kind(LSPACE):
            if not f.region.meets(window):
                continue
            gc = self._ensure("genus_constraint", None, 1, "R6", (nt.id, f.id))
            ac = self._ensure("alexander_constraint", None, allowed, "R6", (nt.id, f.id))
            g = self.attribute("genus")
            if g is not None and g.value != 1:
                self._add("contradiction", None, None, "X", (g.id, gc.id),
                          f"genus {g.value} but an L-space below 2 forces genus 1")
            a = self.attribute("alexander")
            if a is not None and a.value not in allowed:
                self._add("contradiction", None, None, "X", (a.id, ac.id),
                          f"Alexander polynomial {a.value} is neither t-1+t^-1 nor -t+3-t^-1")

    def _rule_cp(self):
        # an L-space at r > 0 spreads to the ray [max(floor(r), 1), inf), so it
        # is excluded as soon as that ray would meet a known non-L-space
        for f in self._of_kind(NOT_LSPACE):
            part = f.region.intersect(Region.ray(1))
            if part.is_empty():
                continue
            if f.value == "eventually":
                top = math.inf
            elif f.value == "integers":
                top = part.largest_integer()
            else:
                top = _floor_below(part)
            if top is None or top < 1:
                continue
            region = POSITIVE if top is math.inf else Region.open(0, top + 1)
            if region != f.region:
                self._add(NOT_LSPACE, region, None, "CP", (f.id,))

    def _rule_conflict(self):
        pos = self._of_kind(LSPACE)
        neg = self._of_kind(NOT_LSPACE)
        for a in pos:
            for b in neg:
                if _regions_conflict(a, b):
                    self._add("contradiction", None, None, "X", (a.id, b.id),
                              f"{a.statement()} conflicts with {b.statement()}")


def _floor_below(region: Region):
    """Largest integer m with m <= some point of the region (the ray [m, inf) meets it)."""
    if region.hi is None:
        return math.inf
    m = math.floor(region.hi)
    if m == region.hi and not region.hi_closed:
        m -= 1
    return m


def _covers(f: Fact, x: Fraction) -> bool:
    if x not in f.region:
        return False
    if f.value == "integers":
        return x.denominator == 1
    return True


def _regions_conflict(a: Fact, b: Fact) -> bool:
    inter = a.region.intersect(b.region)
    if inter.is_empty():
        return False
    if b.value == "integers":
        return inter.largest_integer() is not None
    if b.value == "eventually":
        return inter.hi is None
    return True


def _region(where) -> Region:
    if isinstance(where, Region):
        return where
    return Region.point(Slope.of(where).value())


def format_chain(kb: LSpaceKB, fact: Fact) -> list[str]:
    lines = []
    for f in kb.chain(fact):
        prem = f" from {', '.join('#' + str(p) for p in f.premises)}" if f.premises else ""
        lines.append(f"#{f.id} [{f.rule}] {f.statement()}{prem}")
    return lines


def kb_for_knot(record, label=None) -> LSpaceKB:
    """A KB pre-loaded with the attributes of a KnotRecord."""
    kb = LSpaceKB(label=label or record.name)
    if record.nontrivial:
        kb.assert_nontrivial(True)
    if record.genus is not None:
        kb.assert_genus(record.genus)
    kb.assert_alexander(record.alexander)
    return kb
