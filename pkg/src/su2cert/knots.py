"""
Conway and Alexander polynomial calculus for knots and links.

Knot data is curated (see data/knots.yaml); nothing here reads diagrams.
Skein computations are replayed as algebra on registered polynomials, with
formal unknowns standing in for links whose polynomial is not known but
whose z-adic valuation is (a k-component link has valuation >= k - 1).
"""

from __future__ import annotations

import ast
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd

import yaml

from .algebra import AlgebraError, LaurentPoly, as_fraction


class KnotError(ValueError):
    pass


# conversions -----------------------------------------------------------

def _zsq_in_t(var="t") -> LaurentPoly:
    return LaurentPoly({1: 1, 0: -2, -1: 1}, var)


def conway_to_alexander(nabla: LaurentPoly, var: str = "t") -> LaurentPoly:
    """Substitute z^2 = t - 2 + t^-1 (knots only, so only even powers allowed)."""
    if any(e % 2 or e < 0 for e in nabla.exponents()):
        raise KnotError("a knot's Conway polynomial has only even nonnegative powers of z")
    out = LaurentPoly({}, var)
    zsq = _zsq_in_t(var)
    for e, c in nabla.items():
        out = out + zsq ** (e // 2) * c
    return out


def alexander_to_conway(delta: LaurentPoly, var: str = "z") -> LaurentPoly:
    """Inverse of conway_to_alexander on symmetric polynomials."""
    if not delta.is_symmetric():
        raise KnotError("Alexander polynomial must be symmetric under t -> 1/t")
    rest = delta.rename("t")
    out = {}
    zsq = _zsq_in_t("t")
    while rest:
        j = rest.degree
        c = rest.coeff(j)
        out[2 * j] = c
        rest = rest - zsq ** j * c
    return LaurentPoly(out, var)


def normalize_alexander(delta: LaurentPoly) -> LaurentPoly:
    """Centre so that delta(t) = delta(1/t), then fix the sign so delta(1) = 1."""
    d = delta.symmetrize()
    v = d.eval(1)
    if v == -1:
        d = -d
    elif v != 1:
        raise KnotError(f"Alexander polynomial has delta(1) = {v}, expected +-1")
    return d


def genus1_alexander(a: int) -> LaurentPoly:
    return LaurentPoly({1: a, 0: -(2 * a - 1), -1: a}, "t")


def torus_alexander(p: int, q: int) -> LaurentPoly:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), centred."""
    p, q = abs(p), abs(q)
    if gcd(p, q) != 1:
        raise KnotError("torus knot parameters must be coprime")
    if p <= 1 or q <= 1:
        return LaurentPoly.constant(1)
    num = LaurentPoly({p * q: 1, 0: -1}) * LaurentPoly({1: 1, 0: -1})
    den = LaurentPoly({p: 1, 0: -1}) * LaurentPoly({q: 1, 0: -1})
    quo, rem = num.divmod(den)
    if rem:
        raise AlgebraError("torus knot quotient is not exact")
    return normalize_alexander(quo)


def cable_alexander(delta_k: LaurentPoly, p: int, q: int) -> LaurentPoly:
    """Alexander polynomial of the (p, q)-cable with longitudinal winding q."""
    if q < 1:
        raise KnotError("longitudinal winding must be positive")
    if gcd(p, q) != 1:
        raise KnotError("cable parameters must be coprime")
    return normalize_alexander(delta_k.substitute_power(q) * torus_alexander(p, q))


def cable_genus(g: int, p: int, q: int) -> int:
    if gcd(p, q) != 1 or q < 1:
        raise KnotError("cable parameters must be coprime with q >= 1")
    return q * g + (abs(p) - 1) * (q - 1) // 2


# Casson invariants ----------------------------------------------------

def phi1(nabla: LaurentPoly, k: int = 1) -> Fraction:
    """Coefficient of z^(k+1) for a k-component link in normal form z^(k-1)(a0 + a1 z^2 + ...)."""
    if k < 1:
        raise KnotError("component count must be positive")
    for e in nabla.exponents():
        if e < k - 1 or (e - k + 1) % 2:
            raise KnotError(f"z^{e} is not allowed in the Conway polynomial of a {k}-component link")
    return nabla.coeff(k + 1)


def hoste_casson(m: int, n: int, phi_k1, phi_k2, phi_l) -> Fraction:
    """Casson invariant of (1/m, 1/n)-surgery on a two-component link with linking number zero."""
    return -m * as_fraction(phi_k1) - n * as_fraction(phi_k2) + m * n * as_fraction(phi_l)


def casson_plus_one_surgery(delta: LaurentPoly) -> Fraction:
    return delta.second_derivative_at_one() / 2


# records --------------------------------------------------------------

@dataclass(frozen=True)
class KnotRecord:
    """
    A knot K with its polynomials and, where known, data about its mirror:
    sl_bar_mirror and tb_bar_mirror are the maximal self-linking and
    Thurston-Bennequin numbers of the mirror, mirror_positive says whether
    the mirror is a positive knot.
    """

    name: str
    conway: LaurentPoly
    alexander: LaurentPoly
    genus: int | None = None
    sl_bar_mirror: int | None = None
    tb_bar_mirror: int | None = None
    is_positive: bool | None = None
    mirror_positive: bool | None = None
    nontrivial: bool = True
    notes: str = ""

    def validate(self):
        a = self.alexander
        if a.eval(1) != 1:
            raise KnotError(f"{self.name}: Alexander polynomial must satisfy delta(1) = 1")
        if not a.is_symmetric():
            raise KnotError(f"{self.name}: Alexander polynomial must be symmetric")
        if conway_to_alexander(self.conway) != a:
            raise KnotError(f"{self.name}: Conway and Alexander polynomials disagree")
        if self.genus is not None and a and a.degree > self.genus:
            raise KnotError(f"{self.name}: genus {self.genus} is below the Alexander bound {a.degree}")
        if self.sl_bar_mirror is not None and self.sl_bar_mirror % 2 == 0:
            raise KnotError(f"{self.name}: self-linking numbers are odd")
        if self.sl_bar_mirror is not None and self.tb_bar_mirror is not None:
            if self.sl_bar_mirror < self.tb_bar_mirror:
                # a tb-maximising rep oriented with rot <= 0 has sl = tb - rot >= tb
                raise KnotError(f"{self.name}: maximal sl below maximal tb")
        if not self.nontrivial and (a != 1 or self.genus not in (None, 0)):
            raise KnotError(f"{self.name}: the unknot has trivial invariants")
        return self


def make_record(name, conway=None, alexander=None, **kw) -> KnotRecord:
    if conway is None and alexander is None:
        raise KnotError(f"{name}: need a Conway or an Alexander polynomial")
    if isinstance(conway, str):
        conway = LaurentPoly.parse(conway, "z")
    if isinstance(alexander, str):
        alexander = LaurentPoly.parse(alexander, "t")
    if alexander is not None:
        alexander = normalize_alexander(alexander.rename("t"))
    if conway is None:
        conway = alexander_to_conway(alexander)
    conway = conway.rename("z")
    if alexander is None:
        alexander = conway_to_alexander(conway)
    return KnotRecord(name=name, conway=conway, alexander=alexander, **kw).validate()


_RECORD_FIELDS = {"name", "conway", "alexander", "genus", "sl_bar_mirror", "tb_bar_mirror",
                  "is_positive", "mirror_positive", "nontrivial", "notes"}


def record_from_dict(d: dict) -> KnotRecord:
    unknown = set(d) - _RECORD_FIELDS
    if unknown:
        raise KnotError(f"unknown knot record fields: {sorted(unknown)}")
    if "name" not in d:
        raise KnotError("knot record needs a name")
    kw = {k: v for k, v in d.items() if k not in ("name", "conway", "alexander")}
    conway = d.get("conway")
    alexander = d.get("alexander")
    return make_record(str(d["name"]),
                       None if conway is None else str(conway),
                       None if alexander is None else str(alexander), **kw)


def record_to_dict(r: KnotRecord) -> dict:
    out = {"name": r.name, "conway": str(r.conway), "alexander": str(r.alexander)}
    for key in ("genus", "sl_bar_mirror", "tb_bar_mirror", "is_positive", "mirror_positive"):
        v = getattr(r, key)
        if v is not None:
            out[key] = v
    if not r.nontrivial:
        out["nontrivial"] = False
    if r.notes:
        out["notes"] = r.notes
    return out


class KnotTable:
    """Append-only registry; writes take a lock, reads do not."""

    def __init__(self, records=()):
        self._records: dict[str, KnotRecord] = {}
        self._lock = threading.Lock()
        for r in records:
            self.add(r)

    def add(self, record: KnotRecord):
        with self._lock:
            if record.name in self._records:
                raise KnotError(f"knot {record.name!r} is already registered")
            self._records = {**self._records, record.name: record}

    def __getitem__(self, name) -> KnotRecord:
        try:
            return self._records[name]
        except KeyError:
            raise KnotError(f"unknown knot {name!r}") from None

    def __contains__(self, name):
        return name in self._records

    def names(self):
        return list(self._records)

    def records(self):
        return list(self._records.values())


TABLE_SCHEMA = 1


def load_table(text: str) -> KnotTable:
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict) or set(doc) - {"schema", "knots"}:
        raise KnotError("knot table must be a mapping with keys 'schema' and 'knots'")
    if doc.get("schema") != TABLE_SCHEMA:
        raise KnotError(f"unsupported knot table schema {doc.get('schema')!r}")
    return KnotTable(record_from_dict(d) for d in doc.get("knots") or [])


_BUILTIN = None


def builtin_table() -> KnotTable:
    global _BUILTIN
    if _BUILTIN is None:
        text = resources.files("su2cert").joinpath("data/knots.yaml").read_text(encoding="utf-8")
        _BUILTIN = load_table(text)
    return _BUILTIN


# skein recombination --------------------------------------------------

@dataclass(frozen=True)
class FormalConway:
    """
    known + sum_i mult_i * X_i, where each X_i is an unknown Conway polynomial
    of a link with at least c_i components, hence divisible by z^(c_i - 1).
    """

    known: LaurentPoly
    unknowns: tuple = field(default_factory=tuple)  # (name, mult, min_valuation)

    @classmethod
    def const(cls, p):
        if isinstance(p, FormalConway):
            return p
        if isinstance(p, LaurentPoly):
            return cls(p.rename("z"))
        return cls(LaurentPoly.constant(p, "z"))

    def _merge(self, other, sign=1):
        o = FormalConway.const(other)
        unk = dict(((n, v), m) for n, m, v in self.unknowns)
        for n, m, v in o.unknowns:
            unk[(n, v)] = unk.get((n, v), LaurentPoly({}, "z")) + m * sign
        items = tuple((n, m, v) for (n, v), m in unk.items() if m)
        return FormalConway(self.known + o.known * sign, items)

    def __add__(self, other):
        return self._merge(other)

    __radd__ = __add__

    def __sub__(self, other):
        return self._merge(other, -1)

    def __rsub__(self, other):
        return FormalConway.const(other) - self

    def __neg__(self):
        return FormalConway.const(0) - self

    def __mul__(self, other):
        o = FormalConway.const(other)
        if self.unknowns and o.unknowns:
            raise KnotError("product of two expressions with unknowns is not linear")
        if o.unknowns:
            return o * self
        unk = tuple((n, m * o.known, v) for n, m, v in self.unknowns if m * o.known)
        return FormalConway(self.known * o.known, unk)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = FormalConway.const(1)
        for _ in range(k):
            out = out * self
        return out

    def is_exact(self):
        return not self.unknowns

    def min_unknown_valuation(self):
        """Lowest power of z any unknown term can contribute to; None if exact."""
        vals = [m.order + v for _, m, v in self.unknowns]
        return min(vals) if vals else None

    def coeff(self, e: int):
        """Coefficient of z^e if determined, else None."""
        v = self.min_unknown_valuation()
        if v is not None and e >= v:
            return None
        return self.known.coeff(e)

    def __str__(self):
        s = str(self.known)
        for n, m, v in self.unknowns:
            s += f" + ({m})*{n}[z^{v}|]"
        return s


def formal_phi1(expr: FormalConway, k: int):
    """phi1 of a k-component link from a formal expression, or None if undetermined."""
    c = expr.coeff(k + 1)
    if c is None:
        return None
    # normal-form check on the determined low-order part
    v = expr.min_unknown_valuation()
    for e in expr.known.exponents():
        if v is not None and e >= v:
            continue
        if e < k - 1 or (e - k + 1) % 2:
            raise KnotError(f"z^{e} violates the {k}-component normal form")
    return c


_ALLOWED_FUNCS = {"K", "U", "meridian", "csum", "split"}


def skein_combine(expr: str, table: KnotTable | None = None, extra: dict | None = None) -> FormalConway:
    """
    Evaluate a Z[z]-linear expression in registered Conway polynomials.

    Available: z, integers, + - * and integer powers, K('name') for a
    registered knot, U('name', c) for an unknown link polynomial with at
    least c components, meridian(sign, x) = sign * z * x (adding a meridian),
    csum(x, y) = x * y (connected sum), split(...) = 0 (split links).
    ``extra`` maps further names to LaurentPoly or FormalConway values.
    """
    table = table if table is not None else builtin_table()
    extra = extra or {}
    tree = ast.parse(expr, mode="eval")
    z = FormalConway(LaurentPoly({1: 1}, "z"))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return FormalConway.const(node.value)
        if isinstance(node, ast.Name):
            if node.id == "z":
                return z
            if node.id in extra:
                return FormalConway.const(extra[node.id])
            raise KnotError(f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise KnotError("only nonnegative integer powers are allowed")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            raise KnotError("unsupported operator")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _ALLOWED_FUNCS:
            fn = node.func.id
            if node.keywords:
                raise KnotError("keyword arguments are not supported")
            if fn == "K":
                (arg,) = node.args
                if not isinstance(arg, ast.Constant) or not isinstance(arg.value, str):
                    raise KnotError("K() takes a knot name")
                return FormalConway.const(table[arg.value].conway)
            if fn == "U":
                if len(node.args) != 2:
                    raise KnotError("U() takes a name and a component count")
                name, comps = node.args
                if not (isinstance(name, ast.Constant) and isinstance(comps, ast.Constant)):
                    raise KnotError("U() arguments must be literals")
                c = int(comps.value)
                if c < 1:
                    raise KnotError("component count must be positive")
                return FormalConway(LaurentPoly({}, "z"), ((str(name.value), LaurentPoly({0: 1}, "z"), c - 1),))
            if fn == "meridian":
                sign, x = node.args
                s = ev(sign)
                if not s.is_exact() or s.known not in (LaurentPoly.constant(1, "z"), LaurentPoly.constant(-1, "z")):
                    raise KnotError("meridian sign must be +1 or -1")
                return s * z * ev(x)
            if fn == "csum":
                out = FormalConway.const(1)
                for a in node.args:
                    out = out * ev(a)
                return out
            if fn == "split":
                for a in node.args:
                    ev(a)
                return FormalConway.const(0)
        raise KnotError(f"unsupported expression: {ast.dump(node)[:60]}")

    return ev(tree)


# two-component links ----------------------------------------------------

@dataclass(frozen=True)
class LinkRecord:
    """A linking-number-zero link K1 u K2 with a skein expression for its Conway polynomial."""

    name: str
    k1: str
    k2: str
    skein: str
    notes: str = ""

    def phi1_values(self, table: KnotTable | None = None):
        """(phi1(K1), phi1(K2), phi1(L)); phi1(L) is None if the unknowns reach z^3."""
        table = table if table is not None else builtin_table()
        expr = skein_combine(self.skein, table)
        return phi1(table[self.k1].conway), phi1(table[self.k2].conway), formal_phi1(expr, 2)

    def casson(self, m: int, n: int, table: KnotTable | None = None) -> Fraction:
        a, b, c = self.phi1_values(table)
        if c is None:
            raise KnotError(f"phi1 of {self.name} is not determined by its skein expression")
        return hoste_casson(m, n, a, b, c)


# Skein moves reduce L to 11a_20m, 3_1 # 5_2m with a negatively oriented
# meridian, and a four-component link L4 known only up to z^3-divisibility.
Y_MN_SKEIN = ("(-z*K('11a_20m') + z*(K('11a_20m') - z*meridian(-1, csum(K('3_1'), K('5_2m')))))"
              " + z*(-z**2*K('11a_20m') + z*U('L4', 4))")

LINKS = {
    "Y-mn": LinkRecord("Y-mn", "8_21m", "11a_20m", Y_MN_SKEIN,
                       "(-1/m, -1/n) surgery gives the homology spheres Y(m, n)"),
}
