"""
Exact arithmetic: Gaussian rationals, Laurent polynomials over Q or Q[i],
and the small number theory (Mobius, totient, cyclotomic polynomials)
needed for root-of-unity tests.

Rationals are plain ``fractions.Fraction``; there is no floating point
anywhere in this package.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational as _RationalABC


class AlgebraError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, GaussianRational):
        if x.im:
            raise AlgebraError(f"{x} is not real")
        return x.re
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class GaussianRational:
    """An element re + im*i of Q[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not accepted")
        return GaussianRational(as_fraction(x), 0)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse '3', '-1/2', '2i', '1-4i', '3/2+1/3i'."""
        s = text.replace(" ", "").replace("I", "i").replace("j", "i")
        if not s:
            raise AlgebraError("empty Gaussian rational")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not in leading position
        idx = max(body.rfind("+"), body.rfind("-"))
        if idx <= 0:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:idx], body[idx:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part.lstrip("+")))

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.im:
            return GaussianRational(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussianRational(self.re * o.re, self.re * o.im)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q[i]")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if not self.re:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


def _coeff(x):
    """Normalise a coefficient: real values become Fraction."""
    if isinstance(x, GaussianRational):
        return x.re if not x.im else x
    return as_fraction(x)


_TERM_RE = re.compile(
    r"""^(?P<coef>[0-9/]*)\*?
         (?:(?P<var>[a-zA-Z_]\w*)(?:\^\(?(?P<exp>[+-]?\d+)\)?|\*\*\(?(?P<exp2>[+-]?\d+)\)?)?)?$""",
    re.VERBOSE,
)


class LaurentPoly:
    """
    Sparse Laurent polynomial in one named variable.

    Coefficients are Fractions, or GaussianRationals where a coefficient
    has nonzero imaginary part. Zero coefficients are never stored.
    """

    __slots__ = ("var", "_c")

    def __init__(self, coeffs=None, var: str = "t"):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for e, v in items:
                v = _coeff(v)
                if v:
                    c[int(e)] = v
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # construction ------------------------------------------------------
    @classmethod
    def constant(cls, c, var="t"):
        return cls({0: c}, var)

    @classmethod
    def monomial(cls, e: int, c=1, var="t"):
        return cls({e: c}, var)

    @classmethod
    def parse(cls, text: str, var: str | None = None) -> "LaurentPoly":
        """
        Parse strings such as '2t - 3 + 2t^-1', 't^2-1+t^(-2)' or
        '1 - 5z^4 - 3*z^6'. Coefficients must be rational.
        """
        s = text.replace(" ", "").replace("−", "-").replace("⁻", "-")
        if not s:
            raise AlgebraError("empty polynomial")
        s = re.sub(r"\^\((?P<e>[+-]?\d+)\)", r"^\g<e>", s)
        s = s.replace("**", "^")
        # split into signed terms; a sign right after '^' is part of the exponent
        terms, cur = [], ""
        for i, ch in enumerate(s):
            if ch in "+-" and cur and s[i - 1] != "^":
                terms.append(cur)
                cur = ch
            else:
                cur += ch
        terms.append(cur)
        coeffs: dict[int, Fraction] = {}
        seen_var = var
        for term in terms:
            sign = 1
            while term and term[0] in "+-":
                if term[0] == "-":
                    sign = -sign
                term = term[1:]
            m = _TERM_RE.match(term)
            if not term or not m:
                raise AlgebraError(f"cannot parse term {term!r} in {text!r}")
            coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
            if m["var"] is None:
                e = 0
            else:
                if seen_var is None:
                    seen_var = m["var"]
                elif m["var"] != seen_var:
                    raise AlgebraError(f"mixed variables in {text!r}")
                e = int(m["exp"] or m["exp2"] or 1)
            coeffs[e] = coeffs.get(e, Fraction(0)) + sign * coef
        return cls(coeffs, seen_var or "t")

    @classmethod
    def from_triples(cls, triples, var="t"):
        return cls({int(e): Fraction(int(n), int(d)) for e, n, d in triples}, var)

    def to_triples(self) -> list[list[int]]:
        out = []
        for e, c in self.items():
            if isinstance(c, GaussianRational):
                raise AlgebraError("only rational polynomials serialise as triples")
            out.append([e, c.numerator, c.denominator])
        return out

    # basic access ------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, e: int):
        return self._c.get(e, Fraction(0))

    def __getitem__(self, e: int):
        return self.coeff(e)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def degree(self) -> int:
        if not self._c:
            raise AlgebraError("degree of the zero polynomial")
        return max(self._c)

    @property
    def order(self) -> int:
        """Lowest exponent present."""
        if not self._c:
            raise AlgebraError("order of the zero polynomial")
        return min(self._c)

    def span(self) -> int:
        return self.degree - self.order

    def is_rational(self) -> bool:
        return all(not isinstance(c, GaussianRational) for c in self._c.values())

    def is_laurent(self) -> bool:
        return bool(self._c) and self.order < 0

    def exponents(self):
        return sorted(self._c)

    def rename(self, var: str) -> "LaurentPoly":
        return LaurentPoly(self._c, var)

    # arithmetic --------------------------------------------------------
    def _wrap(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var != self.var and other._c and self._c:
                if not (other.exponents() == [0] or self.exponents() == [0]):
                    raise AlgebraError(f"variable mismatch {self.var} vs {other.var}")
            return other
        return LaurentPoly.constant(other, self.var)

    def __add__(self, other):
        o = self._wrap(other)
        c = dict(self._c)
        for e, v in o._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()}, self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            k = _coeff(other)
            return LaurentPoly({e: v * k for e, v in self._c.items()}, self.var)
        o = self._wrap(other)
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        var = self.var if self.exponents() != [0] or not o._c else o.var
        return LaurentPoly(c, var)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = _coeff(k)
        return LaurentPoly({e: v / k for e, v in self._c.items()}, self.var)

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise AlgebraError("only monomials have Laurent inverses")
            (e, v), = self._c.items()
            return LaurentPoly({e * n: 1 / v ** (-n)}, self.var)
        out = LaurentPoly.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        try:
            return self._c == LaurentPoly.constant(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by var**k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()}, self.var)

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly({e: (v.conjugate() if isinstance(v, GaussianRational) else v)
                            for e, v in self._c.items()}, self.var)

    def mirror(self) -> "LaurentPoly":
        """P(t) -> P(1/t)."""
        return LaurentPoly({-e: v for e, v in self._c.items()}, self.var)

    # evaluation and calculus -------------------------------------------
    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Exact value at x (Fraction, int or GaussianRational)."""
        if not self._c:
            return Fraction(0)
        gaussian = isinstance(x, GaussianRational) or not self.is_rational()
        if gaussian:
            x = GaussianRational.coerce(x)
        else:
            x = as_fraction(x)
        if not x and self.order < 0:
            raise ZeroDivisionError("evaluating a Laurent polynomial with negative exponents at 0")
        # Horner on the cleared polynomial, then rescale
        lo, hi = self.order, self.degree
        acc = GaussianRational(0) if gaussian else Fraction(0)
        for e in range(hi, lo - 1, -1):
            acc = acc * x + self._c.get(e, 0)
        if lo:
            acc = acc * (x ** lo)
        return _coeff(acc) if gaussian else acc

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: v * e for e, v in self._c.items() if e}, self.var)

    def second_derivative_at_one(self) -> Fraction:
        return _coeff(sum((v * e * (e - 1) for e, v in self._c.items()), Fraction(0)))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """P(t) -> P(t**k)."""
        if k < 1:
            raise AlgebraError("substitute_power needs a positive integer")
        return LaurentPoly({e * k: v for e, v in self._c.items()}, self.var)

    def taylor_shift(self, a) -> "LaurentPoly":
        """Coefficients of P(u + a) as a polynomial in u (P must be a polynomial)."""
        if self._c and self.order < 0:
            raise AlgebraError("taylor_shift needs an ordinary polynomial")
        out: dict = {}
        for e, v in self._c.items():
            for j in range(e + 1):
                out[j] = out.get(j, 0) + v * comb(e, j) * (a ** (e - j) if e - j else 1)
        return LaurentPoly(out, self.var)

    def is_symmetric(self) -> bool:
        return all(self._c.get(-e) == v for e, v in self._c.items())

    def symmetrize(self) -> "LaurentPoly":
        """Shift so exponents are centred at 0 (span must be even)."""
        if not self._c:
            return self
        lo, hi = self.order, self.degree
        if (lo + hi) % 2:
            raise AlgebraError("cannot centre a polynomial of odd span")
        return self.shift(-(lo + hi) // 2)

    # ordinary polynomial ring ------------------------------------------
    def cleared(self) -> "LaurentPoly":
        """Multiply by var**(-order) so the lowest exponent is 0."""
        if not self._c:
            return self
        return self.shift(-self.order)

    def monic(self) -> "LaurentPoly":
        if not self._c:
            return self
        return self / self._c[self.degree]

    def divmod(self, other: "LaurentPoly"):
        """Euclidean division of ordinary polynomials."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if (self._c and self.order < 0) or other.order < 0:
            raise AlgebraError("divmod needs ordinary polynomials")
        rem = dict(self._c)
        quo: dict = {}
        dd, lead = other.degree, other._c[other.degree]
        while rem:
            d = max(rem)
            if d < dd:
                break
            f = rem[d] / lead
            quo[d - dd] = f
            for e, v in other._c.items():
                x = rem.get(e + d - dd, 0) - f * v
                if x:
                    rem[e + d - dd] = x
                else:
                    rem.pop(e + d - dd, None)
        return LaurentPoly(quo, self.var), LaurentPoly(rem, self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other: "LaurentPoly") -> bool:
        return not (other % self)

    # printing ----------------------------------------------------------
    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            if isinstance(v, GaussianRational):
                c = f"({v})"
                neg = False
            else:
                neg = v < 0
                c = str(abs(v))
            if e == 0:
                mono = c
            else:
                x = self.var if e == 1 else f"{self.var}^{e}"
                mono = x if c == "1" else f"{c}{x}"
            if not parts:
                parts.append(("-" if neg else "") + mono)
            else:
                parts.append(("- " if neg else "+ ") + mono)
        return " ".join(parts)


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Monic gcd of two rational polynomials; Laurent inputs are cleared first."""
    a = p.cleared() if p and p.order < 0 else p
    b = q.cleared() if q and q.order < 0 else q
    while b:
        a, b = b, a % b
    return a.monic() if a else a


# number theory ---------------------------------------------------------

def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise AlgebraError("factorize needs n >= 1")
    return _factorize(n)


def divisors(n: int) -> list[int]:
    if n < 1:
        raise AlgebraError("divisors needs n >= 1")
    ds = [1]
    for p, k in _factorize(n).items():
        ds = [d * p ** j for d in ds for j in range(k + 1)]
    return sorted(ds)


def mobius(n: int) -> int:
    if n < 1:
        raise AlgebraError("mobius is defined for n >= 1")
    f = _factorize(n)
    if any(k > 1 for k in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise AlgebraError("euler_phi is defined for n >= 1")
    out = n
    for p in _factorize(n):
        out = out // p * (p - 1)
    return out


def is_prime_power(n: int) -> bool:
    return n > 1 and len(_factorize(n)) == 1


@lru_cache(maxsize=None)
def cyclotomic(d: int, var: str = "t") -> LaurentPoly:
    """Phi_d = prod_{e | d} (t^e - 1)^mu(d/e), by exact division."""
    if d < 1:
        raise AlgebraError("cyclotomic index must be >= 1")
    num = LaurentPoly.constant(1, var)
    den = LaurentPoly.constant(1, var)
    for e in divisors(d):
        f = LaurentPoly({e: 1, 0: -1}, var)
        m = mobius(d // e)
        if m == 1:
            num = num * f
        elif m == -1:
            den = den * f
    q, r = num.divmod(den)
    assert not r
    return q


def _phi_bound_indices(deg: int) -> list[int]:
    # phi(d) >= sqrt(d/2), so phi(d) <= deg forces d <= 2*deg^2
    return [d for d in range(1, 2 * deg * deg + 3) if euler_phi(d) <= deg]


def root_of_unity_zero(p: LaurentPoly) -> int | None:
    """
    Least d such that a primitive d-th root of unity is a zero of p, or
    None. Zeros at t = 0 are irrelevant so p is cleared first.
    """
    if not p:
        raise AlgebraError("the zero polynomial vanishes everywhere")
    if not p.is_rational():
        raise AlgebraError("root_of_unity_zero needs rational coefficients")
    c = p.cleared()
    if c.degree == 0:
        return None
    for d in _phi_bound_indices(c.degree):
        if cyclotomic(d, c.var).divides(c):
            return d
    return None


def pth_root_zero(p: LaurentPoly, n: int) -> bool:
    """True iff some n-th root of unity is a zero of p."""
    if not p:
        raise AlgebraError("the zero polynomial vanishes everywhere")
    if n < 1:
        raise AlgebraError("root order must be positive")
    c = p.cleared()
    g = poly_gcd(c, LaurentPoly({n: 1, 0: -1}, c.var))
    return g.degree > 0
