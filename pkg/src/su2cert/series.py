"""
Truncated bivariate power series in (s, t), used as an independent oracle
for the closed-form operator calculus.

Why truncation is exact here: every operator we apply is a polynomial in
d/ds, d/dt and t. Differentiation lowers total degree by one and
multiplication by t raises it, so the constant term of P(d/ds) W F only
reads coefficients of F of total degree <= deg P + ord W. Truncating F at
any total degree >= deg P + ord W therefore gives the exact constant term;
we keep a margin of two.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .algebra import LaurentPoly, as_fraction
from .operators import DonaldsonSeriesModel, WeylOperator, build_di, pbot


class TruncatedSeries:
    __slots__ = ("deg", "c")

    def __init__(self, coeffs: dict, deg: int):
        self.deg = deg
        self.c = {k: v for k, v in coeffs.items() if v and k[0] + k[1] <= deg}

    def __add__(self, other):
        c = dict(self.c)
        for k, v in other.c.items():
            c[k] = c.get(k, 0) + v
        return TruncatedSeries(c, min(self.deg, other.deg))

    def scale(self, x):
        return TruncatedSeries({k: v * x for k, v in self.c.items()}, self.deg)

    def d_s(self):
        return TruncatedSeries({(i - 1, j): v * i for (i, j), v in self.c.items() if i}, self.deg - 1)

    def d_t(self):
        return TruncatedSeries({(i, j - 1): v * j for (i, j), v in self.c.items() if j}, self.deg - 1)

    def mul_t(self, k=1):
        # valid coefficients stay those of total degree <= deg
        return TruncatedSeries({(i, j + k): v for (i, j), v in self.c.items()}, self.deg)

    def s_slice(self):
        """Drop every term with positive s-degree (evaluation at s = 0)."""
        return TruncatedSeries({k: v for k, v in self.c.items() if k[0] == 0}, self.deg)

    def coeff(self, i, j):
        return self.c.get((i, j), Fraction(0))

    def constant(self):
        if self.deg < 0:
            raise ValueError("truncation too low to read the constant term")
        return self.coeff(0, 0)


def exp_series_1d(lin, quad, deg) -> list:
    """Coefficients of exp(lin*x + quad*x^2) up to x^deg (via y' = (lin + 2 quad x) y)."""
    lin, quad = as_fraction(lin), as_fraction(quad)
    y = [Fraction(1)]
    for n in range(deg):
        nxt = lin * y[n] + (2 * quad * y[n - 1] if n >= 1 else 0)
        y.append(nxt / (n + 1))
    return y


def model_series(model: DonaldsonSeriesModel, deg: int) -> TruncatedSeries:
    c: dict = {}
    for cl in model.classes:
        es = exp_series_1d(cl.a, 0, deg)
        et = exp_series_1d(cl.k, model.Q / 2, deg)
        for i in range(deg + 1):
            for j in range(deg + 1 - i):
                c[(i, j)] = c.get((i, j), 0) + cl.alpha * es[i] * et[j]
    return TruncatedSeries(c, deg)


def apply_weyl_series(W: WeylOperator, f: TruncatedSeries) -> TruncatedSeries:
    out = TruncatedSeries({}, f.deg - W.order())
    derivs = [f]
    for (k, l), v in W.items():
        while len(derivs) <= l:
            derivs.append(derivs[-1].d_t())
        out = out + derivs[l].mul_t(k).scale(v)
    return out


def apply_ds_series(p: LaurentPoly, f: TruncatedSeries) -> TruncatedSeries:
    out = TruncatedSeries({}, f.deg - (p.degree if p else 0))
    cur = f
    for e in range(p.degree + 1 if p else 0):
        c = p.coeff(e)
        if c:
            out = out + cur.scale(c)
        cur = cur.d_s()
    return out


def oracle_degree(p: LaurentPoly, n: int) -> int:
    return p.degree + n + 2


def orthogonality_matrix_series(models, p: LaurentPoly | None = None) -> list:
    models = list(models)
    g, Q = models[0].g, models[0].Q
    ks = [m.bottom.k for m in models]
    p = pbot(None, g) if p is None else p
    deg = oracle_degree(p, len(models))
    series = [model_series(m, deg) for m in models]
    sliced = [apply_ds_series(p, f).s_slice() for f in series]
    out = []
    for i in range(len(models)):
        d = build_di(i, ks, Q)
        # d/ds commutes with t and d/dt, so apply p(d/ds) first and set s = 0
        out.append([apply_weyl_series(d, g).constant() for g in sliced])
    return out


def donaldson_pairing(model: DonaldsonSeriesModel, p: LaurentPoly, gi: LaurentPoly, deg=None) -> Fraction:
    """
    D((1 + x/2) (-R)^k Sigma^l) is k! l! times the s^k t^l coefficient of F.
    Returns sum_k sum_l e_k c_l k! l! F_{k,l} for p = sum e_k t^k, gi = sum c_l t^l.
    """
    deg = p.degree + gi.degree + 1 if deg is None else deg
    f = model_series(model, deg)
    total = Fraction(0)
    for k, e in p.items():
        for l, c in gi.items():
            total += e * c * factorial(k) * factorial(l) * f.coeff(k, l)
    return total
