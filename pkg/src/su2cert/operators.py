"""
Eigenspace projection polynomials and the one-variable Weyl algebra.

The pieces fit together as follows. ``pbot`` builds a polynomial that is 1
at 2-2g and vanishes at every other admissible eigenvalue. ``build_di``
builds a differential operator in t that picks out a single exponential
rate k_i. Applying both to a symbolic Donaldson series and evaluating at
the origin gives ``orthogonality_matrix``, which should be diag(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from math import comb, factorial

from .algebra import (
    AlgebraError,
    GaussianRational,
    LaurentPoly,
    _coeff,
    as_fraction,
)


class SpectrumError(ValueError):
    pass


class ModelError(ValueError):
    pass


# ----------------------------------------------------------------------
# matrices over Q[i]

class SquareMatrix:
    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = [[_coeff(GaussianRational.coerce(x) if isinstance(x, GaussianRational) else x)
                 for x in r] for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("SquareMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n):
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, SquareMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        return SquareMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SquareMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        return SquareMatrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other):
        if other.n != self.n:
            raise ValueError("matrix sizes differ")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SquareMatrix(out)

    def __pow__(self, k: int):
        out, base = SquareMatrix.identity(self.n), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def trace(self):
        return _coeff(sum((self.rows[i][i] for i in range(self.n)), Fraction(0)))

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def apply_poly(self, p: LaurentPoly) -> "SquareMatrix":
        """p(A) by Horner's rule (p must be an ordinary polynomial)."""
        if p.is_zero():
            return SquareMatrix.zero(self.n)
        if p.order < 0:
            raise AlgebraError("cannot evaluate a Laurent polynomial at a matrix")
        ident = SquareMatrix.identity(self.n)
        acc = SquareMatrix.zero(self.n)
        for e in range(p.degree, -1, -1):
            acc = acc @ self
            c = p.coeff(e)
            if c:
                acc = acc + ident.scale(c)
        return acc

    def charpoly(self) -> LaurentPoly:
        """det(tI - A) by the Faddeev-LeVerrier recursion."""
        n = self.n
        ident = SquareMatrix.identity(n)
        coeffs = {n: Fraction(1)}
        m = SquareMatrix.zero(n)
        c = Fraction(1)
        for k in range(1, n + 1):
            m = self @ m + ident.scale(c)
            c = _coeff((self @ m).trace() / -k)
            coeffs[n - k] = c
        return LaurentPoly(coeffs, "t")

    def rank(self) -> int:
        rows = [list(r) for r in self.rows]
        rank, col = 0, 0
        n = self.n
        while rank < n and col < n:
            piv = next((i for i in range(rank, n) if rows[i][col]), None)
            if piv is None:
                col += 1
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = 1 / GaussianRational.coerce(rows[rank][col])
            for i in range(rank + 1, n):
                if rows[i][col]:
                    f = rows[i][col] * inv
                    rows[i] = [_coeff(a - f * b) for a, b in zip(rows[i], rows[rank])]
            rank += 1
            col += 1
        return rank

    def nullity(self) -> int:
        return self.n - self.rank()

    def __repr__(self):
        return "SquareMatrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


def _linear(root) -> LaurentPoly:
    return LaurentPoly({1: 1, 0: -_coeff(GaussianRational.coerce(root))}, "t")


def spectrum(A: SquareMatrix, candidates) -> dict:
    """
    Algebraic multiplicities of the eigenvalues of A, found by dividing the
    characteristic polynomial by (t - c) for each candidate c. Raises
    SpectrumError if the candidates do not account for every eigenvalue.
    """
    chi = A.charpoly()
    out = {}
    seen = set()
    for c in candidates:
        c = _coeff(GaussianRational.coerce(c))
        if c in seen:
            continue
        seen.add(c)
        lin = _linear(c)
        m = 0
        while chi.degree > 0:
            q, r = chi.divmod(lin)
            if r:
                break
            chi, m = q, m + 1
        if m:
            out[c] = m
    if chi.degree != 0:
        raise SpectrumError(f"characteristic polynomial has roots outside the candidate set: {chi}")
    return out


def default_candidates(A: SquareMatrix, extra=()):
    """Gaussian integers inside the Cauchy root bound (capped at 16), plus extras."""
    chi = A.charpoly()
    bound = 1
    for e, c in chi.items():
        if e < chi.degree:
            nrm = GaussianRational.coerce(c).norm()
            # |c| <= nrm when nrm >= 1, otherwise |c| < 1
            bound = max(bound, 1 + int(nrm) + 1)
    bound = min(bound, 16)
    cands = list(extra)
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            cands.append(GaussianRational(a, b))
    return cands


# ----------------------------------------------------------------------
# projection polynomials

def _series_inverse(b: list, m: int) -> list:
    """First m coefficients of 1/(b0 + b1 u + ...)."""
    inv0 = 1 / GaussianRational.coerce(b[0])
    c = [_coeff(inv0)]
    for j in range(1, m):
        acc = 0
        for i in range(1, j + 1):
            if i < len(b):
                acc = acc + b[i] * c[j - i]
        c.append(_coeff(-acc * inv0))
    return c


def projection_polynomial(A: SquareMatrix, lam1, avoid=(), spec: dict | None = None,
                          candidates=None) -> LaurentPoly:
    """
    A polynomial p in Q[t] with p(lam1) = 1, p(d) = 0 for d in ``avoid`` and
    p(A) the projection onto the generalised lam1-eigenspace along the other
    generalised eigenspaces.

    Construction: f = prod (t - rho)^(m_rho) over eigenvalues and avoided
    values rho != lam1, g = f * conj(f) (rational), h = g^-1 modulo
    (t - lam1)^m1, p = h * g. If lam1 is not an eigenvalue the caller must
    pass it via ``spec`` with multiplicity 0; then m1 = 1 and p(A) = 0.
    """
    lam1 = as_fraction(lam1)
    avoid = [_coeff(GaussianRational.coerce(d)) for d in avoid]
    if any(d == lam1 for d in avoid):
        raise ValueError("avoided values must differ from lam1")
    if spec is None:
        cands = candidates if candidates is not None else default_candidates(A, [lam1, *avoid])
        spec = spectrum(A, [lam1, *avoid, *cands])
    if lam1 not in spec:
        raise SpectrumError(f"{lam1} is not an eigenvalue")
    m1 = max(spec[lam1], 1)
    roots: dict = {}
    for rho, m in spec.items():
        if rho != lam1 and m:
            roots[rho] = m
    for d in avoid:
        roots.setdefault(d, 1)
    f = LaurentPoly.constant(1, "t")
    for rho, m in roots.items():
        f = f * _linear(rho) ** m
    g = f if f.is_rational() else f * f.conjugate()
    if not g.is_rational():
        raise AlgebraError("f * conj(f) should be rational")
    shifted = g.taylor_shift(lam1)
    b = [shifted.coeff(j) for j in range(m1)]
    c = _series_inverse(b, m1)
    h_u = LaurentPoly(dict(enumerate(c)), "t")
    h = h_u.taylor_shift(-lam1)
    return h * g


def allowed_eigenvalues(g: int) -> list:
    """The values +-2k and +-2ki for 0 <= k <= g-1."""
    vals = []
    for k in range(g):
        for v in (GaussianRational(2 * k), GaussianRational(-2 * k),
                  GaussianRational(0, 2 * k), GaussianRational(0, -2 * k)):
            v = _coeff(v)
            if v not in vals:
                vals.append(v)
    return vals


def pbot(A: SquareMatrix | None, g: int) -> LaurentPoly:
    """
    Projection polynomial onto the generalised (2-2g)-eigenspace which also
    vanishes at 3-2g, ..., 2g-2. With A = None, uses the 1x1 matrix [2-2g].
    """
    if g < 2:
        raise ValueError("pbot needs genus g >= 2")
    lam1 = Fraction(2 - 2 * g)
    avoid = [Fraction(m) for m in range(3 - 2 * g, 2 * g - 1)]
    if A is None:
        A = SquareMatrix([[lam1]])
    try:
        spec = spectrum(A, allowed_eigenvalues(g))
    except SpectrumError as exc:
        raise SpectrumError(f"eigenvalue outside the allowed set for g={g}: {exc}") from None
    spec.setdefault(lam1, 0)
    return projection_polynomial(A, lam1, avoid, spec=spec)


def generalized_eigenspace_dim(A: SquareMatrix, lam) -> int:
    shifted = A - SquareMatrix.identity(A.n).scale(_coeff(GaussianRational.coerce(lam)))
    return (shifted ** A.n).nullity()


# ----------------------------------------------------------------------
# Weyl algebra

class WeylOperator:
    """Normal-ordered sum of c_{k,l} t^k d^l with d = d/dt."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        for (k, l), v in (coeffs or {}).items():
            v = as_fraction(v)
            if v:
                c[(int(k), int(l))] = v
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("WeylOperator is immutable")

    @classmethod
    def identity(cls):
        return cls({(0, 0): 1})

    @classmethod
    def linear(cls, alpha=0, beta=0, gamma=0):
        """alpha*d + beta*t + gamma."""
        return cls({(0, 1): alpha, (1, 0): beta, (0, 0): gamma})

    def items(self):
        return sorted(self._c.items())

    def coeff(self, k, l):
        return self._c.get((k, l), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, WeylOperator) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other):
        c = dict(self._c)
        for key, v in other._c.items():
            c[key] = c.get(key, 0) + v
        return WeylOperator(c)

    def __neg__(self):
        return WeylOperator({key: -v for key, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_fraction(c)
        return WeylOperator({key: v * c for key, v in self._c.items()})

    def __mul__(self, other):
        """Composition self o other, normal ordered."""
        if not isinstance(other, WeylOperator):
            return self.scale(other)
        out: dict = {}
        for (a, b), v1 in self._c.items():
            for (c, d), v2 in other._c.items():
                # d^b t^c = sum_j C(b,j) c!/(c-j)! t^(c-j) d^(b-j)
                for j in range(min(b, c) + 1):
                    w = comb(b, j) * (factorial(c) // factorial(c - j))
                    key = (a + c - j, b - j + d)
                    out[key] = out.get(key, 0) + v1 * v2 * w
        return WeylOperator(out)

    __rmul__ = scale

    def order(self) -> int:
        return max((l for (_, l) in self._c), default=0)

    def __repr__(self):
        if not self._c:
            return "WeylOperator(0)"
        terms = []
        for (k, l), v in self.items():
            mono = "".join([f"t^{k}" if k > 1 else ("t" if k else ""),
                            f"D^{l}" if l > 1 else ("D" if l else "")])
            terms.append(f"{v}{'*' + mono if mono else ''}")
        return "WeylOperator(" + " + ".join(terms) + ")"


def weyl_normal_order(factors) -> WeylOperator:
    """Normal form of the ordered product of factors (alpha, beta, gamma) = alpha*d + beta*t + gamma."""
    out = WeylOperator.identity()
    for f in factors:
        out = out * (f if isinstance(f, WeylOperator) else WeylOperator.linear(*f))
    return out


def build_di(i: int, ks, Q) -> WeylOperator:
    """
    prod_{j != i} (d - Q t - k_j) / (k_i - k_j), with i a 0-based index.
    Acting on exp(Q t^2/2 + k_j t) it multiplies by the Kronecker delta.
    """
    ks = [as_fraction(k) for k in ks]
    if len(set(ks)) != len(ks):
        raise ValueError("build_di needs pairwise distinct k values")
    if not 0 <= i < len(ks):
        raise IndexError("build_di index out of range")
    Q = as_fraction(Q)
    out = WeylOperator.identity()
    for j, kj in enumerate(ks):
        if j == i:
            continue
        denom = ks[i] - kj
        out = out * WeylOperator.linear(1 / denom, -Q / denom, -kj / denom)
    return out


def extract_gi(d: WeylOperator) -> LaurentPoly:
    """sum_l c_{0,l} t^l."""
    return LaurentPoly({l: v for (k, l), v in d.items() if k == 0}, "t")


# ----------------------------------------------------------------------
# Gaussian-exponential terms

@dataclass(frozen=True)
class GaussExpTerm:
    """q(s,t) * exp(Q t^2/2 + a s + k t); q is a dict (i, j) -> coeff of s^i t^j."""

    q: tuple
    Q: Fraction = Fraction(0)
    a: Fraction = Fraction(0)
    k: Fraction = Fraction(0)

    @classmethod
    def make(cls, q=None, Q=0, a=0, k=0):
        q = {(0, 0): 1} if q is None else q
        items = tuple(sorted((key, as_fraction(v)) for key, v in q.items() if v))
        return cls(items, as_fraction(Q), as_fraction(a), as_fraction(k))

    @property
    def qdict(self) -> dict:
        return dict(self.q)

    def key(self):
        return (self.Q, self.a, self.k)

    def with_q(self, q: dict) -> "GaussExpTerm":
        return GaussExpTerm.make(q, self.Q, self.a, self.k)

    def d_t(self) -> "GaussExpTerm":
        out: dict = {}
        for (i, j), v in self.q:
            if j:
                out[(i, j - 1)] = out.get((i, j - 1), 0) + v * j
            out[(i, j + 1)] = out.get((i, j + 1), 0) + v * self.Q
            out[(i, j)] = out.get((i, j), 0) + v * self.k
        return self.with_q(out)

    def d_s(self) -> "GaussExpTerm":
        out: dict = {}
        for (i, j), v in self.q:
            if i:
                out[(i - 1, j)] = out.get((i - 1, j), 0) + v * i
            out[(i, j)] = out.get((i, j), 0) + v * self.a
        return self.with_q(out)

    def mul_t(self, power=1) -> "GaussExpTerm":
        return self.with_q({(i, j + power): v for (i, j), v in self.q})

    def scale(self, c) -> "GaussExpTerm":
        c = as_fraction(c)
        return self.with_q({key: v * c for key, v in self.q})

    def at_origin(self) -> Fraction:
        return dict(self.q).get((0, 0), Fraction(0))

    def is_zero(self):
        return not self.q


def combine_terms(terms) -> list:
    """Merge terms that share the same exponential part; drop zeros."""
    acc: dict = {}
    for term in terms:
        qd = acc.setdefault(term.key(), {})
        for key, v in term.q:
            qd[key] = qd.get(key, 0) + v
    out = []
    for (Q, a, k), qd in acc.items():
        term = GaussExpTerm.make(qd, Q, a, k)
        if not term.is_zero():
            out.append(term)
    return out


def apply_weyl(W: WeylOperator, term) -> list:
    """Exact action of a normal-ordered operator in t on a term or a list of terms."""
    terms = [term] if isinstance(term, GaussExpTerm) else list(term)
    out = []
    for tm in terms:
        # cache successive t-derivatives
        derivs = [tm]
        for (k, l), c in W.items():
            while len(derivs) <= l:
                derivs.append(derivs[-1].d_t())
            out.append(derivs[l].mul_t(k).scale(c))
    return combine_terms(out)


def apply_ds_poly(p: LaurentPoly, term) -> list:
    """Exact action of p(d/ds) on a term or list of terms."""
    if not p.is_zero() and p.order < 0:
        raise AlgebraError("p(d/ds) needs an ordinary polynomial")
    terms = [term] if isinstance(term, GaussExpTerm) else list(term)
    out = []
    for tm in terms:
        cur = tm
        for e in range(0, (p.degree + 1) if not p.is_zero() else 0):
            c = p.coeff(e)
            if c:
                out.append(cur.scale(c))
            cur = cur.d_s()
    return combine_terms(out)


# ----------------------------------------------------------------------
# Donaldson series models

@dataclass(frozen=True)
class BasicClass:
    alpha: Fraction
    a: Fraction
    k: Fraction

    def __post_init__(self):
        for name in ("alpha", "a", "k"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))


@dataclass(frozen=True)
class DonaldsonSeriesModel:
    """
    F(s,t) = exp(Q t^2/2) * sum_r alpha_r exp(a_r s + k_r t).

    a_r is the pairing of the r-th basic class with -R, k_r its pairing
    with Sigma. Exactly one class sits at a = 2 - 2g.
    """

    g: int
    Q: Fraction
    classes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "Q", as_fraction(self.Q))
        cls = tuple(c if isinstance(c, BasicClass) else BasicClass(*c) for c in self.classes)
        object.__setattr__(self, "classes", cls)
        self.validate()

    def validate(self):
        if self.g < 2:
            raise ModelError("genus must be at least 2")
        if not self.classes:
            raise ModelError("a model needs at least one basic class")
        bottom = 0
        for c in self.classes:
            if c.alpha == 0:
                raise ModelError("basic-class coefficients must be nonzero")
            if c.a.denominator != 1:
                raise ModelError(f"pairing a={c.a} with -R must be an integer")
            if abs(c.a) > 2 * self.g - 2:
                raise ModelError(f"|a|={abs(c.a)} exceeds 2g-2={2 * self.g - 2}")
            if c.a == 2 - 2 * self.g:
                bottom += 1
        if bottom != 1:
            raise ModelError(f"expected exactly one class with a = 2-2g, found {bottom}")

    @property
    def bottom(self) -> BasicClass:
        return next(c for c in self.classes if c.a == 2 - 2 * self.g)

    def terms(self) -> list:
        return [GaussExpTerm.make({(0, 0): c.alpha}, self.Q, c.a, c.k) for c in self.classes]


def _check_family(models):
    if not models:
        raise ModelError("need at least one model")
    g, Q = models[0].g, models[0].Q
    for m in models:
        if m.g != g or m.Q != Q:
            raise ModelError("models must share g and Q")
    ks = [m.bottom.k for m in models]
    if len(set(ks)) != len(ks):
        raise ModelError("the bottom classes must pair distinctly with Sigma")
    return g, Q, ks


def orthogonality_matrix(models, p: LaurentPoly | None = None) -> list:
    """Entry (i, j) = [p_bot(d/ds) d_i F_j](0, 0), computed in closed form."""
    models = list(models)
    g, Q, ks = _check_family(models)
    p = pbot(None, g) if p is None else p
    ds = [build_di(i, ks, Q) for i in range(len(models))]
    out = []
    for i in range(len(models)):
        row = []
        for m in models:
            terms = apply_ds_poly(p, apply_weyl(ds[i], m.terms()))
            row.append(sum((tm.at_origin() for tm in terms), Fraction(0)))
        out.append(row)
    return out


def _rand_fraction(rng, lo, hi, max_den):
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_family(rng, n: int, g: int, max_extra: int = 3, max_den: int = 3) -> list:
    """n valid models sharing g and a random Q, with distinct bottom pairings k_i."""
    Q = _rand_fraction(rng, -6, 6, max_den)
    ks: list = []
    while len(ks) < n:
        k = _rand_fraction(rng, -8, 8, max_den)
        if k not in ks:
            ks.append(k)
    models = []
    for k in ks:
        classes = [BasicClass(_nonzero(rng, max_den), 2 - 2 * g, k)]
        for _ in range(rng.randint(0, max_extra)):
            classes.append(BasicClass(_nonzero(rng, max_den), rng.randint(3 - 2 * g, 2 * g - 2),
                                      _rand_fraction(rng, -8, 8, max_den)))
        rng.shuffle(classes)
        models.append(DonaldsonSeriesModel(g, Q, tuple(classes)))
    return models


def _nonzero(rng, max_den):
    while True:
        x = _rand_fraction(rng, -9, 9, max_den)
        if x:
            return x


# ----------------------------------------------------------------------
# integral classes with distinct pairings

def distinct_pairing_vector(cs) -> list:
    """
    Integer x with the pairings c.x pairwise distinct. Tries the moment
    vectors (1, M, M^2, ...) for M = 1, 2, ...; the bad M are roots of
    finitely many nonzero polynomials, so the search terminates.
    """
    cs = [tuple(as_fraction(v) for v in c) for c in cs]
    if len(set(cs)) != len(cs):
        raise ValueError("vectors must be pairwise distinct")
    if not cs:
        return []
    dim = len(cs[0])
    if len(cs) == 1:
        return [0] * dim
    for M in count(1):
        x = [M ** e for e in range(dim)]
        vals = [sum(a * b for a, b in zip(c, x)) for c in cs]
        if len(set(vals)) == len(vals):
            return x
