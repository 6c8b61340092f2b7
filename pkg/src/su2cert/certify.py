"""
Certificates for nontrivial and irreducible SU(2) representations.

A certificate is a list of steps. Each step names a rule, the inputs it was
applied to, and the claim it makes; validate() re-executes every step from
its inputs alone. A positive conclusion is only emitted if its chain
validates. no_certificate is an abstention: it never claims that a
representation fails to exist.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .algebra import LaurentPoly, divisors, euler_phi, is_prime_power, mobius, pth_root_zero
from .knots import KnotRecord
from .lspace import NOT_LSPACE, LSpaceKB, format_chain
from .seifert import (SeifertData, seifert_filling, seifert_h1, sfs_lspace_classify)
from .slopes import Slope
from .stein import (LegendrianComponent, SteinHandlebodyModel, definiteness, gompf_chern,
                    h1_order, inertia, is_diagonalizable, is_even, is_zero_vector,
                    positive_knot_rotations, rank_lower_bound_from_stein, rotation_spectrum)

NONTRIVIAL, IRREDUCIBLE, ABSTAIN = "nontrivial_rep", "irreducible_rep", "no_certificate"


class InconsistentQuery(ValueError):
    """Query data that contradicts itself (rank below |H_1|, parity, ...)."""


# finite abelian groups ------------------------------------------------

@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple = ()  # invariant factors d_1 | d_2 | ... , each >= 2

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in fs):
            raise ValueError("invariant factors must be >= 2")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_cyclic(cls, *orders) -> "FiniteAbelianGroup":
        """Invariant factors of Z/n_1 + ... + Z/n_k (any orders >= 1)."""
        from .algebra import factorize
        powers: dict = {}
        for n in orders:
            if n < 1:
                raise ValueError("cyclic orders must be positive")
            for p, e in factorize(n).items():
                powers.setdefault(p, []).append(p ** e)
        depth = max((len(v) for v in powers.values()), default=0)
        out = [1] * depth
        for p, pw in powers.items():
            pw.sort(reverse=True)
            for i, x in enumerate(pw):
                out[depth - 1 - i] *= x
        return cls(tuple(d for d in out if d > 1))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) <= 1

    def two_torsion(self) -> int:
        return math.prod(math.gcd(d, 2) for d in self.factors)

    def __str__(self):
        return " + ".join(f"Z/{d}" for d in self.factors) or "0"


def reducible_classes(H: FiniteAbelianGroup) -> tuple[int, int]:
    """(conjugacy classes of reducible representations, homology rank of the representation variety)."""
    t = H.two_torsion()
    return t + (H.order - t) // 2, H.order


def boyer_nicas_dim(n: int, b1: dict) -> int:
    """(2 / phi(n)) * sum_{d | n} mu(n/d) b1(Y_d)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ds = divisors(n)
    missing = [d for d in ds if d not in b1]
    if missing:
        raise ValueError(f"b1 missing for divisors {missing}")
    if any(b1[d] < 0 for d in ds):
        raise ValueError("b1 values are nonnegative")
    for d in ds:
        if b1[d] > b1[n]:
            warnings.warn(f"b1(Y_{d}) = {b1[d]} exceeds b1(Y_{n}) = {b1[n]}; transfer forbids this")
    v = Fraction(2, euler_phi(n)) * sum(mobius(n // d) * b1[d] for d in ds)
    if v < 0:
        raise ValueError(f"negative dimension {v}: inconsistent b1 data")
    if v.denominator != 1:
        raise ValueError(f"non-integral dimension {v}: inconsistent b1 data")
    return int(v)


def tangent_dim(dim_centralizer: int, dim_h1: int) -> int:
    if dim_centralizer not in (1, 3):
        raise ValueError("centralizer dimension is 1 or 3")
    if dim_h1 < 0:
        raise ValueError("dim H^1 is nonnegative")
    return 3 - dim_centralizer + dim_h1


def cyclically_finite_surgery(delta: LaurentPoly, p: int) -> bool:
    """No zero of delta(t^2) is a |p|-th root of unity."""
    if p == 0:
        raise ValueError("p must be nonzero")
    return not pth_root_zero(delta.substitute_power(2), abs(p))


def small_h1_cyclic_finite(H: FiniteAbelianGroup) -> bool:
    if H.order <= 5:
        return True
    if H.is_cyclic and is_prime_power(H.order):
        return True
    return H.factors == (2, 2)


# certificates ---------------------------------------------------------

RULE_TEXT = {
    "H1-CHARACTER": "H_1(Y) != 0 gives a nontrivial representation through U(1)",
    "DONALDSON-PAIRING": "a Stein filling of a homology sphere with b2+ >= 1 has nontrivial Floer homology",
    "STEIN-C1": "J and its conjugate have Chern classes c and -c, distinct when c != 0: rank I# >= 2",
    "STEIN-FAMILY": "Stein structures with pairwise distinct Chern vectors on one filling bound rank I# below",
    "EVEN-FORM": "c_1 = 0 forces an even unimodular negative definite form, never diagonal, so h(Y) > 0",
    "HS-RANK": "a homology sphere with rank I# >= 2 has a nontrivial representation",
    "SEIFERT-FILLING": "a Seifert homology sphere bounds the stated Legendrian plumbing (or curated filling)",
    "ROTATION-SPECTRUM": "stabilizations of an sl-maximizing mirror representative give sl + n rotation numbers at tb = 1 - n",
    "POSITIVE-KNOT": "a positive mirror of genus g has g rotation numbers at tb = g",
    "LSPACE-CLOSURE": "the L-space slope rules exclude an L-space at the target slope",
    "RANK-PARITY": "rank I# = |p| + 2e, so not an L-space means rank >= |p| + 2",
    "RAW-RANK": "supplied rank evidence",
    "CF-ALEXANDER": "no zero of Delta(t^2) is a p-th root of unity, so pi_1 is cyclically finite",
    "CF-SMALL-H1": "H_1 cyclic of prime-power order, Z/2 + Z/2, or of order <= 5 gives cyclical finiteness",
    "CF-FLAG": "cyclical finiteness certified by the caller (universal abelian cover is a QHS)",
    "IRREDUCIBLE": "cyclically finite with rank I# > |H_1| gives an irreducible representation",
    "LSPACE-CLASSIFICATION": "the Seifert homology sphere is an instanton L-space, so rank evidence is unavailable",
}


@dataclass(frozen=True)
class Step:
    rule: str
    inputs: dict
    claim: str

    def to_record(self) -> dict:
        return {"rule": self.rule, "inputs": _jsonable(self.inputs), "claim": self.claim}


@dataclass
class Certificate:
    conclusion: str
    steps: list = field(default_factory=list)
    caveat: str = ""
    failing: str = ""  # rule id of the nearest failing hypothesis, for abstentions
    inputs: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)  # optional human-readable derivation lines

    @property
    def positive(self) -> bool:
        return self.conclusion != ABSTAIN

    def to_record(self) -> dict:
        rec = {"conclusion": self.conclusion, "chain": [s.to_record() for s in self.steps],
               "inputs": _jsonable(self.inputs), "version": __version__}
        if self.caveat:
            rec["caveat"] = self.caveat
        if self.failing:
            rec["failing"] = self.failing
        return rec


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, LaurentPoly, Slope)):
        return str(x)
    return x


# checkers: each re-derives its step from the inputs and returns the facts
# it establishes, or None on failure

def _model(inp) -> SteinHandlebodyModel:
    return SteinHandlebodyModel(tuple(LegendrianComponent(tb, rot) for tb, rot in inp["components"]),
                                tuple(map(tuple, inp["linking"])))


def _chk_h1(inp, est):
    return {"nontrivial": True} if inp["h1"] != 1 else None


def _chk_donaldson(inp, est):
    M = _model(inp).intersection_form()
    if h1_order(M) != 1:
        return None
    pos, _, zero = inertia(M)
    return {"nontrivial": True} if pos >= 1 and zero == 0 else None


def _chk_stein_c1(inp, est):
    m = _model(inp)
    v = gompf_chern(m)
    if is_zero_vector(v):
        return None
    n = rank_lower_bound_from_stein([v, gompf_chern(m.conjugate())], torsion_free=True)
    return {"rank_lower": n, "h1": h1_order(m.intersection_form())} if n >= 2 else None


def _chk_stein_family(inp, est):
    m = _model(inp)
    vecs = [tuple(v) for v in inp["rotation_vectors"]]
    for v in vecs:
        if len(v) != len(m.components):
            return None
        for c, r in zip(m.components, v):
            # each vector must be a legal rotation tuple at the same tb values
            if (c.tb + r) % 2 == 0:
                return None
    if tuple(gompf_chern(m)) not in vecs:
        return None
    n = rank_lower_bound_from_stein(vecs, torsion_free=True)
    return {"rank_lower": n, "h1": h1_order(m.intersection_form())}


def _chk_even(inp, est):
    m = _model(inp)
    M = m.intersection_form()
    if not is_zero_vector(gompf_chern(m)) or h1_order(M) != 1:
        return None
    if not is_even(M) or definiteness(M) != "negative_definite" or is_diagonalizable(M):
        return None
    return {"nontrivial": True}


def _chk_hs_rank(inp, est):
    if inp["h1"] != 1 or est.get("rank_lower", 0) < 2:
        return None
    return {"nontrivial": True}


def _chk_seifert(inp, est):
    Y = SeifertData.parse(inp["data"])
    f = seifert_filling(Y)
    comps = [[c.tb, c.rot] for c in f.model.components]
    if comps != [list(c) for c in inp["components"]] or [list(r) for r in f.model.linking] != \
            [list(r) for r in inp["linking"]]:
        return None
    return {"h1": seifert_h1(Y)}


def _chk_rotation(inp, est):
    sl, tb, n0 = inp["sl"], inp["tb"], inp["n0"]
    if sl < 0 or tb > sl or n0 < 1:
        return None
    # the hypotheses are monotone in n, so checking n0 covers every n >= n0
    spec = rotation_spectrum(tb, tb - sl, n0)
    if not spec.overlap or spec.guaranteed is None or spec.count < n0 + 1:
        return None
    return {"not_lspace_integers_from": n0}


def _chk_positive(inp, est):
    g = inp["g"]
    spec = positive_knot_rotations(g)
    if spec.count < g:
        return None
    return {"rank_lower_at": (g - 1, g)}


def _rebuild_kb(inp) -> LSpaceKB:
    kb = LSpaceKB(label=inp.get("knot", "K"))
    kb.assert_nontrivial(True)
    if inp.get("genus") is not None:
        kb.assert_genus(inp["genus"])
    if inp.get("alexander") is not None:
        kb.assert_alexander(LaurentPoly.parse(inp["alexander"], "t"))
    seed = inp["seed"]
    if seed["kind"] == "integers_from":
        kb.assert_not_lspace_integers_from(seed["n0"], rule="ST")
    elif seed["kind"] == "rank_lower":
        kb.assert_rank(seed["slope"], seed["value"], rule="ST")
    return kb.close()


def _chk_closure(inp, est):
    seed = inp["seed"]
    if seed["kind"] == "integers_from" and est.get("not_lspace_integers_from") != seed["n0"]:
        return None
    if seed["kind"] == "rank_lower" and est.get("rank_lower_at") != (seed["slope"], seed["value"]):
        return None
    kb = _rebuild_kb(inp)
    if kb.contradictions():
        return None
    status, _ = kb.status(inp["target"])
    return {"not_lspace": inp["target"]} if status == NOT_LSPACE else None


def _chk_parity(inp, est):
    p = abs(inp["p"])
    if p == 0 or "not_lspace" not in est:
        return None
    # the excluded slope must be the one whose |H_1| is claimed
    if abs(Slope.parse(est["not_lspace"]).p) != p:
        return None
    return {"rank_lower": p + 2, "h1": p}


def _chk_raw(inp, est):
    h1 = inp["h1"]
    out = {"h1": h1}
    if inp.get("rank_exact") is not None:
        r = inp["rank_exact"]
        if r < h1 or (r - h1) % 2:
            return None
        out["rank_lower"] = r
    elif inp.get("rank_lower") is not None:
        out["rank_lower"] = inp["rank_lower"]
    else:
        return None
    return out


def _chk_cf_alex(inp, est):
    d = LaurentPoly.parse(inp["alexander"], "t")
    return {"cyclically_finite": abs(inp["p"])} if cyclically_finite_surgery(d, inp["p"]) else None


def _chk_cf_small(inp, est):
    H = FiniteAbelianGroup(tuple(inp["invariant_factors"]))
    return {"cyclically_finite": H.order} if small_h1_cyclic_finite(H) else None


def _chk_cf_flag(inp, est):
    return {"cyclically_finite": True} if inp.get("flag") is True else None


def _chk_irreducible(inp, est):
    # cyclical finiteness evidence is tied to a group order, except for the caller's flag
    cf = est.get("cyclically_finite")
    if cf is not True and cf != inp["h1"]:
        return None
    if est.get("h1", inp["h1"]) != inp["h1"]:
        return None
    if est.get("rank_lower", 0) <= inp["h1"] or inp["h1"] == 0:
        return None
    return {"irreducible": True}


def _chk_noop(inp, est):
    return {}


CHECKERS = {
    "H1-CHARACTER": _chk_h1,
    "DONALDSON-PAIRING": _chk_donaldson,
    "STEIN-C1": _chk_stein_c1,
    "STEIN-FAMILY": _chk_stein_family,
    "EVEN-FORM": _chk_even,
    "HS-RANK": _chk_hs_rank,
    "SEIFERT-FILLING": _chk_seifert,
    "ROTATION-SPECTRUM": _chk_rotation,
    "POSITIVE-KNOT": _chk_positive,
    "LSPACE-CLOSURE": _chk_closure,
    "RANK-PARITY": _chk_parity,
    "RAW-RANK": _chk_raw,
    "CF-ALEXANDER": _chk_cf_alex,
    "CF-SMALL-H1": _chk_cf_small,
    "CF-FLAG": _chk_cf_flag,
    "IRREDUCIBLE": _chk_irreducible,
    "LSPACE-CLASSIFICATION": _chk_noop,
}


def validate(cert: Certificate) -> tuple[bool, list[str]]:
    """Re-run every step; a positive conclusion also needs the matching final fact."""
    est: dict = {}
    problems = []
    for i, s in enumerate(cert.steps):
        chk = CHECKERS.get(s.rule)
        if chk is None:
            problems.append(f"step {i}: unknown rule {s.rule}")
            continue
        try:
            got = chk(s.inputs, est)
        except Exception as exc:  # a malformed step is a failed step
            got = None
            problems.append(f"step {i} ({s.rule}) raised {exc!r}")
        if got is None:
            problems.append(f"step {i} ({s.rule}) does not re-validate")
            continue
        est.update(got)
    if cert.conclusion == NONTRIVIAL and not est.get("nontrivial"):
        problems.append("chain does not establish a nontrivial representation")
    if cert.conclusion == IRREDUCIBLE and not est.get("irreducible"):
        problems.append("chain does not establish an irreducible representation")
    return not problems, problems


# queries ----------------------------------------------------------------

@dataclass
class SteinQuery:
    components: list               # [(tb, rot), ...]
    linking: list
    rotation_vectors: list = field(default_factory=list)  # further Stein structures, same tb's
    cyclically_finite: bool = False


@dataclass
class SurgeryQuery:
    knot: KnotRecord
    slope: Slope
    cyclically_finite: bool = False
    lspace_at: list = field(default_factory=list)
    not_lspace_at: list = field(default_factory=list)


@dataclass
class SeifertQuery:
    data: SeifertData


@dataclass
class RawQuery:
    h1: int
    rank_lower: int | None = None
    rank_exact: int | None = None
    invariant_factors: tuple | None = None
    cyclically_finite: bool = False


def certify(query) -> Certificate:
    if isinstance(query, SteinQuery):
        cert = _certify_stein(query)
    elif isinstance(query, SurgeryQuery):
        cert = _certify_surgery(query)
    elif isinstance(query, SeifertQuery):
        cert = _certify_seifert(query)
    elif isinstance(query, RawQuery):
        cert = _certify_raw(query)
    else:
        raise TypeError(f"unsupported query {type(query).__name__}")
    if cert.positive:
        ok, problems = validate(cert)
        if not ok:  # never hand out a chain that does not re-check
            return Certificate(ABSTAIN, cert.steps, "internal chain failed validation: " + "; ".join(problems),
                               "VALIDATION", cert.inputs, cert.trace)
    return cert


def certify_batch(queries, workers: int = 4) -> list:
    """Order-preserving parallel certification; exceptions are returned in place."""
    def run(q):
        try:
            return certify(q)
        except Exception as exc:
            return exc
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(run, queries))


def _abstain(reason: str, failing: str, inputs, steps=(), trace=()) -> Certificate:
    return Certificate(ABSTAIN, list(steps), reason + " (abstention: no claim that representations fail to exist)",
                       failing, inputs, list(trace))


def _cyclic_finiteness_steps(alexander, p, flag, h1_group=None):
    """First applicable evidence: Alexander test, small H_1, caller flag."""
    if alexander is not None:
        if cyclically_finite_surgery(alexander, p):
            return Step("CF-ALEXANDER", {"alexander": str(alexander), "p": p},
                        f"no zero of Delta(t^2) is a {abs(p)}-th root of unity"), None
    H = h1_group or FiniteAbelianGroup.from_cyclic(abs(p))
    if small_h1_cyclic_finite(H):
        return Step("CF-SMALL-H1", {"invariant_factors": list(H.factors)},
                    f"H_1 = {H} is cyclically finite"), None
    if flag:
        return Step("CF-FLAG", {"flag": True}, "cyclical finiteness supplied"), None
    return None, "CF-ALEXANDER" if alexander is not None else "CF-SMALL-H1"


def _certify_stein(q: SteinQuery) -> Certificate:
    model = SteinHandlebodyModel(tuple(LegendrianComponent(*c) for c in q.components),
                                 tuple(map(tuple, q.linking)) if q.linking else ())
    M = model.intersection_form()
    inputs = {"components": [[c.tb, c.rot] for c in model.components],
              "linking": [list(r) for r in model.linking]}
    if not model.components:
        return _abstain("the filling is a homology ball (no 2-handles)", "STEIN-C1", inputs)
    h1 = h1_order(M)
    steps = []
    if h1 != 1:
        # rational homology sphere: try for an irreducible first
        vecs = [tuple(gompf_chern(model))] + [tuple(v) for v in q.rotation_vectors]
        # conjugate structures come for free
        both = [list(v) for v in dict.fromkeys(vecs + [tuple(-x for x in v) for v in vecs])]
        if h1 > 0 and len(both) > h1:
            fam = Step("STEIN-FAMILY", dict(inputs, rotation_vectors=both),
                       f"rank I# >= {len(both)}")
            cf, fail = _cyclic_finiteness_steps(None, h1, q.cyclically_finite)
            if cf is not None:
                return Certificate(IRREDUCIBLE, [fam, cf, Step("IRREDUCIBLE", {"h1": h1},
                                   f"{len(both)} > |H_1| = {h1}")], inputs=inputs)
        return Certificate(NONTRIVIAL, [Step("H1-CHARACTER", {"h1": h1},
                           "H_1(Y) != 0" if h1 else "b_1(Y) > 0")], inputs=inputs)
    kind = definiteness(M)
    if kind != "negative_definite":
        steps.append(Step("DONALDSON-PAIRING", inputs, f"intersection form is {kind}, b2+ >= 1"))
        return Certificate(NONTRIVIAL, steps, inputs=inputs)
    if not is_zero_vector(gompf_chern(model)):
        steps.append(Step("STEIN-C1", inputs, "rank I# >= 2"))
        steps.append(Step("HS-RANK", {"h1": 1}, "nontrivial representation"))
        return Certificate(NONTRIVIAL, steps, inputs=inputs)
    steps.append(Step("EVEN-FORM", inputs, "even, negative definite, not diagonalizable"))
    return Certificate(NONTRIVIAL, steps, inputs=inputs)


def _certify_seifert(q: SeifertQuery) -> Certificate:
    Y = q.data
    inputs = {"data": str(Y)}
    h1 = seifert_h1(Y)
    if h1 != 1:
        return Certificate(NONTRIVIAL, [Step("H1-CHARACTER", {"h1": h1},
                           "H_1(Y) != 0" if h1 else "b_1(Y) > 0")], inputs=inputs)
    if Y.k < 3:
        return _abstain("S^3 has only the trivial representation", "SEIFERT-FILLING", inputs)
    if sfs_lspace_classify(Y):
        return _abstain("Y is +-Sigma(2,3,5), an instanton L-space; pi_1 does admit irreducibles but no "
                        "rank evidence is available", "LSPACE-CLASSIFICATION", inputs,
                        [Step("LSPACE-CLASSIFICATION", inputs, "rank I#(Y) = 1")])
    f = seifert_filling(Y)
    comp = {"components": [[c.tb, c.rot] for c in f.model.components],
            "linking": [list(r) for r in f.model.linking]}
    if not f.c1_nonzero:
        return _abstain("no filling with c_1 != 0 is known", "STEIN-C1", inputs)
    side = "-Y" if f.reversed else "Y"
    steps = [Step("SEIFERT-FILLING", dict(inputs, **comp), f"{side} bounds the {f.source} Stein filling"),
             Step("STEIN-C1", comp, "rank I# >= 2"),
             Step("HS-RANK", {"h1": 1}, "nontrivial representation")]
    return Certificate(NONTRIVIAL, steps, inputs=inputs)


def _certify_raw(q: RawQuery) -> Certificate:
    inputs = {"h1": q.h1, "rank_lower": q.rank_lower, "rank_exact": q.rank_exact,
              "invariant_factors": list(q.invariant_factors) if q.invariant_factors else None,
              "cyclically_finite": q.cyclically_finite}
    if q.h1 < 0:
        raise InconsistentQuery("|H_1| is nonnegative")
    if q.invariant_factors is not None and FiniteAbelianGroup(tuple(q.invariant_factors)).order != q.h1:
        raise InconsistentQuery("invariant factors do not multiply to |H_1|")
    if q.rank_exact is not None and q.h1 > 0:
        if q.rank_exact < q.h1:
            raise InconsistentQuery(f"rank {q.rank_exact} is below |H_1| = {q.h1}")
        if (q.rank_exact - q.h1) % 2:
            raise InconsistentQuery(f"rank {q.rank_exact} and |H_1| = {q.h1} have different parity")
    if q.rank_lower is not None and q.rank_lower < 0:
        raise InconsistentQuery("rank bounds are nonnegative")
    rank = q.rank_exact if q.rank_exact is not None else q.rank_lower
    raw_step = Step("RAW-RANK", {"h1": q.h1, "rank_exact": q.rank_exact, "rank_lower": q.rank_lower},
                    f"rank I# >= {rank}")
    if q.h1 == 1:
        if rank is not None and rank >= 2:
            return Certificate(NONTRIVIAL, [raw_step, Step("HS-RANK", {"h1": 1}, "nontrivial representation")],
                               inputs=inputs)
        return _abstain("homology sphere without rank >= 2 evidence", "HS-RANK", inputs)
    if q.h1 > 1 and rank is not None and rank > q.h1:
        cf = None
        if q.invariant_factors:
            H = FiniteAbelianGroup(tuple(q.invariant_factors))
            if small_h1_cyclic_finite(H):
                cf = Step("CF-SMALL-H1", {"invariant_factors": list(H.factors)}, f"H_1 = {H} is cyclically finite")
        if cf is None and q.cyclically_finite:
            cf = Step("CF-FLAG", {"flag": True}, "cyclical finiteness supplied")
        if cf is not None:
            return Certificate(IRREDUCIBLE, [raw_step, cf, Step("IRREDUCIBLE", {"h1": q.h1},
                               f"{rank} > |H_1| = {q.h1}")], inputs=inputs)
    return Certificate(NONTRIVIAL, [Step("H1-CHARACTER", {"h1": q.h1},
                       "H_1(Y) != 0" if q.h1 else "b_1(Y) > 0")], inputs=inputs)


def _mirror_data(k: KnotRecord):
    """(sl, tb) of an sl-maximizing mirror representative, if known."""
    if k.sl_bar_mirror is not None:
        return k.sl_bar_mirror, k.tb_bar_mirror
    if k.mirror_positive and k.genus:
        return 2 * k.genus - 1, 2 * k.genus - 1
    return None, None


def _certify_surgery(q: SurgeryQuery) -> Certificate:
    k, r = q.knot, Slope.of(q.slope)
    inputs = {"knot": k.name, "slope": str(r)}
    if r.is_infinite:
        return _abstain("the trivial surgery is S^3", "SLOPE", inputs)
    p = r.p
    if p == 0:
        return _abstain("0-surgery has b_1 > 0; not a rational homology sphere", "SLOPE", inputs)
    if not k.nontrivial:
        return _abstain("surgery on the unknot is a lens space", "NT", inputs)
    x = r.value()
    _check_supplied(k, q)
    sl, tb = _mirror_data(k)
    g = k.genus
    base = {"knot": k.name, "genus": g, "alexander": str(k.alexander)}
    steps = []
    if x > 0:
        if sl is None:
            return _abstain("maximal self-linking number of the mirror is unknown", "ROTATION-SPECTRUM", inputs)
        if sl < 0:
            return _abstain(f"sl of the mirror is {sl} < 0", "ROTATION-SPECTRUM", inputs)
        if tb is None:
            return _abstain("no tb for an sl-maximizing mirror representative", "ROTATION-SPECTRUM", inputs)
        n0 = max(1, 1 - tb, 2 - tb - (tb - sl))
        steps.append(Step("ROTATION-SPECTRUM", {"sl": sl, "tb": tb, "n0": n0},
                          f"rank I#(S^3_n(K)) >= n + 1 for all integers n >= {n0}"))
        closure = dict(base, seed={"kind": "integers_from", "n0": n0}, target=str(r))
    else:
        if not k.mirror_positive or not g:
            return _abstain("negative slope and the mirror is not known to be positive", "POSITIVE-KNOT", inputs)
        if x <= -g:
            return _abstain(f"slope {r} <= -g = {-g}", "POSITIVE-KNOT", inputs)
        steps.append(Step("POSITIVE-KNOT", {"g": g}, f"rank I#(S^3_{g - 1}(mirror)) >= {g}"))
        closure = dict(base, knot=k.name + " (mirror)", seed={"kind": "rank_lower", "slope": g - 1, "value": g},
                       target=str(-r))
        if g == 1:
            closure["seed"] = {"kind": "none"}
    if closure["seed"]["kind"] == "rank_lower" and closure["seed"]["slope"] == 0:
        closure["seed"] = {"kind": "none"}
    kb = _rebuild_kb(closure)
    status, fact = kb.status(closure["target"])
    trace = format_chain(kb, fact) if fact is not None and status == NOT_LSPACE else []
    if status != NOT_LSPACE:
        return _abstain(f"could not exclude an L-space at {r}", "LSPACE-CLOSURE", inputs, steps, trace)
    steps.append(Step("LSPACE-CLOSURE", closure, f"S^3_{r}(K) is not an instanton L-space"))
    steps.append(Step("RANK-PARITY", {"p": p}, f"rank I# >= {abs(p) + 2} > |H_1| = {abs(p)}"))
    cf, fail = _cyclic_finiteness_steps(k.alexander, p, q.cyclically_finite)
    if cf is None:
        return _abstain(f"some zero of Delta(t^2) is a {abs(p)}-th root of unity; "
                        "S^3_r(K) is not an L-space but cyclical finiteness is not established",
                        fail, inputs, steps, trace)
    steps.append(cf)
    steps.append(Step("IRREDUCIBLE", {"h1": abs(p)}, "irreducible representation"))
    return Certificate(IRREDUCIBLE, steps, inputs=inputs, trace=trace)


def _check_supplied(k: KnotRecord, q: SurgeryQuery):
    """Caller-supplied L-space facts must be consistent with the slope rules."""
    if not q.lspace_at and not q.not_lspace_at:
        return
    kb = LSpaceKB(label=k.name)
    kb.assert_nontrivial(True)
    if k.genus is not None:
        kb.assert_genus(k.genus)
    kb.assert_alexander(k.alexander)
    for s in q.lspace_at:
        kb.assert_lspace(s)
    for s in q.not_lspace_at:
        kb.assert_not_lspace(s)
    kb.close()
    bad = kb.contradictions()
    if bad:
        raise InconsistentQuery("; ".join(format_chain(kb, bad[0])))


def explain(cert: Certificate) -> list[str]:
    lines = [f"conclusion: {cert.conclusion}"]
    for i, s in enumerate(cert.steps, 1):
        lines.append(f"  {i}. [{s.rule}] {s.claim}")
    if cert.caveat:
        lines.append(f"  note: {cert.caveat}")
    if cert.failing:
        lines.append(f"  nearest failing rule: {cert.failing}")
    return lines
