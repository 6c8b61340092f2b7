import math
import warnings
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from su2cert.algebra import LaurentPoly
from su2cert.certify import (ABSTAIN, IRREDUCIBLE, NONTRIVIAL, Certificate, FiniteAbelianGroup,
                             InconsistentQuery, RawQuery, SeifertQuery, SteinQuery, Step, SurgeryQuery,
                             boyer_nicas_dim, certify, certify_batch, cyclically_finite_surgery, explain,
                             reducible_classes, small_h1_cyclic_finite, tangent_dim, validate)
from su2cert.certify import _mirror_data
from su2cert.knots import builtin_table
from su2cert.seifert import POINCARE, SeifertData
from su2cert.slopes import Slope

from helpers import brute_force_reducibles

TABLE = builtin_table()
G = FiniteAbelianGroup


# groups and counts ------------------------------------------------------

def test_reducible_examples():
    assert reducible_classes(G()) == (1, 1)
    assert reducible_classes(G((5,))) == (3, 5)
    assert reducible_classes(G((2, 2))) == (4, 4)


@given(st.lists(st.integers(1, 12), min_size=1, max_size=3))
def test_from_cyclic_against_brute_force(orders):
    H = G.from_cyclic(*orders)
    assert H.order == math.prod(orders)
    # character counts only depend on the group, so the cyclic presentation must agree
    assert reducible_classes(H) == brute_force_reducibles(tuple(o for o in orders))


def test_group_validation():
    assert G.from_cyclic(2, 4).factors == (2, 4)
    assert G.from_cyclic(2, 3).factors == (6,)
    assert G.from_cyclic(1).factors == ()
    with pytest.raises(ValueError):
        G((4, 2))
    with pytest.raises(ValueError):
        G((1,))
    assert str(G((2, 4))) == "Z/2 + Z/4" and str(G()) == "0"


def test_boyer_nicas_examples():
    assert boyer_nicas_dim(5, {1: 0, 5: 0}) == 0
    assert boyer_nicas_dim(3, {1: 0, 3: 2}) == 2
    assert boyer_nicas_dim(4, {1: 0, 2: 0, 4: 1}) == 1
    with pytest.raises(ValueError):
        boyer_nicas_dim(4, {1: 0, 4: 1})
    with pytest.raises(ValueError):
        boyer_nicas_dim(1, {1: 0})
    with pytest.raises(ValueError):
        boyer_nicas_dim(3, {1: 0, 3: -2})
    with pytest.warns(UserWarning):
        with pytest.raises(ValueError):
            boyer_nicas_dim(3, {1: 2, 3: 0})


def test_boyer_nicas_constant_telescopes():
    for n in range(2, 201):
        ds = [d for d in range(1, n + 1) if n % d == 0]
        for c in (0, 2, 7):
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                assert boyer_nicas_dim(n, {d: c for d in ds}) == 0


def test_tangent_dim():
    assert tangent_dim(3, 0) == 0
    assert tangent_dim(1, 0) == 2
    assert tangent_dim(1, 2) == 4
    with pytest.raises(ValueError):
        tangent_dim(2, 0)
    with pytest.raises(ValueError):
        tangent_dim(1, -1)


def test_cyclically_finite_examples():
    d52 = TABLE["5_2"].alexander
    assert all(cyclically_finite_surgery(d52, p) for p in range(1, 101))
    tre = TABLE["3_1"].alexander
    assert not cyclically_finite_surgery(tre, 12)
    assert not cyclically_finite_surgery(tre, -24)
    assert cyclically_finite_surgery(tre, 3)
    with pytest.raises(ValueError):
        cyclically_finite_surgery(tre, 0)


def test_small_h1():
    assert small_h1_cyclic_finite(G((8,)))
    assert not small_h1_cyclic_finite(G((6,)))
    assert small_h1_cyclic_finite(G((2, 2)))
    assert small_h1_cyclic_finite(G((5,)))
    assert not small_h1_cyclic_finite(G((2, 4)))
    assert small_h1_cyclic_finite(G((49,)))


# surgery certificates ---------------------------------------------------

def _sl_nonnegative_knots():
    out = []
    for r in TABLE.records():
        sl, _ = _mirror_data(r)
        if r.nontrivial and sl is not None and sl >= 0:
            out.append(r)
    return out


def test_table_has_sl_nonnegative_knots():
    assert {"3_1m", "5_2m"} <= {r.name for r in _sl_nonnegative_knots()}


@pytest.mark.parametrize("knot", [r.name for r in _sl_nonnegative_knots()])
def test_positive_slopes_follow_alexander_test(knot):
    k = TABLE[knot]
    for p in range(1, 51):
        for q in (1, 2, 3, 5):
            if math.gcd(p, q) != 1:
                continue
            cert = certify(SurgeryQuery(k, Slope(p, q)))
            if cyclically_finite_surgery(k.alexander, p):
                assert cert.conclusion == IRREDUCIBLE, (p, q)
                assert [s.rule for s in cert.steps][-2] == "CF-ALEXANDER"
            elif cert.conclusion == ABSTAIN:
                assert cert.failing == "CF-ALEXANDER"
            else:
                assert "CF-SMALL-H1" in [s.rule for s in cert.steps]
            if cert.positive:
                assert validate(cert)[0]


def test_trefoil_multiples_of_twelve_abstain():
    k = TABLE["3_1m"]
    for p in range(1, 51):
        cert = certify(SurgeryQuery(k, Slope(p, 1)))
        if p % 12 == 0:
            assert cert.conclusion == ABSTAIN and cert.failing == "CF-ALEXANDER"
            assert "LSPACE-CLOSURE" in [s.rule for s in cert.steps]
        else:
            assert cert.conclusion == IRREDUCIBLE


def test_seven_thirds_on_five_two_mirror():
    cert = certify(SurgeryQuery(TABLE["5_2m"], Slope(7, 3)))
    assert cert.conclusion == IRREDUCIBLE
    rules = [s.rule for s in cert.steps]
    assert rules[0] == "ROTATION-SPECTRUM" and "CF-ALEXANDER" in rules and rules[-1] == "IRREDUCIBLE"


def test_surgery_abstentions():
    k = TABLE["5_2m"]
    assert certify(SurgeryQuery(k, Slope(0, 1))).failing == "SLOPE"
    assert certify(SurgeryQuery(k, Slope(1, 0))).failing == "SLOPE"
    assert certify(SurgeryQuery(TABLE["unknot"], Slope(5, 1))).conclusion == ABSTAIN
    cert = certify(SurgeryQuery(TABLE["5_2"], Slope(3, 1)))
    assert cert.conclusion == ABSTAIN and cert.failing == "ROTATION-SPECTRUM"
    assert certify(SurgeryQuery(TABLE["5_2m"], Slope(-3, 1))).failing == "POSITIVE-KNOT"
    assert "abstention" in cert.caveat


def test_inconsistent_supplied_facts():
    with pytest.raises(InconsistentQuery):
        certify(SurgeryQuery(TABLE["5_2m"], Slope(3, 1), lspace_at=[Fraction(1, 2)]))


# tampering --------------------------------------------------------------

def _positive():
    cert = certify(SurgeryQuery(TABLE["5_2m"], Slope(7, 3)))
    assert validate(cert) == (True, [])
    return cert


def test_validate_rejects_dropped_final_step():
    cert = _positive()
    cert.steps = cert.steps[:-1]
    assert not validate(cert)[0]


def test_validate_rejects_changed_inputs():
    cert = _positive()
    for i, s in enumerate(cert.steps):
        if s.rule == "CF-ALEXANDER":
            cert.steps[i] = replace(s, inputs=dict(s.inputs, alexander="t - 1 + t^-1", p=12))
    assert not validate(cert)[0]


def test_validate_rejects_evidence_for_another_order():
    # CF-ALEXANDER passes at p = 5 too, but that says nothing about |H_1| = 7
    cert = _positive()
    for i, s in enumerate(cert.steps):
        if s.rule == "CF-ALEXANDER":
            cert.steps[i] = replace(s, inputs=dict(s.inputs, p=5))
    assert cyclically_finite_surgery(TABLE["5_2m"].alexander, 5)
    assert not validate(cert)[0]


def test_validate_rejects_unknown_rule():
    cert = _positive()
    cert.steps.insert(0, Step("TRUST-ME", {}, "all good"))
    ok, problems = validate(cert)
    assert not ok and "unknown rule" in problems[0]


def test_validate_rejects_wrong_conclusion():
    bad = Certificate(IRREDUCIBLE, [Step("H1-CHARACTER", {"h1": 3}, "H_1(Y) != 0")])
    assert not validate(bad)[0]
    assert validate(replace(bad, conclusion=NONTRIVIAL))[0]


def test_validate_rejects_changed_closure_target():
    cert = _positive()
    for i, s in enumerate(cert.steps):
        if s.rule == "LSPACE-CLOSURE":
            cert.steps[i] = replace(s, inputs=dict(s.inputs, target="1/2", seed={"kind": "none"},
                                                   knot="unknot", genus=0, alexander="1"))
    assert not validate(cert)[0]


# other query kinds ------------------------------------------------------

def test_stein_queries():
    tre = certify(SteinQuery([(0, 1)], [[0]]))
    assert tre.conclusion == NONTRIVIAL and [s.rule for s in tre.steps] == ["STEIN-C1", "HS-RANK"]
    # -E8 plumbing of tb = -1 unknots
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    lk = [[0] * 8 for _ in range(8)]
    for i, j in edges:
        lk[i][j] = lk[j][i] = 1
    e8 = certify(SteinQuery([(-1, 0)] * 8, lk))
    assert e8.conclusion == NONTRIVIAL and e8.steps[0].rule == "EVEN-FORM"
    indef = certify(SteinQuery([(2, 1)], [[0]]))
    assert indef.steps[0].rule == "DONALDSON-PAIRING"
    qhs = certify(SteinQuery([(-2, 1)], [[0]]))
    assert qhs.conclusion == NONTRIVIAL and qhs.steps[0].rule == "H1-CHARACTER"
    assert certify(SteinQuery([], [])).conclusion == ABSTAIN
    for c in (tre, e8, indef, qhs):
        assert validate(c)[0]


def test_seifert_queries():
    assert certify(SeifertQuery(SeifertData.parse("M(-2; 1/2, 2/3, 9/11)"))).conclusion == NONTRIVIAL
    cert = certify(SeifertQuery(POINCARE))
    assert cert.conclusion == ABSTAIN and cert.failing == "LSPACE-CLASSIFICATION"
    cert = certify(SeifertQuery(SeifertData.parse("M(-2; 1/2, 2/3, 6/7)")))
    assert cert.conclusion == NONTRIVIAL and validate(cert)[0]
    assert certify(SeifertQuery(SeifertData.parse("M(-1; 1/2, 1/2)"))).steps[0].rule == "H1-CHARACTER"


def test_raw_queries():
    assert certify(RawQuery(1, rank_lower=3)).conclusion == NONTRIVIAL
    assert certify(RawQuery(1, rank_lower=1)).conclusion == ABSTAIN
    assert certify(RawQuery(3, rank_exact=5, invariant_factors=(3,))).conclusion == IRREDUCIBLE
    assert certify(RawQuery(6, rank_exact=8)).conclusion == NONTRIVIAL
    assert certify(RawQuery(6, rank_exact=8, cyclically_finite=True)).conclusion == IRREDUCIBLE
    for bad in (RawQuery(5, rank_exact=3), RawQuery(5, rank_exact=6), RawQuery(-1),
                RawQuery(4, invariant_factors=(3,)), RawQuery(2, rank_lower=-1)):
        with pytest.raises(InconsistentQuery):
            certify(bad)


def test_batch_keeps_order():
    qs = [SurgeryQuery(TABLE["5_2m"], Slope(p, 1)) for p in range(1, 9)]
    qs.insert(3, RawQuery(5, rank_exact=3))
    qs.append(SeifertQuery(POINCARE))
    out = certify_batch(qs, workers=4)
    assert isinstance(out[3], InconsistentQuery)
    assert [c.inputs.get("slope") for c in out[:3] + out[4:-1]] == [str(p) for p in range(1, 9)]
    assert out[-1].conclusion == ABSTAIN
    assert [c.to_record() for c in out if not isinstance(c, Exception)] == \
        [certify(q).to_record() for q in qs if not isinstance(q, RawQuery)]


def test_record_and_explain():
    cert = _positive()
    rec = cert.to_record()
    assert set(rec) >= {"conclusion", "chain", "inputs", "version"}
    assert rec["inputs"] == {"knot": "5_2m", "slope": "7/3"}
    lines = explain(cert)
    assert lines[0] == "conclusion: irreducible_rep" and lines[-1].startswith(f"  {len(cert.steps)}.")


def test_unknown_query_type():
    with pytest.raises(TypeError):
        certify(LaurentPoly.constant(1))
