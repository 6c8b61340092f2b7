from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su2cert.algebra import (AlgebraError, GaussianRational, LaurentPoly, cyclotomic, divisors,
                             euler_phi, factorize, is_prime_power, mobius, poly_gcd, pth_root_zero,
                             root_of_unity_zero)

from helpers import oracle_root_of_unity

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)
laurent = st.dictionaries(st.integers(-4, 4), fractions, max_size=6).map(lambda d: LaurentPoly(d, "t"))
nonzero_points = fractions.filter(lambda x: x != 0)


def P(text):
    return LaurentPoly.parse(text, "t")


# spec examples --------------------------------------------------------

def test_eval_examples():
    assert P("2t - 3 + 2t^-1").eval(1) == 1
    assert P("t - 1 + t^-1").eval(-1) == -3
    assert LaurentPoly.constant(1).eval(Fraction(17, 3)) == 1


def test_eval_at_zero_rejected_for_laurent():
    with pytest.raises(ZeroDivisionError):
        P("t^-1").eval(0)
    assert P("t^2 + 1").eval(0) == 1


def test_second_derivative_examples():
    assert P("t - 1 + t^-1").second_derivative_at_one() == 2
    assert P("t^2 - 1 + t^-2").second_derivative_at_one() == 8
    assert LaurentPoly.constant(1).second_derivative_at_one() == 0


def test_substitute_power_examples():
    assert P("t - 1 + t^-1").substitute_power(2) == P("t^2 - 1 + t^-2")
    assert P("2t - 3 + 2t^-1").substitute_power(2) == P("2t^2 - 3 + 2t^-2")
    assert LaurentPoly.constant(1).substitute_power(5) == LaurentPoly.constant(1)
    with pytest.raises(AlgebraError):
        P("t").substitute_power(0)


def test_root_of_unity_examples():
    assert root_of_unity_zero(P("t^2 - 1 + t^-2")) == 12
    assert P("t^4 - t^2 + 1") == cyclotomic(12)
    assert root_of_unity_zero(P("2t^4 - 3t^2 + 2")) is None
    assert root_of_unity_zero(P("t - 1")) == 1
    with pytest.raises(AlgebraError):
        root_of_unity_zero(LaurentPoly({}))


def test_number_theory_examples():
    assert (mobius(12), euler_phi(12)) == (0, 4)
    assert (mobius(1), euler_phi(1)) == (1, 1)
    assert poly_gcd(P("t^4 - t^2 + 1"), P("t^3 - 1")) == LaurentPoly.constant(1)
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [n for n in range(1, 30) if is_prime_power(n)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


def test_cyclotomic_small():
    assert cyclotomic(1) == P("t - 1")
    assert cyclotomic(2) == P("t + 1")
    assert cyclotomic(6) == P("t^2 - t + 1")
    assert cyclotomic(9) == P("t^6 + t^3 + 1")


def test_gaussian_rationals():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1)
    z = GaussianRational(Fraction(1, 2), 3)
    assert z * z.conjugate() == GaussianRational(z.norm())
    assert (z / z) == GaussianRational(1)
    with pytest.raises(ZeroDivisionError):
        z / GaussianRational(0)
    assert P("t^2 + 4").eval(GaussianRational(0, 2)) == 0


def test_parse_round_trip():
    for text in ["3z^5 + 7z^7 + 3z^9", "1/2t^3 - t^-2", "0", "-t"]:
        var = "z" if "z" in text else "t"
        p = LaurentPoly.parse(text, var)
        assert LaurentPoly.parse(str(p), var) == p


def test_triples_round_trip():
    p = P("1/2t^3 - t^-2 + 5")
    assert LaurentPoly.from_triples(p.to_triples()) == p


# properties -------------------------------------------------------------

@given(laurent, laurent, nonzero_points)
def test_eval_is_multiplicative(p, q, x):
    assert (p * q).eval(x) == p.eval(x) * q.eval(x)
    assert (p + q).eval(x) == p.eval(x) + q.eval(x)


@given(laurent, st.integers(1, 4), nonzero_points)
def test_substitute_then_eval(p, k, x):
    assert p.substitute_power(k).eval(x) == p.eval(x ** k)


@given(laurent, st.integers(-3, 3))
def test_taylor_shift_agrees_with_eval(p, a):
    p = p.cleared()
    shifted = p.taylor_shift(a)
    for u in (-2, 0, Fraction(1, 3), 5):
        assert shifted.eval(u) == p.eval(u + a)


@given(laurent.filter(bool), laurent.filter(bool))
def test_divmod_identity(a, b):
    a, b = a.cleared(), b.cleared()
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(laurent.filter(bool), laurent.filter(bool))
def test_gcd_divides_both(a, b):
    a, b = a.cleared(), b.cleared()
    g = poly_gcd(a, b)
    assert g.divides(a) and g.divides(b)
    assert g.coeff(g.degree) == 1


@settings(max_examples=60)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=9).filter(lambda c: any(c[1:])),
       st.integers(1, 60))
def test_pth_root_zero_matches_cyclotomic_factors(coeffs, p):
    poly = LaurentPoly(dict(enumerate(coeffs)), "t")
    c = poly.cleared()
    expected = any(cyclotomic(d).divides(c) for d in divisors(p))
    assert pth_root_zero(poly, p) == expected


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=13).filter(lambda c: any(c[1:])))
def test_root_of_unity_zero_matches_gcd_oracle(coeffs):
    poly = LaurentPoly(dict(enumerate(coeffs)), "t")
    assert root_of_unity_zero(poly) == oracle_root_of_unity(coeffs)


def test_divisor_sums():
    for n in range(1, 10_001):
        ds = divisors(n)
        assert sum(euler_phi(d) for d in ds) == n
        assert sum(mobius(d) for d in ds) == (1 if n == 1 else 0)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_alexander_square_avoids_cube_and_fourth_roots(tail):
    # symmetric Delta with Delta(1) = 1: no zero of Delta(t^2) is a 3rd or 4th root of unity
    c = {k: v for k, v in enumerate(tail, start=1)}
    c0 = 1 - 2 * sum(tail)
    delta = LaurentPoly({**c, **{-k: v for k, v in c.items()}, 0: c0}, "t")
    assert delta.eval(1) == 1
    sq = delta.substitute_power(2)
    assert not pth_root_zero(sq, 3)
    assert not pth_root_zero(sq, 4)
