import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from su2cert.operators import SquareMatrix
from su2cert.stein import (LegendrianComponent, SteinError, SteinHandlebodyModel, b_matrix, block_sum,
                           definiteness, determinant, enumerate_stabilizations, gompf_chern, h1_order,
                           inertia, is_diagonalizable, is_even, positive_knot_rotations,
                           rank_lower_bound_from_stein, rotation_spectrum, short_vectors, stabilize,
                           summarize_form, two_chain_model)

E8 = [[2, -1, 0, 0, 0, 0, 0, 0],
      [-1, 2, -1, 0, 0, 0, 0, 0],
      [0, -1, 2, -1, 0, 0, 0, -1],
      [0, 0, -1, 2, -1, 0, 0, 0],
      [0, 0, 0, -1, 2, -1, 0, 0],
      [0, 0, 0, 0, -1, 2, -1, 0],
      [0, 0, 0, 0, 0, -1, 2, 0],
      [0, 0, -1, 0, 0, 0, 0, 2]]


def _perm_det(M):
    """Leibniz formula."""
    n = len(M)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = -1 if inv % 2 else 1
        for i in range(n):
            term *= M[i][p[i]]
            if not term:
                break
        total += term
    return total


def _sign_changes(cs):
    cs = [c for c in cs if c]
    return sum(1 for a, b in zip(cs, cs[1:]) if a * b < 0)


def _eigen_signs(M):
    """Inertia from sign changes of the characteristic polynomial; Descartes is exact when all roots are real."""
    n = len(M)
    chi = SquareMatrix(M).charpoly()
    coeffs = [chi.coeff(e) for e in range(n + 1)]
    zero = next(i for i, c in enumerate(coeffs) if c)
    rest = coeffs[zero:]
    return _sign_changes(rest), _sign_changes([c * (-1) ** i for i, c in enumerate(rest)]), zero


# Legendrian pieces -------------------------------------------------------

def test_stabilize_examples():
    assert stabilize(LegendrianComponent(1, 0), 1) == LegendrianComponent(0, 1)
    c = stabilize(stabilize(LegendrianComponent(1, 0), 1), -1)
    assert (c.tb, c.rot) == (-1, 0)
    with pytest.raises(SteinError):
        stabilize(LegendrianComponent(1, 0), 2)
    with pytest.raises(SteinError):
        LegendrianComponent(1, 1)


def test_reversal_negates_rotation():
    c = LegendrianComponent(-2, 3)
    assert c.reverse().rot == -3 and c.reverse().reverse() == c
    assert c.framing == -3


@pytest.mark.parametrize("sl", [1, 3, 5])
def test_stabilized_endpoint(sl):
    # from tb - rot = sl, n + tb - 1 stabilizations with k positive land at (-n+1, -sl-n+1+2k)
    for rot in (0, -1, -2):
        tb = sl + rot
        for n in range(max(1 - tb, 0), 8):
            steps = n + tb - 1
            for k in range(steps + 1):
                c = LegendrianComponent(tb, rot)
                for _ in range(k):
                    c = stabilize(c, 1)
                for _ in range(steps - k):
                    c = stabilize(c, -1)
                assert (c.tb, c.rot) == (-n + 1, rot - steps + 2 * k)


def test_rotation_spectrum_example():
    spec = rotation_spectrum(1, 0, 3)
    assert spec.rotations == frozenset({-3, -1, 1, 3})
    assert spec.count == 4 and spec.guaranteed == 4
    assert rotation_spectrum(1, 0, 40).count == 41


def test_rotation_spectrum_against_enumeration():
    for sl in (1, 3, 5):
        for rot in range(0, -4, -1):
            tb = sl + rot
            for n in range(max(1 - tb, 0), 13):
                spec = rotation_spectrum(tb, rot, n)
                direct = enumerate_stabilizations(tb, rot, tb - (1 - n))
                assert spec.rotations == frozenset(direct | {-r for r in direct})
                if spec.overlap:
                    assert spec.count >= sl + n == spec.guaranteed


def test_rotation_spectrum_errors():
    with pytest.raises(SteinError):
        rotation_spectrum(-2, 1, 3)
    with pytest.raises(SteinError):
        rotation_spectrum(1, 2, 3)
    with pytest.raises(SteinError):
        rotation_spectrum(-3, -4, 1)


@pytest.mark.parametrize("g", range(1, 8))
def test_positive_knot_rotations(g):
    spec = positive_knot_rotations(g)
    assert spec.tb == g and spec.count == g
    assert spec.rotations == frozenset(enumerate_stabilizations(2 * g - 1, 0, g - 1))


# Chern vectors -----------------------------------------------------------

def test_gompf_examples():
    zero = SteinHandlebodyModel(((-1, 0), (-3, 0)), ((0, 1), (1, 0)))
    assert gompf_chern(zero) == (0, 0)
    tre = [SteinHandlebodyModel(((0, r),), ((0,),)) for r in (1, -1)]
    assert [gompf_chern(m) for m in tre] == [(1,), (-1,)]
    assert rank_lower_bound_from_stein([gompf_chern(m) for m in tre]) == 2
    assert rank_lower_bound_from_stein([(3, 1)]) == 1
    assert rank_lower_bound_from_stein([(1,), (-1,)], torsion_free=False) == 1


def test_two_chain_model_is_nonzero():
    m = two_chain_model(5, 7, 1, -1)
    v = gompf_chern(m)
    assert v[0] == 1 and v[5] == -1 and not any(v[1:5]) and not any(v[6:])
    assert m.intersection_form() == block_sum(b_matrix(5), b_matrix(7))
    assert gompf_chern(m.conjugate()) == tuple(-x for x in v)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=6),
       st.permutations(range(3)))
def test_distinct_count_ignores_component_order(vectors, perm):
    permuted = [[v[i] for i in perm] for v in vectors]
    assert rank_lower_bound_from_stein(vectors) == rank_lower_bound_from_stein(permuted)


def test_model_validation():
    with pytest.raises(SteinError):
        SteinHandlebodyModel(((0, 1), (0, 1)), ((0, 1), (2, 0)))
    with pytest.raises(SteinError):
        SteinHandlebodyModel(((0, 1),), ((0, 1), (1, 0)))


# forms -------------------------------------------------------------------

def test_form_examples():
    assert definiteness(b_matrix(5)) == "negative_definite" and h1_order(b_matrix(5)) == 1
    assert definiteness([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == "positive_definite"
    assert definiteness([[1, 0], [0, -1]]) == "indefinite"
    assert definiteness([[1, 1], [1, 1]]) == "degenerate"
    assert definiteness([[0, 1], [1, 0]]) == "indefinite"
    with pytest.raises(SteinError):
        h1_order([[1, 2], [3, 1]])


def test_b_matrices_up_to_fifty():
    for k in range(1, 51):
        B = b_matrix(k)
        assert definiteness(B) == "negative_definite"
        assert h1_order(B) == 1


def test_e8():
    assert determinant(E8) == 1
    assert definiteness(E8) == "positive_definite" and is_even(E8)
    assert not is_diagonalizable(E8)
    assert len(short_vectors(E8, 2)) == 240
    odd = block_sum(E8, [[1]])
    assert not is_diagonalizable(odd)
    assert is_diagonalizable(block_sum(E8, [[1]], [[-1]]))
    assert is_diagonalizable([[1, 0], [0, 1]])
    assert is_diagonalizable(b_matrix(6))
    s = summarize_form(E8)
    assert (s.b2, s.det, s.even, s.diagonalizable) == (8, 1, True, False)


def test_diagonalizable_needs_unimodular():
    with pytest.raises(SteinError):
        is_diagonalizable([[2]])


sym = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.integers(-3, 3), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2)
    .map(lambda xs: _sym_from(n, xs)))


def _sym_from(n, xs):
    M = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = next(it)
    return M


@given(sym)
def test_determinant_matches_leibniz(M):
    assert determinant(M) == _perm_det(M)


@given(sym)
def test_inertia_matches_descartes(M):
    # symmetric matrices are real-rooted, so sign changes count roots exactly
    pos, neg, zero = inertia(M)
    assert (pos, neg, zero) == _eigen_signs(M)


@given(sym)
def test_short_vectors_bruteforce(M):
    if definiteness(M) != "positive_definite":
        return
    n = len(M)
    got = set(short_vectors(M, 3))
    rng = range(-3, 4)
    want = set()

    def rec(prefix):
        if len(prefix) == n:
            v = tuple(prefix)
            if any(v) and sum(M[i][j] * v[i] * v[j] for i in range(n) for j in range(n)) <= 3:
                want.add(v)
            return
        for x in rng:
            rec(prefix + [x])

    if n <= 4:
        rec([])
        assert got == want


def test_random_unimodular_conjugates_keep_class():
    rng = random.Random(11)
    for _ in range(30):
        base = block_sum(*[[[rng.choice([1, -1])]] for _ in range(rng.randint(1, 4))])
        n = len(base)
        P = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(2 * n):
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            if i != j:
                c = rng.choice([-1, 1])
                P[i] = [a + c * b for a, b in zip(P[i], P[j])]
        PT = [list(r) for r in zip(*P)]
        M = [[sum(PT[i][k] * base[k][l] * P[l][j] for k in range(n) for l in range(n))
              for j in range(n)] for i in range(n)]
        assert abs(determinant(M)) == 1
        assert is_diagonalizable(M)
        assert inertia(M) == inertia(base)


def test_fraction_entries_rejected_by_shape():
    with pytest.raises(SteinError):
        definiteness([[Fraction(1), 2], [3, 1]])
