import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlie.tensor import (
    act_on_slot,
    antisymmetrize,
    as_array,
    basis_vector,
    canonical_tuples,
    fmt,
    is_zero,
    pair,
    perm_sign,
    scalar,
    sort_sign,
    wedge,
    zeros,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def e(i, d=3):
    return basis_vector(d, i)


def inversion_sign(p):
    # independent oracle: parity of the inversion count
    inv = sum(1 for a, b in itertools.combinations(range(len(p)), 2) if p[a] > p[b])
    return -1 if inv % 2 else 1


class TestScalars:
    def test_ints_and_fractions_normalize(self):
        assert scalar(Fraction(4, 2)) == 2 and type(scalar(Fraction(4, 2))) is int
        assert scalar("3/6") == Fraction(1, 2)
        assert scalar(np.int64(5)) == 5

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            scalar(0.5)
        with pytest.raises(TypeError):
            as_array([1, 2.0])

    def test_fmt(self):
        assert fmt(Fraction(-6, 4)) == "-3/2"
        assert fmt(7) == "7"


class TestPermutations:
    def test_examples(self):
        assert perm_sign((0, 1, 2)) == 1
        assert perm_sign((1, 0)) == -1
        assert perm_sign((1, 2, 0)) == 1

    @given(st.permutations(list(range(6))))
    def test_sign_matches_inversions(self, p):
        assert perm_sign(p) == inversion_sign(p)

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            perm_sign((0, 0, 1))

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=5))
    def test_sort_sign(self, seq):
        s, srt = sort_sign(seq)
        assert srt == tuple(sorted(seq))
        if len(set(seq)) < len(seq):
            assert s == 0
        else:
            assert s == inversion_sign(seq)

    def test_canonical_tuples(self):
        assert canonical_tuples(4, 2) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        assert canonical_tuples(3, 0) == [()]


class TestWedge:
    def test_examples(self):
        assert np.all(wedge(e(0)) == e(0))
        assert is_zero(wedge(e(0), e(0)))
        expected = np.multiply.outer(e(0), e(1)) - np.multiply.outer(e(1), e(0))
        assert np.all(wedge(e(0), e(1)) == expected)

    @given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=2, max_size=3))
    def test_antisymmetric_in_every_slot_pair(self, vecs):
        w = wedge(*vecs)
        k = len(vecs)
        for a, b in itertools.combinations(range(k), 2):
            assert np.all(np.swapaxes(w, a, b) == -w)

    @given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3), rationals)
    def test_multilinear(self, u, v, c):
        u, v = as_array(u), as_array(v)
        assert np.all(wedge(c * u + v, e(2)) == c * wedge(u, e(2)) + wedge(v, e(2)))

    def test_mismatched_dimensions(self):
        with pytest.raises(ValueError):
            wedge(e(0, 2), e(0, 3))


class TestPairing:
    def test_examples(self):
        t = np.multiply.outer(e(0), e(1))
        assert pair(t, (e(0), e(1))) == 1
        assert pair(t, (e(1), e(0))) == 0
        assert pair(wedge(e(0), e(1)), (e(0), e(1))) == 1

    @given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
    def test_pair_of_outer_product_factorizes(self, u, v):
        t = np.multiply.outer(as_array(u), as_array(v))
        assert pair(t, (e(0), e(2))) == scalar(u[0] * v[2])

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            pair(zeros((3, 3)), (e(0),))


class TestAntisymmetrize:
    def test_examples(self):
        a = np.multiply.outer(e(0), e(1)) - np.multiply.outer(e(1), e(0))
        assert np.all(antisymmetrize(a, (0, 1)) == a)
        assert is_zero(antisymmetrize(np.multiply.outer(e(0), e(0)), (0, 1)))
        half = Fraction(1, 2)
        assert np.all(antisymmetrize(np.multiply.outer(e(0), e(1)), (0, 1)) == half * a)

    @given(st.lists(st.integers(-3, 3), min_size=27, max_size=27))
    def test_idempotent_and_wedge_relation(self, flat):
        t = as_array(flat).reshape(3, 3, 3)
        once = antisymmetrize(t, (0, 1, 2))
        assert np.all(antisymmetrize(once, (0, 1, 2)) == once)
        # on a decomposable tensor the projector is wedge / k!
        u, v, w = e(0), as_array(flat[:3]), as_array(flat[3:6])
        outer = np.multiply.outer(np.multiply.outer(u, v), w)
        assert np.all(6 * antisymmetrize(outer, (0, 1, 2)) == wedge(u, v, w))

    def test_bad_slots(self):
        with pytest.raises(ValueError):
            antisymmetrize(zeros((2, 2)), (0, 0))


def test_act_on_slot_middle():
    M = as_array([[0, 0, 0], [1, 0, 0], [0, 0, 0]])  # e1 -> e2
    t = np.multiply.outer(np.multiply.outer(e(2), e(0)), e(0))
    out = act_on_slot(M, t, 1)
    assert np.all(out == np.multiply.outer(np.multiply.outer(e(2), e(1)), e(0)))
