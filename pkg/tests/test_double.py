import itertools

import numpy as np
import pytest

from nlie import catalog
from nlie.bialgebra import Cobracket, check_condition_i, dual_bracket
from nlie.double import (
    ManinTriple,
    MetricNLieAlgebra,
    Subspace,
    bialgebra_from_manin,
    build_double,
    check_manin_triple,
    check_metric,
    hyperbolic_form,
    theorem_equivalence,
)
from nlie.tensor import basis_vector, zeros

import oracles

A4 = catalog.algebra("A4")
DOUBLES = ["zero:sl2", "wedge-abelian", "heisenberg-dc", "zero:A4", "zero:heisenberg"]


def failing_parts(rep):
    return [k for k, v in rep.details.items() if hasattr(v, "verdict") and not v.verdict]


def metric_invariant(m):
    """([X, x], t) + (x, [X, t]) = 0 on every ordered basis tuple."""
    alg, B = m.algebra, m.form
    D = alg.dim
    E = [basis_vector(D, i) for i in range(D)]
    for X in itertools.product(range(D), repeat=alg.arity - 1):
        xs = [E[i] for i in X]
        for a, b in itertools.product(range(D), repeat=2):
            lhs = alg.bracket(*xs, E[a]).dot(B).dot(E[b]) + E[a].dot(B).dot(alg.bracket(*xs, E[b]))
            if lhs != 0:
                return False
    return True


def test_hyperbolic_form():
    B = hyperbolic_form(2)
    assert B.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]


@pytest.mark.parametrize("name", DOUBLES)
def test_double_is_manin_triple(name):
    cb = catalog.cobracket(name)
    D = build_double(cb)
    assert D.verified
    assert D.algebra.dim == 2 * cb.dim
    rep = check_manin_triple(D.triple())
    assert rep.verdict, failing_parts(rep)
    assert check_metric(D.metric).verdict


@pytest.mark.parametrize("name", ["zero:sl2", "heisenberg-dc"])
def test_double_against_oracles(name):
    D = build_double(catalog.cobracket(name))
    assert oracles.fji_holds(D.algebra)
    assert metric_invariant(D.metric)


@pytest.mark.parametrize("name", DOUBLES)
def test_double_restricts_to_both_brackets(name):
    cb = catalog.cobracket(name)
    d, n = cb.dim, cb.arity
    T = build_double(cb).algebra.tensor
    for idx in itertools.product(range(d), repeat=n):
        assert np.array_equal(T[idx][:d], cb.algebra.tensor[idx])
        assert not any(T[idx][d:])
        dual_idx = tuple(i + d for i in idx)
        assert np.array_equal(T[dual_idx][d:], dual_bracket(cb).tensor[idx])
        assert not any(T[dual_idx][:d])


@pytest.mark.parametrize("name", DOUBLES)
def test_round_trip(name):
    cb = catalog.cobracket(name)
    back = bialgebra_from_manin(build_double(cb).triple())
    assert back == cb


def test_double_dimensions():
    assert build_double(catalog.cobracket("zero:sl2")).algebra.dim == 6
    assert build_double(catalog.cobracket("wedge-abelian")).algebra.dim == 8


def test_non_isotropic_g1():
    t = build_double(catalog.cobracket("wedge-abelian")).triple()
    U = t.g1.basis.copy()
    U[0, 4] = 1  # e1 + f1
    rep = check_manin_triple(ManinTriple(t.metric, Subspace(8, U), t.g2))
    assert not rep.verdict
    assert "isotropy" in failing_parts(rep)
    assert rep.details["isotropy"].counterexample.where == {"g1": (1, 1)}
    with pytest.raises(ValueError):
        bialgebra_from_manin(ManinTriple(t.metric, Subspace(8, U), t.g2))


def test_rescaled_g2_gives_same_cobracket():
    cb = catalog.cobracket("wedge-abelian")
    t = build_double(cb).triple()
    t2 = ManinTriple(t.metric, t.g1, Subspace(8, 2 * t.g2.basis))
    assert check_manin_triple(t2).verdict
    assert bialgebra_from_manin(t2) == cb


def test_direct_sum_failure():
    t = build_double(catalog.cobracket("zero:sl2")).triple()
    rep = check_manin_triple(ManinTriple(t.metric, t.g1, t.g1))
    assert "direct-sum" in failing_parts(rep)


def test_identity_form_on_A4_is_not_invariant():
    m = MetricNLieAlgebra(A4, np.eye(4, dtype=int).astype(object))
    rep = check_metric(m)
    assert not rep.verdict
    assert rep.counterexample.where == {"x": (1, 2, 3), "t": (4,)}
    assert not metric_invariant(m)


def test_metric_rejects_degenerate_form():
    with pytest.raises(ValueError):
        MetricNLieAlgebra(A4, zeros((4, 4)))


def test_inv_conditions_void_for_n2():
    rep = check_manin_triple(build_double(catalog.cobracket("zero:sl2")).triple())
    assert rep.details["inv-1"].checks_run == 0
    assert rep.details["inv-3"].details["note"]


# -- equivalence theorem -----------------------------------------------------

@pytest.mark.parametrize("name", ["wedge-abelian", "heisenberg-dc", "zero:sl2", "zero:A4"])
def test_theorem_holds(name):
    rep = theorem_equivalence(catalog.cobracket(name))
    assert rep.verdict
    assert rep.details["forward"] and rep.details["backward"]


@pytest.mark.parametrize("name", ["sl2-standard", "A4-wedge-e1"])
def test_converse_counterexamples(name):
    cb = catalog.cobracket(name)
    rep = theorem_equivalence(cb)
    assert not rep.verdict
    assert rep.details["manin-triple"].verdict
    assert not rep.details["double-construction"].verdict


def test_theorem_vacuous_without_premise():
    ab = catalog.algebra("abelian:n3:d4")
    cb = Cobracket.from_wedges(ab, {0: {(0, 1, 2): 1}, 1: {(1, 2, 3): 1}, 2: {(0, 2, 3): 1}, 3: {(0, 1, 3): 1}})
    assert not check_condition_i(cb).verdict
    rep = theorem_equivalence(cb)
    assert rep.verdict
    assert "vacuous" in rep.details["note"]
