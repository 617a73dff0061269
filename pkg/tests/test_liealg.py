import random

import pytest

import corpus
from gcx.errors import InvalidInput, NotDegenerateInput, NotJacobi
from gcx.liealg import (
    LieAlgebraSC,
    change_basis,
    classify_degenerate,
    degeneracy,
    degeneracy_field_compare,
    jacobi_sc,
    realify,
)
from gcx.poly import GaussRat


def test_so3_obstruction():
    res = degeneracy(LieAlgebraSC.so3())
    assert not res
    assert res.to_dict()["obstructions"] == {"e1^e2^e3": "e1^2 + e2^2 + e3^2"}


def test_heisenberg_obstruction():
    res = degeneracy(LieAlgebraSC.heisenberg())
    assert res.to_dict()["obstructions"] == {"e1^e2^e3": "e3^2"}
    with pytest.raises(NotDegenerateInput):
        classify_degenerate(LieAlgebraSC.heisenberg())


@pytest.mark.parametrize("n", range(2, 7))
def test_model_classification_recovers_basis(n):
    g = change_basis(LieAlgebraSC.model(n), corpus.rand_invertible(random.Random(n), n))
    cls = classify_degenerate(g)
    assert cls.label() == f"model({n})"
    *es, f = cls.basis
    for e in es:
        assert g.bracket(f, e) == e


def test_change_basis_roundtrip():
    rng = random.Random(3)
    g = LieAlgebraSC.so3()
    P = corpus.rand_invertible(rng, 3)
    from gcx import linalg

    back = change_basis(change_basis(g, P), linalg.inverse(P))
    assert back == g
    assert jacobi_sc(change_basis(g, P))


def test_jacobi_failure_and_validation():
    bad = LieAlgebraSC.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {2: 1}, (0, 2): {0: 1}})
    assert not jacobi_sc(bad)
    with pytest.raises(NotJacobi):
        degeneracy(bad)
    with pytest.raises(InvalidInput):
        LieAlgebraSC(2, {(0, 1): [GaussRat(0, 1), 0]}, "real")


def test_realification_of_complex_model():
    cmp = degeneracy_field_compare(LieAlgebraSC.model(2))
    assert cmp.complex_degenerate and not cmp.realification_degenerate
    assert cmp.pattern == "complex only"
    assert realify(LieAlgebraSC.model(2)).n == 4


def test_real_and_complex_agree_on_corpus():
    rng = random.Random(11)
    for _ in range(20):
        g, label = corpus.lie_zoo(rng, 5, "real")
        cmp = degeneracy_field_compare(g)
        assert cmp.pattern == "equivalent"
        assert cmp.real_degenerate == (label != "nondegenerate")


def test_scaled_model_is_still_model():
    g = LieAlgebraSC.model(3).scaled(GaussRat(2, 1))
    assert classify_degenerate(g).label() == "model(3)"
