import random

import pytest
from hypothesis import given, settings, strategies as st

import corpus
from gcx.errors import NotClosed, RankDrop, ZeroSpinorAtPoint
from gcx.exterior import Form, PolyVector, ext_d
from gcx.gca import (
    DiracBasis,
    GenSection,
    annihilator,
    b_transform,
    chevalley,
    clifford_act,
    courant_bracket,
    decomposition_condition,
    image_linear,
    integrability_witness,
    involutivity_check,
    nondegenerate_at,
    pairing,
    proportional_at,
    pure_spinor,
    related_by_b_field,
    standard_structure,
    structure_convert,
    type_at,
)
from gcx.poly import I, ONE, ZERO, Chart, GaussRat, Poly

seeds = st.integers(min_value=0, max_value=10**6)
R3 = Chart(("x", "y", "t"))
C1 = Chart((), ("z",))


def test_annihilator_of_dz():
    L, pure = annihilator(Form.gen(C1, "z"), {"z": 0})
    assert pure
    # span{d/dzbar, dz}: frame is (d/dz, d/dzbar, dz, dzbar)
    expected = DiracBasis(((ZERO, ONE, ZERO, ZERO), (ZERO, ZERO, ONE, ZERO)), 2)
    assert L.same_space(expected)


def test_chevalley_of_dz():
    dz = Form.gen(C1, "z")
    c = chevalley(dz, dz.conjugate())
    # dz ^ transpose(dzbar) = dz ^ dzbar = -2i dx ^ dy, printed on the (z, zbar) frame
    assert c == Form.blade(C1, ("z", "zbar"))
    assert nondegenerate_at(dz, {"z": 1})


def test_zero_spinor_raises():
    ch = Chart(("x",))
    with pytest.raises(ZeroSpinorAtPoint):
        annihilator(Form.scalar(Poly.gen(ch, "x")), {"x": 0})


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_b_transform_intertwines_clifford_action(seed):
    rng = random.Random(seed)
    u = corpus.rand_section(rng, R3, 1, 2)
    rho = corpus.rand_graded(rng, Form, R3, range(4), 3, 1, 2)
    B = corpus.rand_graded(rng, Form, R3, [2], 2, 1, 2)
    lhs = b_transform(B, clifford_act(u, rho))
    rhs = clifford_act(b_transform(B, u), b_transform(B, rho))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_b_transform_is_orthogonal(seed):
    rng = random.Random(seed)
    u, v = corpus.rand_section(rng, R3), corpus.rand_section(rng, R3)
    B = corpus.rand_graded(rng, Form, R3, [2], 2, 1, 2)
    assert pairing(b_transform(B, u), b_transform(B, v)) == pairing(u, v)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_closed_b_is_courant_symmetry(seed):
    rng = random.Random(seed)
    u, v = corpus.rand_section(rng, R3), corpus.rand_section(rng, R3)
    beta = corpus.rand_graded(rng, Form, R3, [1], 2, 2, 2)
    B = ext_d(beta)
    lhs = b_transform(B, courant_bracket(u, v))
    rhs = courant_bracket(b_transform(B, u), b_transform(B, v))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_courant_anchor_and_leibniz(seed):
    rng = random.Random(seed)
    u, v = corpus.rand_section(rng, R3), corpus.rand_section(rng, R3)
    f = corpus.rand_poly(rng, R3, 2, 2)
    # [u, f v] = f [u, v] + (X f) v
    fv = GenSection(v.X.scale(f), v.xi.scale(f))
    lhs = courant_bracket(u, fv)
    br = courant_bracket(u, v)
    Xf = u.X.apply(f)
    rhs = GenSection(br.X.scale(f) + v.X.scale(Xf), br.xi.scale(f) + v.xi.scale(Xf))
    assert lhs == rhs
    # symmetric part is exact: [u,v] + [v,u] = d <u,v> * 2
    sym = courant_bracket(u, v) + courant_bracket(v, u)
    assert sym.X.is_zero()
    assert sym.xi == ext_d(Form.scalar(pairing(u, v) * 2))


def test_courant_rejects_open_h():
    ch = Chart(("w1", "w2", "w3", "w4"))
    H2 = Form.blade(ch, ("w1", "w2", "w3"), Poly.gen(ch, "w4"))
    u = GenSection.zero(ch)
    with pytest.raises(NotClosed):
        courant_bracket(u, u, H2)


def test_courant_example_minus_dz():
    # L_X eta with X = d/dz, eta = -z dz
    ch = Chart((), ("z",))
    X = PolyVector.gen(ch, "z")
    eta = Form.gen(ch, "z", Poly.gen(ch, "z") * -1)
    res = courant_bracket(GenSection(X, Form.zero(ch)), GenSection(PolyVector.zero(ch), eta))
    assert res.xi == Form.gen(ch, "z", Poly.const(ch, -1))


def _spinor_cases():
    r4 = Chart(("x1", "x2", "x3", "x4"))
    w = Form.blade(r4, ("x1", "x2")) + Form.blade(r4, ("x3", "x4"))
    c2 = Chart((), ("z1", "z2"))
    yield "symplectic", r4, pure_spinor(Form.zero(r4), w, Form.scalar(Poly.one(r4))), w, Form.scalar(Poly.one(r4))
    Om = Form.blade(c2, ("z1", "z2"))
    yield "complex", c2, Om, Form.zero(c2), Om
    mixed = Chart(("x", "y"), ("z",))
    wm = Form.blade(mixed, ("x", "y"))
    Omm = Form.gen(mixed, "z")
    yield "mixed", mixed, pure_spinor(Form.zero(mixed), wm, Omm), wm, Omm


@pytest.mark.parametrize("label,chart,rho,omega,Omega", list(_spinor_cases()))
def test_chevalley_vs_decomposition(label, chart, rho, omega, Omega):
    rng = random.Random(len(label))
    for _ in range(5):
        p = {c: GaussRat(rng.randint(-4, 4), rng.randint(-4, 4) if chart.is_holo(chart.index(c)) else 0)
             for c in chart.coords}
        assert nondegenerate_at(rho, p) == decomposition_condition(omega, Omega, p)
        L, pure = annihilator(rho, p)
        assert pure and L.is_lagrangian()
        assert L.intersection_dim_with_conjugate() == 0


def test_type_jumps_by_two():
    c2 = Chart((), ("z1", "z2"))
    sig = PolyVector.blade(c2, ("z1", "z2"), Poly.gen(c2, "z1"))
    J, line = standard_structure("holo_poisson", c2, sigma=sig)
    assert type_at(line, {"z1": 1, "z2": 0}) == 0
    assert type_at(line, {"z1": 0, "z2": 5}) == 2
    assert type_at(J, {"z1": 0, "z2": 5}) == 2
    assert type_at(J, {"z1": GaussRat(1, 1), "z2": 0}) == 0


def test_j_roundtrip_and_poisson_block():
    r2 = Chart(("x", "y"))
    J, line = standard_structure("symplectic", r2, omega=Form.blade(r2, ("x", "y")))
    L = structure_convert("dirac_from_j", J, {"x": 0, "y": 0})
    J2 = structure_convert("j_from_dirac", L)
    assert J2.at({"x": 0, "y": 0}) == J.at({"x": 0, "y": 0})
    assert structure_convert("poisson_from_j", J, {"x": 0, "y": 0}) == PolyVector.blade(r2, ("x", "y"))


def test_involutivity_and_witness():
    c1 = Chart(("x", "y", "u", "v"))
    x = Poly.gen(c1, "x")
    good = pure_spinor(Form.zero(c1), Form.blade(c1, ("x", "y")) + Form.blade(c1, ("u", "v")),
                       Form.scalar(Poly.one(c1)))
    ok, wit = involutivity_check(good, None, [{"x": 1, "y": 2, "u": 0, "v": 3}])
    assert ok and wit is None
    # pure and nondegenerate but d rho is not a Clifford image of rho
    c2 = Chart(("x", "y", "z", "u"))
    x2 = Poly.gen(c2, "x")
    bad = Form.scalar(Poly.one(c2)) + Form.blade(c2, ("x", "u")).scale(I) \
        + Form.blade(c2, ("y", "z"), x2).scale(I) - Form.blade(c2, ("x", "y", "z", "u"), x2)
    p = {"x": 1, "y": 0, "z": 0, "u": 0}
    assert annihilator(bad, p)[1] and nondegenerate_at(bad, p)
    ok, wit = involutivity_check(bad, None, [p])
    assert not ok and wit["d_H_rho"] == "i*dx*dy*dz"
    # d rho = u . rho at a point for an H-twisted closed example
    H = Form.blade(c1, ("x", "y", "u"))
    rho = Form.scalar(Poly.one(c1))
    sec = integrability_witness(rho, H, {"x": 0, "y": 0, "u": 0, "v": 0})
    assert sec is None  # H ^ 1 is a 3-form, not reachable from degree 0 and 1


def test_b_field_relation():
    r2 = Chart(("x", "y"))
    one = Form.scalar(Poly.one(r2))
    B = Form.blade(r2, ("x", "y"), Poly.const(r2, 3))
    moved = b_transform(B, one)
    assert related_by_b_field(moved, one, B, [{"x": 0, "y": 0}, {"x": 1, "y": -2}])
    assert proportional_at(moved.scale(GaussRat(2, 1)), moved, {"x": 0, "y": 0})


def _frame(vectors):
    n = len(vectors[0]) // 2
    return DiracBasis(tuple(tuple(GaussRat.coerce(c) for c in v) for v in vectors), n)


def test_image_linear_backward_forward():
    # graph of omega = dx ^ dy on R^2: {X + iota_X omega}
    L = _frame([[1, 0, 0, 1], [0, 1, -1, 0]])
    assert L.is_lagrangian()
    # pull back along the inclusion of the x axis: omega restricts to 0, result is T
    back = image_linear("backward", L, [[1], [0]])
    assert back.same_space(_frame([[1, 0]]))
    # a B-field on the source shifts the result
    Bm = [[0, 2], [-2, 0]]
    shifted = image_linear("backward", L, [[1, 0], [0, 1]], Bm)
    assert shifted.same_space(_frame([[1, 0, 0, -1], [0, 1, 1, 0]]))
    # forward along an isomorphism undoes backward
    F = [[2, 1], [1, 1]]
    pulled = image_linear("backward", L, F)
    assert image_linear("forward", pulled, F).same_space(L)


def test_image_linear_rank_drop():
    # a one-dimensional (non-Lagrangian) input cannot have a Lagrangian image
    L = _frame([[1, 0, 0, 0]])
    with pytest.raises(RankDrop):
        image_linear("backward", L, [[1, 0], [0, 1]])


def test_chevalley_examples():
    r2 = Chart(("x", "y"))
    rho = Form.scalar(Poly.one(r2)) + Form.blade(r2, ("x", "y")).scale(I)
    assert chevalley(rho, rho.conjugate()) == Form.blade(r2, ("x", "y")).scale(GaussRat(0, 2))
    c2 = Chart((), ("z1", "z2"))
    dz1 = Form.gen(c2, "z1")
    assert not chevalley(dz1, dz1.conjugate())
    assert not nondegenerate_at(dz1, {"z1": 0, "z2": 0})
