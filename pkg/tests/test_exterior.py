import random

import pytest
from hypothesis import given, settings, strategies as st

import corpus
from gcx.errors import NotClosed, NotVanishingOnBase
from gcx.exterior import (
    Form,
    PolyVector,
    contract,
    contract_covector,
    exp_act,
    ext_d,
    lie_bracket,
    lie_derivative,
    radial_homotopy,
    transpose,
    vanishes_along_base,
)
from gcx.poly import Chart, Poly

CH = Chart(("x", "y"), ("z1",))
seeds = st.integers(min_value=0, max_value=10**6)


def rforms(seed, n=2, degrees=range(0, 5)):
    rng = random.Random(seed)
    return [corpus.rand_graded(rng, Form, CH, degrees, 3, 2, 2) for _ in range(n)]


def rvec(seed):
    rng = random.Random(seed + 1)
    return corpus.rand_graded(rng, PolyVector, CH, [1], 2, 2, 2)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_d_squared_zero(seed):
    (a,) = rforms(seed, 1)
    assert not ext_d(ext_d(a))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_graded_leibniz(seed):
    a, b = rforms(seed, 2, [1])
    # for a 1-form a: d(a ^ b) = da ^ b - a ^ db
    assert ext_d(a.wedge(b)) == ext_d(a).wedge(b) - a.wedge(ext_d(b))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_cartan_formula(seed):
    (a,) = rforms(seed, 1)
    X = rvec(seed)
    assert lie_derivative(X, a) == contract(X, ext_d(a)) + ext_d(contract(X, a))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_bracket_of_lie_derivatives(seed):
    (a,) = rforms(seed, 1)
    X, Y = rvec(seed), rvec(seed + 7)
    lhs = lie_derivative(lie_bracket(X, Y), a)
    rhs = lie_derivative(X, lie_derivative(Y, a)) - lie_derivative(Y, lie_derivative(X, a))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_contraction_antiderivation(seed):
    a, b = rforms(seed, 2, [2])
    X = rvec(seed)
    assert contract(X, a.wedge(b)) == contract(X, a).wedge(b) + a.wedge(contract(X, b))


def test_bivector_contraction_order():
    ch = Chart(("x", "y"))
    W = PolyVector.blade(ch, ("x", "y"))
    dx, dy = Form.gen(ch, "x"), Form.gen(ch, "y")
    # iota_{X1 ^ X2} = iota_X2 o iota_X1
    assert contract(W, dx.wedge(dy)) == Form.scalar(Poly.one(ch))
    assert contract_covector(dx, W) == PolyVector.gen(ch, "y")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_transpose_reverses(seed):
    a, b = rforms(seed, 2)
    assert transpose(transpose(a)) == a
    assert transpose(a.wedge(b)) == transpose(b).wedge(transpose(a))


def test_exp_of_two_form():
    ch = Chart(("x1", "x2", "x3", "x4"))
    w = Form.blade(ch, ("x1", "x2")) + Form.blade(ch, ("x3", "x4"))
    one = Form.scalar(Poly.one(ch))
    e = exp_act(w, one)
    assert e == one + w + Form.blade(ch, ("x1", "x2", "x3", "x4"))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_exp_homomorphism(seed):
    rng = random.Random(seed)
    B1 = corpus.rand_graded(rng, Form, CH, [2], 2, 1, 1)
    B2 = corpus.rand_graded(rng, Form, CH, [2], 2, 1, 1)
    (rho,) = rforms(seed, 1)
    assert exp_act(B1, exp_act(B2, rho)) == exp_act(B1 + B2, rho)


def test_radial_homotopy_simple():
    ch = Chart(("x", "y"))
    x, y = Poly.gen(ch, "x"), Poly.gen(ch, "y")
    alpha = Form.blade(ch, ("x", "y"), y)  # d(-y^2/2 dx)
    eta = radial_homotopy(alpha, ["y"])
    assert ext_d(eta) == alpha
    assert vanishes_along_base(eta, ["y"], order=2)


def test_radial_homotopy_errors():
    ch = Chart(("x", "y"))
    with pytest.raises(NotClosed):
        radial_homotopy(Form.gen(ch, "x", Poly.gen(ch, "y")), ["y"])
    with pytest.raises(NotVanishingOnBase):
        radial_homotopy(Form.blade(ch, ("x", "y")), ["y"])


def test_vanishes_along_base_sees_conjugates():
    ch = Chart((), ("z1",))
    zb = Poly.gen(ch, "zbar1")
    assert not vanishes_along_base(Form.scalar(zb + 1), ["z1"])
    assert vanishes_along_base(Form.scalar(zb), ["z1"])
    assert not vanishes_along_base(Form.scalar(zb), ["z1"], order=2)
