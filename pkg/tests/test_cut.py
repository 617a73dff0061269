import numpy as np
import pytest

from gcx import cut
from gcx.errors import SampleInsideBall, SampleOnZeroZ


def test_level_points_lie_on_level():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        w, z = cut.sample_level_point(rng, n, 0.7)
        assert abs(cut.moment(w, z) - 0.5 * 0.49) < 1e-12


def test_kappa_differential_matches_finite_difference():
    rng = np.random.default_rng(1)
    w, z = cut.sample_level_point(rng, 2, 1.0)
    _, _, k = cut.kappa(w, z)
    for v in cut.level_tangent_basis(w, z):
        an = cut.kappa_differential(w, z, k, v[0], v[1:])
        fd = cut.fd_differential(w, z, k, v, 1e-6)
        assert np.allclose(an[0], fd[0], atol=1e-8)
        assert np.allclose(an[1], fd[1], atol=1e-8)


def test_tangent_basis_is_tangent():
    rng = np.random.default_rng(2)
    w, z = cut.sample_level_point(rng, 3, 0.5)
    T = cut.level_tangent_basis(w, z)
    # real hypersurface in C^(n+1)
    assert len(T) == 2 * (3 + 1) - 1
    h = 1e-6
    for v in T:
        dmu = (cut.moment(w + h * v[0], z + h * v[1:]) - cut.moment(w - h * v[0], z - h * v[1:])) / (2 * h)
        assert abs(dmu) < 1e-8


@pytest.mark.parametrize("n,eps", [(1, 0.5), (2, 1.0), (3, 0.5)])
def test_reduced_form_identity(n, eps):
    rep = cut.reduced_form_check(cut.CutConfig(n, eps, samples=30))
    assert rep.ok and rep.values["max_deviation"] < 1e-10


def test_wrong_eps_breaks_identity():
    rng = np.random.default_rng(4)
    pts = [cut.sample_level_point(rng, 2, 1.0) for _ in range(5)]
    rep = cut.reduced_form_check(cut.CutConfig(2, 0.5, samples=5), points=pts)
    assert not rep.ok


def test_zero_z_rejected():
    with pytest.raises(SampleOnZeroZ):
        cut.reduced_form_check(cut.CutConfig(1, 1.0, samples=1), points=[(1.0 + 0j, np.zeros(1))])


def test_slice_inside_ball_rejected():
    with pytest.raises(SampleInsideBall):
        cut.slice_map(np.array([0.1 + 0j]), 1.0)


def test_slice_check_and_reconstruction():
    rep = cut.slice_check(cut.CutConfig(2, 0.5, samples=20))
    assert rep.ok and rep.values["injective"]


def test_convergence_order_is_two():
    rep = cut.fd_convergence(cut.CutConfig(1, 0.5), points=2)
    assert 1.7 <= rep.values["order"] <= 2.3


def test_descent_sign_reporting():
    rep = cut.spinor_descent_check(cut.CutConfig(1, 1.0, samples=10))
    assert rep.ok and rep.values["vanishing_sign"] == "minus"
    assert rep.values["residual_X_plus_i_dmu"] > 1e-3
    neg = cut.spinor_descent_check(cut.CutConfig(1, 1.0, samples=10), field_fn=cut.non_action_field)
    assert not neg.ok
