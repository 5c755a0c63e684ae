import math

import numpy as np
import pytest

import minklog

SQUARE = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
GAUSS = minklog.GGParams(0.0, 2.0, 2)


def normal_cdf(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def regular(count):
    t = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(t), np.sin(t)])


def test_gaussian_normalization():
    assert GAUSS.q == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)
    assert GAUSS.variational_ok
    assert minklog.density(GAUSS, np.zeros(2)) == pytest.approx(GAUSS.q)


def test_square_measures():
    out = minklog.measures(SQUARE, np.ones(4), GAUSS)
    side = 2.0 * normal_cdf(1.0) - 1.0
    assert out["gamma"] == pytest.approx(side * side, abs=1e-12)
    edge = math.exp(-0.5) / math.sqrt(2.0 * math.pi) * side
    np.testing.assert_allclose(out["surface"], edge, atol=1e-12)
    np.testing.assert_array_equal(out["cone"], out["surface"])
    assert out["outer_radius"] == pytest.approx(math.sqrt(2.0))
    np.testing.assert_allclose(minklog.lp_surface_measure(SQUARE, np.ones(4), GAUSS, 2.0), edge / 2.0, atol=1e-12)


def test_gradient_matches_difference_quotient():
    h = np.array([1.0, 0.7, 1.3, 0.9])
    grad = minklog.volume_gradient(SQUARE, h, GAUSS)
    step = 1e-5
    for i in range(4):
        up, down = h.copy(), h.copy()
        up[i] += step
        down[i] -= step
        fd = (minklog.measures(SQUARE, up, GAUSS, rel_tol=1e-13)["gamma"]
              - minklog.measures(SQUARE, down, GAUSS, rel_tol=1e-13)["gamma"]) / (2 * step)
        assert fd == pytest.approx(grad[i], rel=1e-4)


def test_ball_volume_round_trip():
    r = math.sqrt(2.0 * math.log(2.0))
    assert minklog.ball_volume(r, GAUSS) == pytest.approx(0.5, rel=1e-14)
    assert minklog.ball_radius_for_volume(0.5, GAUSS) == pytest.approx(r, rel=1e-12)


def test_symmetric_solve():
    out = minklog.solve(regular(12), [1.0] * 12, GAUSS)
    assert out["converged"]
    assert out["el_residual"] < 1e-8
    assert out["gamma"] == pytest.approx(0.8, abs=1e-10)
    assert np.ptp(out["h_star"]) < 1e-8
    entropies = [t["entropy"] for t in out["trace"]]
    assert all(b < a for a, b in zip(entropies, entropies[1:]))


def test_weighted_solve_in_3d():
    rng = np.random.default_rng(3)
    dirs = rng.normal(size=(14, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    assert minklog.hemisphere_check(dirs)
    weights = rng.uniform(0.5, 2.0, size=14)
    params = minklog.GGParams(-0.25, 2.0, 3)
    out = minklog.solve(dirs, weights, params)
    assert out["converged"]
    assert minklog.euler_lagrange_residual(dirs, out["h_star"], weights, params) <= 1e-5


def test_errors():
    half = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    assert not minklog.hemisphere_check(half)
    with pytest.raises(minklog.HemisphereError):
        minklog.solve(half, [1.0, 1.0, 1.0], GAUSS)
    with pytest.raises(minklog.VariationalDomainError):
        minklog.solve(SQUARE, [1.0] * 4, minklog.GGParams(0.5, 2.0, 2))
    with pytest.raises(ValueError):
        minklog.GGParams(1.0, 2.0, 2)
    with pytest.raises(minklog.DomainError):
        minklog.solve(SQUARE, [1.0] * 4, GAUSS, kappa0=0.7)
    with pytest.raises(minklog.UnboundedBodyError):
        minklog.wulff_shape(half, np.ones(3))
