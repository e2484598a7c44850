import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import eval_genlaguerre, roots_genlaguerre

from signbound.numerics import (
    QuadratureError,
    gauss_laguerre,
    laguerre_eval,
    laguerre_functions,
    log_gamma,
    log_sphere_area,
    log_unit_ball_volume,
)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (0.5, 0.5723649429247001), (4.0, math.log(6.0))])
def test_log_gamma_small_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", [1e-8, 0.03, 0.9, 1.1, 2.0, 2.5, 7.3, 33.3, 511.5, 1e4, 123456.7, 1e6])
def test_log_gamma_against_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-14)


def test_log_gamma_recurrence():
    rng = np.random.default_rng(0)
    for x in rng.uniform(0.0, 100.0, 10_000):
        x = float(x) or 1e-3
        assert abs(log_gamma(x + 1.0) - log_gamma(x) - math.log(x)) <= 1e-12 * max(1.0, abs(log_gamma(x + 1.0)))


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_unit_ball_volume_small_dims():
    assert log_unit_ball_volume(1) == pytest.approx(math.log(2.0), abs=1e-15)
    assert log_unit_ball_volume(2) == pytest.approx(math.log(math.pi), abs=1e-15)
    assert log_unit_ball_volume(3) == pytest.approx(1.4324119583011810, abs=1e-14)


@pytest.mark.parametrize("d", [1, 7, 64, 1000, 10_000])
def test_ball_and_sphere_against_mpmath(d):
    vol = d / 2 * mpmath.log(mpmath.pi) - mpmath.loggamma(mpmath.mpf(d) / 2 + 1)
    area = mpmath.log(2) + d / 2 * mpmath.log(mpmath.pi) - mpmath.loggamma(mpmath.mpf(d) / 2)
    assert log_unit_ball_volume(d) == pytest.approx(float(vol), rel=1e-12, abs=1e-12)
    assert log_sphere_area(d) == pytest.approx(float(area), rel=1e-12, abs=1e-12)


def test_laguerre_closed_forms():
    assert laguerre_eval(0, 0.7, 3.2) == 1.0
    for alpha in (-0.5, 0.0, 1.5):
        for t in (0.0, 0.4, 9.0):
            assert laguerre_eval(1, alpha, t) == pytest.approx(1 + alpha - t, abs=1e-14)
    assert laguerre_eval(2, 0.0, 2.0) == pytest.approx(-1.0, abs=1e-14)


@given(st.integers(0, 60), st.sampled_from([-0.5, 0.0, 0.5, 3.0, 7.5]), st.floats(0.0, 80.0))
def test_laguerre_against_scipy(k, alpha, t):
    ref = eval_genlaguerre(k, alpha, t)
    got = laguerre_eval(k, alpha, t)
    scale = max(1.0, abs(ref), float(np.max(np.abs(eval_genlaguerre(np.arange(k + 1), alpha, t)))))
    assert abs(got - ref) <= 1e-11 * scale


def test_laguerre_functions_orthonormal():
    rule = gauss_laguerre(80, 1.5)
    P = laguerre_functions(30, 1.5, rule.nodes)
    # orthonormal with respect to t^alpha e^-t once the e^{-t/2} factor is undone
    G = (P * np.exp(rule.nodes)) @ (rule.weights[:, None] * P.T)
    assert np.allclose(G, np.eye(30), atol=1e-11)


def test_quadrature_examples():
    one = gauss_laguerre(1, 0.0)
    assert one.nodes.tolist() == pytest.approx([1.0], abs=1e-15)
    assert one.weights.tolist() == pytest.approx([1.0], abs=1e-15)
    two = gauss_laguerre(2, 0.0)
    assert two.nodes == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], rel=1e-14)


@pytest.mark.parametrize("n", [5, 40, 160])
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.0, 7.0])
def test_quadrature_against_scipy(n, alpha):
    x, w = roots_genlaguerre(n, alpha)
    rule = gauss_laguerre(n, alpha)
    assert rule.nodes == pytest.approx(x, rel=1e-12)
    big = w > 1e-250
    assert rule.weights[big] == pytest.approx(w[big], rel=1e-9)


@pytest.mark.parametrize("n", [1, 3, 17, 64])
@pytest.mark.parametrize("alpha", [-0.5, 0.0] + [d / 2 - 1 for d in (3, 8, 17, 32)])
def test_quadrature_moments(n, alpha):
    rule = gauss_laguerre(n, alpha)
    assert np.all(np.diff(rule.nodes) > 0) and rule.nodes[0] > 0
    assert np.all(rule.weights > 0)
    assert len(rule.nodes) == rule.order == n
    assert rule.weights.sum() == pytest.approx(math.gamma(alpha + 1), rel=1e-12)
    for m in range(2 * n):
        # compare in log space: t^m moments span hundreds of orders of magnitude
        approx = np.logaddexp.reduce(rule.log_weights + m * np.log(rule.nodes))
        assert approx == pytest.approx(log_gamma(m + alpha + 1), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("order", [256, 512, 1024])
@pytest.mark.parametrize("d", [1, 3, 8, 16])
def test_quadrature_high_order(order, d):
    rule = gauss_laguerre(order, d / 2 - 1)
    assert rule.weights.sum() == pytest.approx(math.gamma(d / 2), rel=1e-12)


@pytest.mark.parametrize("args", [(0, 0.0), (3, -1.0), (2.5, 0.0)])
def test_quadrature_bad_arguments(args):
    with pytest.raises(ValueError):
        gauss_laguerre(*args)


def test_quadrature_error_is_runtime_error():
    assert issubclass(QuadratureError, RuntimeError)
