import math

import numpy as np
import pytest

from signbound.optimize import (
    OptimizeResult,
    log_ratio,
    log_ratio_gradient,
    maximize_ratio,
    ratio_ascent_step,
)
from signbound.radial import EigenExpansion
from signbound.verify import random_expansion, verify_main


def test_step_zero_is_identity():
    f = random_expansion(1, 3, 6)
    assert ratio_ascent_step(f, 0.0) is f


def test_negative_step_rejected():
    with pytest.raises(ValueError):
        ratio_ascent_step(EigenExpansion.gaussian(2), -1.0)


def test_gradient_against_finite_differences():
    rng = np.random.default_rng(42)
    worst = 0.0
    for i in range(100):
        d = 1 + i % 8
        c = rng.standard_normal(7)
        f = EigenExpansion.from_normalized(d, c)
        _, grad = log_ratio_gradient(f)
        v = rng.standard_normal(7)
        v /= np.linalg.norm(v)
        h = 1e-5
        up = log_ratio(EigenExpansion.from_normalized(d, c + h * v))
        dn = log_ratio(EigenExpansion.from_normalized(d, c - h * v))
        fd = (up - dn) / (2 * h)
        worst = max(worst, abs(fd - grad @ v) / max(abs(fd), 1e-3))
    assert worst <= 1e-5


def test_gaussian_gradient_d1_recorded():
    # whether the Gaussian is a critical point in d=1 is an observation, not a claim
    f = EigenExpansion.from_normalized(1, [1.0, 0.0, 0.0])
    value, grad = log_ratio_gradient(f)
    assert value == pytest.approx(math.log(2 ** -0.5), abs=1e-12)
    assert np.all(np.isfinite(grad))
    print(f"gradient at the Gaussian in d=1: {grad}")


def test_ascent_is_monotone_and_scale_free():
    f = random_expansion(7, 2, 6)
    prev = log_ratio(f)
    for _ in range(15):
        f = ratio_ascent_step(f, 0.5)
        cur = log_ratio(f)
        assert cur >= prev
        assert np.linalg.norm(f.normalized_coeffs) == pytest.approx(1.0, rel=1e-12)
        prev = cur
    assert log_ratio(3.5 * f) == pytest.approx(log_ratio(f), abs=1e-12)


def test_degree_zero_is_gaussian():
    res = maximize_ratio(1, N=0, budget=5, restarts=3, seed=0)
    assert res.ratio == pytest.approx(2 ** -0.5, rel=1e-12)
    assert res.best.degree == 0


@pytest.mark.slow
def test_d1_degree8_full_budget():
    res = maximize_ratio(1, N=8, budget=10_000, restarts=8, seed=1)
    assert 2 ** -0.5 - 1e-9 <= res.ratio <= math.sqrt(2 / math.e)
    print(f"d=1 N=8 best ratio {res.ratio!r} vs Gaussian {2 ** -0.5!r}")


@pytest.mark.parametrize("d", [1, 3, 6])
def test_bracketed_and_reverified(d):
    res = maximize_ratio(d, N=6, budget=120, restarts=4, seed=3)
    assert res.gaussian_ratio - 1e-9 <= res.ratio <= res.bound * (1 + 1e-9)
    assert res.ratio == pytest.approx(verify_main(res.best).ratio, abs=1e-10)
    assert res.iterations <= res.budget


def test_reproducible_and_thread_independent():
    a = maximize_ratio(2, N=5, budget=60, restarts=4, seed=11)
    b = maximize_ratio(2, N=5, budget=60, restarts=4, seed=11)
    c = maximize_ratio(2, N=5, budget=60, restarts=4, seed=11, threads=4)
    assert a.to_json() == b.to_json() == c.to_json()


def test_json_round_trip():
    res = maximize_ratio(2, N=3, budget=20, restarts=2, seed=5)
    back = OptimizeResult.from_dict(__import__("json").loads(res.to_json()))
    assert back.to_json() == res.to_json()


@pytest.mark.parametrize("kw", [{"N": -1}, {"N": 2.5}, {"budget": 0}])
def test_bad_arguments(kw):
    args = {"d": 2, "N": 3, "budget": 10, "restarts": 1, "seed": 0}
    args.update(kw)
    with pytest.raises(ValueError):
        maximize_ratio(**args)
