import numpy as np
import pytest
from scipy.optimize import linprog

from signbound.simplex import LpSolverError, solve_lp


def random_lp(rng, n, m, k):
    A = rng.standard_normal((m, n))
    x0 = rng.standard_normal(n)
    b = A @ x0 + rng.uniform(0.1, 1.0, m)      # x0 strictly feasible
    Ae = rng.standard_normal((k, n)) if k else None
    be = Ae @ x0 if k else None
    c = rng.standard_normal(n)
    # a box keeps the random problems bounded
    A = np.vstack((A, np.eye(n), -np.eye(n)))
    b = np.concatenate((b, 10.0 + np.tile(np.abs(x0), 2)))
    return c, A, b, Ae, be


@pytest.mark.parametrize("seed", range(60))
def test_matches_highs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    c, A, b, Ae, be = random_lp(rng, n, int(rng.integers(n, 6 * n)), int(rng.integers(0, min(3, n))))
    ours = solve_lp(c, A, b, Ae, be)
    ref = linprog(c, A_ub=A, b_ub=b, A_eq=Ae, b_eq=be, bounds=[(None, None)] * n, method="highs")
    assert ref.status == 0 and ours.status == "optimal"
    assert ours.fun == pytest.approx(ref.fun, abs=1e-9 * max(1.0, abs(ref.fun)))
    assert np.all(A @ ours.x <= b + 1e-9)
    if Ae is not None:
        assert np.allclose(Ae @ ours.x, be, atol=1e-9)


def test_simple_known_optimum():
    # max x + y subject to x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (8/5, 6/5)
    res = solve_lp([-1, -1], [[1, 2], [3, 1], [-1, 0], [0, -1]], [4, 6, 0, 0])
    assert res.status == "optimal"
    assert res.x == pytest.approx([1.6, 1.2], abs=1e-12)


def test_infeasible():
    res = solve_lp([1.0], [[1.0], [-1.0]], [-1.0, -1.0])
    assert res.status == "infeasible"


def test_unbounded():
    res = solve_lp([-1.0, 0.0], [[0.0, 1.0]], [1.0])
    assert res.status == "unbounded"


def test_equality_only():
    res = solve_lp([1.0, 1.0], A_eq=[[1.0, -1.0]], b_eq=[0.0], A_ub=[[-1.0, 0.0]], b_ub=[-2.0])
    assert res.status == "optimal" and res.x == pytest.approx([2.0, 2.0])


def test_degenerate_vertex():
    # many constraints active at the optimum exercise the anti-cycling fallback
    k = np.linspace(0, np.pi / 2, 40)
    A = np.column_stack((np.cos(k), np.sin(k)))
    A = np.vstack((A, [[1, 1]] * 5))
    b = np.concatenate((np.ones(40), np.full(5, 1.0)))
    res = solve_lp([-1, -1], A, b)
    ref = linprog([-1, -1], A_ub=A, b_ub=b, bounds=[(None, None)] * 2)
    assert res.fun == pytest.approx(ref.fun, abs=1e-10)


def test_no_constraints():
    with pytest.raises(ValueError):
        solve_lp([1.0, 2.0])


def test_error_type():
    assert issubclass(LpSolverError, RuntimeError)
