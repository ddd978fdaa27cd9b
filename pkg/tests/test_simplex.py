import numpy as np
import pytest
from scipy.optimize import linprog

from slicescale.simplex import bounded_simplex


def test_tiny_lp():
    # min -x - y  s.t. x + y <= 1, 0 <= x, y <= 0.75
    res = bounded_simplex([-1.0, -1.0], [[1.0, 1.0]], [1.0], 0.75)
    assert res.status == "optimal"
    assert res.fun == pytest.approx(-1.0)


def test_unbounded():
    res = bounded_simplex([-1.0, 0.0], [[-1.0, 1.0]], [1.0], np.inf)
    assert res.status == "unbounded"


def test_bound_flip_only():
    # no constraint binds; both variables sit at their upper bounds
    res = bounded_simplex([-1.0, -2.0], [[1.0, 1.0]], [10.0], [1.0, 2.0])
    np.testing.assert_allclose(res.x, [1.0, 2.0])
    assert res.fun == pytest.approx(-5.0)


def test_rejects_negative_rhs():
    with pytest.raises(ValueError):
        bounded_simplex([1.0], [[1.0]], [-1.0], np.inf)


@pytest.mark.parametrize("seed", range(60))
def test_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 7), rng.integers(1, 7)
    A = rng.normal(size=(m, n))
    b = rng.uniform(0, 2, m)
    c = rng.normal(size=n)
    ub = np.where(rng.random(n) < 0.5, rng.uniform(0, 3, n), np.inf)
    ours = bounded_simplex(c, A, b, ub)
    ref = linprog(c, A_ub=A, b_ub=b, bounds=list(zip(np.zeros(n), ub)), method="highs")
    if ref.status == 3:
        assert ours.status == "unbounded"
        return
    assert ours.status == "optimal"
    assert ours.fun == pytest.approx(ref.fun, abs=1e-8)
    assert np.all(A @ ours.x <= b + 1e-9)
    assert np.all(ours.x >= -1e-12) and np.all(ours.x <= ub + 1e-12)
