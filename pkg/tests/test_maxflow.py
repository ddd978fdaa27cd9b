import numpy as np
import pytest

from helpers import S
from slicescale import DimensionError, pattern_feasible_maxflow
from slicescale.maxflow import FlowNetwork

FULL = [(0, 0), (0, 1), (1, 0), (1, 1)]
THREE = [(0, 1), (1, 0), (1, 1)]
DIAG = [(0, 0), (1, 1)]


def test_network_basic():
    net = FlowNetwork(4)
    net.add_edge(0, 1, 3.0)
    net.add_edge(0, 2, 2.0)
    net.add_edge(1, 3, 2.0)
    net.add_edge(2, 3, 3.0)
    net.add_edge(1, 2, 1.0)
    assert net.max_flow(0, 3) == pytest.approx(5.0)


def test_full_pattern():
    assert pattern_feasible_maxflow(FULL, S([1, 2], [2, 1]))


def test_three_cell_infeasible():
    assert not pattern_feasible_maxflow(THREE, S([1, 1], [1.5, 0.5]))


def test_three_cell_feasible():
    assert pattern_feasible_maxflow(THREE, S([1, 1], [0.5, 1.5]))


def test_diagonal():
    assert pattern_feasible_maxflow(DIAG, S([1, 2], [1, 2]))
    assert not pattern_feasible_maxflow(DIAG, S([1, 2], [2, 1]))


def test_strictness_matters():
    # the only matrix with these sums on the pattern has a zero at (1, 1):
    # a01 = 1, a10 = 1, a11 = 0
    s = S([1, 1], [1, 1])
    assert pattern_feasible_maxflow(THREE, s, strict_rtol=0.0)
    assert not pattern_feasible_maxflow(THREE, s)


def test_rejects_three_modes():
    with pytest.raises(DimensionError):
        pattern_feasible_maxflow([(0, 0, 0)], S([1], [1], [1]))


def test_rank_one_witness_always_feasible():
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = rng.uniform(0.5, 2, 3)
        c = rng.uniform(0.5, 2, 4)
        c *= r.sum() / c.sum()
        pattern = [(i, j) for i in range(3) for j in range(4)]
        assert pattern_feasible_maxflow(pattern, S(r, c))
