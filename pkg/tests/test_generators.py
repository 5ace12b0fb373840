import math

import numpy as np
import pytest
from scipy import stats

from dataset.generate import _pair_from_index, generate_ba, generate_er
from utils.exceptions import ParameterError


@pytest.mark.parametrize('n, k', [(11, 10), (12, 10), (50, 1), (200, 3), (1000, 10)])
def test_ba_edge_count(n, k):
    g = generate_ba(n, k, seed=1)
    assert g.edge_count == k * (n - k)
    # every node from k on brings k edges
    assert g.degrees[k:].min() >= k


def test_ba_degenerate_size():
    g = generate_ba(11, 10, seed=3)
    assert g.degrees[10] == 10
    assert g.degrees[:10].tolist() == [1] * 10


@pytest.mark.parametrize('n, k', [(5, 10), (10, 10), (10, 0)])
def test_ba_bad_parameters(n, k):
    with pytest.raises(ParameterError):
        generate_ba(n, k, seed=0)


def test_ba_is_deterministic():
    assert generate_ba(500, 4, seed=11) == generate_ba(500, 4, seed=11)
    assert generate_ba(500, 4, seed=11) != generate_ba(500, 4, seed=12)


def test_ba_has_hubs():
    g = generate_ba(5000, 3, seed=2)
    assert g.max_degree > 10 * g.avg_degree


def test_pair_index_inversion():
    n = 60
    v, w = _pair_from_index(np.arange(n * (n - 1) // 2))
    rows, cols = np.tril_indices(n, -1)
    assert np.array_equal(v, rows)
    assert np.array_equal(w, cols)


def test_pair_index_inversion_large():
    v = np.array([10 ** 6, 3 * 10 ** 5 + 7], dtype=np.int64)
    idx = v * (v - 1) // 2 + np.array([0, v[1] - 1])
    v2, w2 = _pair_from_index(idx)
    assert v2.tolist() == v.tolist()
    assert w2.tolist() == [0, v[1] - 1]


def test_er_complete():
    g = generate_er(4, 3.0, seed=5)
    assert g.edge_count == 6
    assert g.degrees.tolist() == [3, 3, 3, 3]


def test_er_average_degree():
    g = generate_er(20000, 8.0, seed=3)
    assert g.node_count == 20000
    assert g.avg_degree == pytest.approx(8.0, abs=0.1)


def test_er_poisson_degrees():
    n, lam = 1000, 5.0
    g = generate_er(n, lam, seed=17)
    hist = np.bincount(g.degrees, minlength=30)
    # pooled bins {0, 1}, 2..10, >= 11
    observed = np.concatenate([[hist[:2].sum()], hist[2:11], [hist[11:].sum()]])
    pmf = stats.poisson.pmf(np.arange(11), lam)
    expected = np.concatenate([[pmf[:2].sum()], pmf[2:11], [1 - pmf.sum()]]) * n
    assert stats.chisquare(observed, expected).pvalue > 1e-3


def test_er_is_deterministic():
    assert generate_er(3000, 4.0, seed=9) == generate_er(3000, 4.0, seed=9)


@pytest.mark.parametrize('n, target', [(1, 0.5), (10, 0.0), (10, 9.5), (10, -1.0)])
def test_er_bad_parameters(n, target):
    with pytest.raises(ParameterError):
        generate_er(n, target, seed=0)


@pytest.mark.slow
def test_ba1_scale():
    g = generate_ba(100000, 10, seed=42)
    assert g.edge_count == 999900
    assert g.avg_degree == pytest.approx(20.0, abs=0.01)
    # discrete power law MLE over the degrees above k
    d = g.degrees[g.degrees >= 10].astype(np.float64)
    gamma = 1 + len(d) / np.sum(np.log(d / 9.5))
    assert 2.6 < gamma < 3.4
    assert math.isclose(g.min_degree, 10)
