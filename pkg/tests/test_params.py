import logging
import math

import numpy as np
import pytest
from scipy import integrate

from dataset.generate import generate_ba
from dataset.graph import Graph
from params import (NetworkParams, choose_smoothing_c, degree_distribution_profile, estimate_avg_degree,
                    estimate_gamma, estimate_max_degree, estimate_min_degree, estimate_params, estimate_size,
                    norm_const)
from samplers import SampleSet, sample_mhrw, sample_rw, sample_smoothed
from utils.exceptions import DegenerateStatisticsError, InsufficientSamplesError, ParameterError, SingularityError


@pytest.mark.parametrize('d_min, d_avg, gamma', [
    (1, 3, 2.5),
    (1, 2, 3.0),
    (10, 19.68, 2 + 10 / 9.68),
])
def test_gamma(d_min, d_avg, gamma):
    assert estimate_gamma(d_min, d_avg) == pytest.approx(gamma, rel=1e-12)


def test_gamma_of_ba1_estimates():
    assert estimate_gamma(10, 19.68) == pytest.approx(3.033, abs=1e-3)


@pytest.mark.parametrize('d_min, d_avg', [(2, 2), (3, 2), (0, 4)])
def test_gamma_degenerate(d_min, d_avg):
    with pytest.raises(DegenerateStatisticsError):
        estimate_gamma(d_min, d_avg)


def test_norm_const():
    assert norm_const(2.5, 1, 100) == pytest.approx(1.5 / (1 - 100 ** -1.5), rel=1e-12)
    assert norm_const(2.5, 1, 100) == pytest.approx(1.5015, abs=1e-4)
    assert norm_const(2, 1, 1e9) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize('gamma, d_min, d_max', [(2.5, 1, 100), (3.0, 10, 2500), (2.1, 2, 40)])
def test_norm_const_normalizes(gamma, d_min, d_max):
    c = norm_const(gamma, d_min, d_max)
    mass, _ = integrate.quad(lambda j: c * j ** -gamma, d_min, d_max)
    assert mass == pytest.approx(1.0, rel=1e-8)


def test_norm_const_singular():
    with pytest.raises(SingularityError):
        norm_const(3, 2, 2)
    with pytest.raises(SingularityError):
        norm_const(1, 1, 10)


def test_gamma_recovered_from_ideal_power_law():
    # inverse transform sampling of c * j^-2.5 on [1, 10^4]
    gamma, d_min, d_max = 2.5, 1.0, 1e4
    u = np.random.default_rng(0).random(10 ** 6)
    e = 1 - gamma
    degrees = (d_min ** e + u * (d_max ** e - d_min ** e)) ** (1 / e)
    assert 2.4 <= estimate_gamma(d_min, degrees.mean()) <= 2.6


def test_size_on_complete_graph(complete):
    walk = sample_rw(complete(30), 5000, seed=1)
    assert estimate_size(walk) == pytest.approx(30, rel=0.05)


def test_size_with_neighbor_collisions(complete):
    g = complete(30)
    walk = sample_rw(g, 5000, seed=2)
    assert estimate_size(walk, use_neighbors=True, g=g) == pytest.approx(30, rel=0.05)


def test_size_on_single_edge():
    g = Graph.from_edges(2, [0], [1])
    walk = sample_rw(g, 400, seed=3)
    assert estimate_size(walk) == pytest.approx(2, rel=0.05)
    assert estimate_size(walk, use_neighbors=True, g=g) == pytest.approx(2, rel=0.05)


def test_size_without_collisions():
    n = 200
    g = Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))
    walk = SampleSet.from_trace(g, 'rw', np.arange(100), seed=0, start=0)
    with pytest.raises(InsufficientSamplesError):
        estimate_size(walk)


def test_size_ignores_matches_of_the_next_node_id():
    # no node repeats, node 1 follows right after the last entry of node 0 in key order
    n = 100
    g = Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))
    walk = SampleSet.from_trace(g, 'rw', list(range(2, n)) + [1, 0], seed=0, start=2)
    with pytest.raises(InsufficientSamplesError):
        estimate_size(walk)
    with pytest.raises(InsufficientSamplesError):
        estimate_size(walk, min_gap_fraction=0.2)


def test_size_unbiased_at_large_gap(complete):
    g = complete(60)
    sizes = [estimate_size(sample_rw(g, 3000, seed=seed), min_gap_fraction=0.2) for seed in range(10)]
    assert np.mean(sizes) == pytest.approx(60, rel=0.05)


def test_size_scales_with_the_network(small_ba):
    # two copies joined by a single edge hold twice the nodes
    n = small_ba.node_count
    u, v = small_ba.edges()
    double = Graph.from_edges(2 * n, np.concatenate([u, u + n, [0]]), np.concatenate([v, v + n, [n]]))
    single = np.mean([estimate_size(sample_rw(small_ba, 40000, seed=seed)) for seed in range(20)])
    doubled = np.mean([estimate_size(sample_rw(double, 40000, seed=seed)) for seed in range(20)])
    assert single == pytest.approx(n, rel=0.1)
    assert doubled / single == pytest.approx(2, rel=0.2)


def test_size_preconditions(complete):
    g = complete(10)
    with pytest.raises(ParameterError):
        estimate_size(sample_rw(g, 50, seed=0))
    with pytest.raises(ParameterError):
        estimate_size(sample_mhrw(g, 500, seed=0))
    with pytest.raises(ParameterError):
        estimate_size(sample_rw(g, 500, seed=0), min_gap_fraction=0.6)
    with pytest.raises(ParameterError):
        estimate_size(sample_rw(g, 500, seed=0), use_neighbors=True)


def test_size_is_deterministic(small_ba):
    a = estimate_size(sample_rw(small_ba, 3000, seed=4), use_neighbors=True, g=small_ba)
    b = estimate_size(sample_rw(small_ba, 3000, seed=4), use_neighbors=True, g=small_ba)
    assert a == b


@pytest.mark.parametrize('c', [0.0, 1.0, 8.0])
def test_avg_degree_on_regular_graph(cycle, c):
    walk = sample_smoothed(cycle(50), 500, c, seed=5)
    assert estimate_avg_degree(walk, c) == pytest.approx(2.0, rel=1e-12)


def test_avg_degree_stationary_weighting(path3):
    # visits in proportion to d + c = 3 : 4 : 3
    walk = SampleSet.from_trace(path3, 'smoothed', [0, 0, 0, 1, 1, 1, 1, 2, 2, 2], seed=0, smoothing_c=2.0)
    assert estimate_avg_degree(walk, 2.0) == pytest.approx(4 / 3, rel=1e-12)


def test_avg_degree_from_long_walk(small_ba):
    walk = sample_smoothed(small_ba, 100000, 4.0, seed=6)
    assert estimate_avg_degree(walk, 4.0) == pytest.approx(small_ba.avg_degree, rel=0.05)


def test_choose_smoothing_c_on_regular_graph(cycle):
    assert choose_smoothing_c(cycle(100), 1000, seed=7, pilots=3) == 1.0
    with pytest.raises(ParameterError):
        choose_smoothing_c(cycle(100), 100, seed=7)


def test_choose_smoothing_c_grid(small_ba):
    c = choose_smoothing_c(small_ba, 2000, seed=8)
    assert c >= 1 and math.log2(c).is_integer()
    assert c <= 2 ** math.ceil(math.log2(small_ba.max_degree))


def test_min_max_degree(path3):
    single = SampleSet('rw', [0], [7], seed=0)
    assert estimate_max_degree(single) == 7
    sample = SampleSet.from_trace(path3, 'rw', [1, 0, 1, 2], seed=0)
    assert estimate_max_degree(sample) == path3.max_degree
    assert estimate_min_degree(sample, 'real') == 1
    ba_like = SampleSet('rw', [0, 1, 2], [10, 14, 31], seed=0)
    assert estimate_min_degree(ba_like, 'real') == 1
    assert estimate_min_degree(ba_like, 'synthetic') == 10
    with pytest.raises(ParameterError):
        estimate_min_degree(ba_like, 'mixed')


def test_network_params_actual(small_ba):
    p = NetworkParams.actual(small_ba)
    assert p.est_size == small_ba.node_count
    assert p.est_avg_degree == pytest.approx(small_ba.avg_degree)
    assert p.gamma == pytest.approx(2 + p.est_min_degree / (p.est_avg_degree - p.est_min_degree))
    assert p.norm_const == pytest.approx(norm_const(p.gamma, p.est_min_degree, p.est_max_degree))


def test_network_params_degenerate(cycle, caplog):
    with caplog.at_level(logging.WARNING):
        p = NetworkParams.actual(cycle(10))
    assert math.isnan(p.gamma) and math.isnan(p.norm_const)
    assert 'power law' in caplog.text
    loaded = NetworkParams.from_json(p.to_json())
    assert math.isnan(loaded.gamma)
    assert loaded.est_size == 10


def test_network_params_serialization():
    p = NetworkParams.from_estimates(1000.5, 1, 120, 4.5, {'seed': 3})
    assert NetworkParams.from_json(p.to_json()) == p
    text = p.to_text()
    assert 'est_size = 1000.5' in text
    assert 'provenance.seed = 3' in text
    with pytest.raises(ParameterError):
        NetworkParams(0.0, 1, 2, 1.5)


def test_estimate_params(small_ba):
    p = estimate_params(small_ba, 1500, seed=9, repeats=3, network_kind='synthetic', smoothing_c=4.0,
                        neighbor_collisions=True)
    assert p.est_size == pytest.approx(small_ba.node_count, rel=0.5)
    assert p.est_avg_degree == pytest.approx(small_ba.avg_degree, rel=0.25)
    assert p.est_max_degree <= small_ba.max_degree
    assert p.est_min_degree >= small_ba.min_degree
    assert p.provenance['smoothing_c'] == 4.0
    assert len(p.provenance['run_seeds']) == 9
    again = estimate_params(small_ba, 1500, seed=9, repeats=3, network_kind='synthetic', smoothing_c=4.0,
                            neighbor_collisions=True)
    assert again == p


def test_estimate_params_on_regular_graph(cycle):
    p = estimate_params(cycle(100), 500, seed=10, repeats=2, network_kind='synthetic', smoothing_budget=500,
                        smoothing_pilots=2)
    assert p.est_avg_degree == pytest.approx(2.0, rel=1e-12)
    assert (p.est_min_degree, p.est_max_degree) == (2, 2)
    assert math.isnan(p.gamma)
    with pytest.raises(ParameterError):
        estimate_params(cycle(100), 500, seed=10, repeats=0)


def test_degree_distribution_profile(small_ba):
    p = NetworkParams.actual(small_ba)
    df = degree_distribution_profile(small_ba, p)
    assert list(df.columns) == ['degree', 'actual_count', 'estimated_count']
    assert df['actual_count'].sum() == small_ba.node_count
    assert np.all(df['estimated_count'] > 0)


@pytest.mark.slow
def test_ba1_pipeline():
    g = generate_ba(100000, 10, seed=42)
    p = estimate_params(g, 1000, seed=1, repeats=10, network_kind='synthetic', neighbor_collisions=True)
    assert p.est_size == pytest.approx(100000, rel=0.10)
    assert p.est_avg_degree == pytest.approx(20.0, rel=0.05)
    assert p.est_min_degree == 10
    assert p.gamma == pytest.approx(3.0, abs=0.3)
