"""Degree rank estimators.

    pl     closed form power law rank with estimated parameters
    pl-ap  the same with the actual parameters of the graph
    us     linear extrapolation of the rank inside a uniform sample
    mh     us applied to a Metropolis-Hastings walk
    rw     re-weighted random walk, degree class j weighted by n'_j / j
    pd     Poisson tail sum for random networks (pd-ap: actual parameters)

All estimators accept a scalar degree or an array of degrees, are functions of
the degree alone (equal degrees get equal ranks) and clamp to ``[1, n_est]``.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dataset.graph import RankTable
from params import NetworkParams
from samplers import SampleSet
from utils.exceptions import ParameterError, SingularityError

METHODS = ('pl', 'pl-ap', 'us', 'mh', 'rw', 'pd', 'pd-ap')
# sampler each method draws from, None for closed forms
SAMPLER_OF = {'pl': None, 'pl-ap': None, 'us': 'uniform', 'mh': 'mhrw', 'rw': 'rw', 'pd': None, 'pd-ap': None}


@dataclass(frozen=True)
class RankEstimate:
    """Estimated rank of one degree by one method."""
    node_degree: int
    method: str
    est_rank: float
    sample_size: int
    params_used: NetworkParams = None
    seed: int = None


def _clamp(x, n_est):
    out = np.clip(x, 1.0, max(float(n_est), 1.0))
    return float(out) if np.ndim(out) == 0 else out


def expected_rank_pl(n, gamma, d_min, d_max, d_u, clamp=True):
    """Expected degree rank of a degree `d_u` node under a power law degree density
    ``c * j^-gamma`` on ``[d_min, d_max]``:
    ``n * (d_max^(1-g) - (d_u+1)^(1-g)) / (d_max^(1-g) - d_min^(1-g)) + 1``.

    Args:
        n (float): number of nodes
        gamma (float): power law exponent
        d_min (float): minimum degree, positive
        d_max (float): maximum degree, larger than d_min
        d_u (int or array): degree(s) to rank
        clamp (bool, optional): clamp to ``[1, n]``. Defaults to True.

    Returns:
        float or numpy.ndarray
    """
    if not math.isfinite(gamma) or gamma == 1:
        raise SingularityError('power law rank undefined for gamma=%s' % gamma)
    if not 0 < d_min < d_max:
        raise SingularityError('need 0 < d_min < d_max, got d_min=%g, d_max=%g' % (d_min, d_max))
    e = 1.0 - gamma
    top = float(d_max) ** e
    d = np.asarray(d_u, dtype=np.float64)
    raw = n * (top - (d + 1.0) ** e) / (top - float(d_min) ** e) + 1.0
    if not clamp:
        return float(raw) if np.ndim(raw) == 0 else raw
    return _clamp(raw, n)


def rank_pl(params: NetworkParams, d_u):
    return expected_rank_pl(params.est_size, params.gamma, params.est_min_degree, params.est_max_degree, d_u)


def local_rank(sample: SampleSet, d_u):
    """One plus the number of sample entries with degree strictly above `d_u`."""
    if sample.size == 0:
        raise ParameterError('empty sample')
    ordered = np.sort(sample.degrees)
    above = sample.size - np.searchsorted(ordered, np.asarray(d_u), side='right')
    return 1 + above


def rank_us(n_est, s, r_local):
    """Uniform sample extrapolation ``n_est * r_local / s``."""
    if s < 1:
        raise ParameterError('sample size must be positive, got %s' % s)
    return _clamp(float(n_est) * np.asarray(r_local, dtype=np.float64) / s, n_est)


def rank_mh(sample: SampleSet, n_est, d_u):
    if sample.method != 'mhrw':
        raise ParameterError('MH ranks need a Metropolis-Hastings walk, got %s' % sample.method)
    return rank_us(n_est, sample.size, local_rank(sample, d_u))


def resampling_weights(sample: SampleSet):
    """Resampling law of the re-weighted walk.

    Returns:
        tuple(numpy.ndarray, numpy.ndarray, float): sampled degrees j, ``q(j)``
        proportional to ``n'_j / j``, and ``k = min(1 / q)``
    """
    values, counts = sample.degree_classes()
    if values.min() <= 0:
        raise ParameterError('a random walk sample cannot hold degree 0 nodes')
    w = counts / values.astype(np.float64)
    q = w / w.sum()
    return values, q, float(np.min(1.0 / q))


def rank_rw(sample: SampleSet, n_est, d_u):
    """Re-weighted random walk rank ``n_est * Σ_{j > d_u} (n'_j/j) / Σ_j (n'_j/j) + 1``.

    k cancels in the ratio; it is logged for reproducibility.
    """
    if sample.size == 0:
        raise ParameterError('empty sample')
    values, q, k = resampling_weights(sample)
    # suffix sums of q over the ascending degree classes
    tail = np.concatenate([np.cumsum(q[::-1])[::-1], [0.0]])
    idx = np.searchsorted(values, np.asarray(d_u), side='right')
    logging.debug('rw resampling constant k=%.6g over %i degree classes' % (k, len(values)))
    return _clamp(float(n_est) * tail[idx] + 1.0, n_est)


def poisson_tail(lam, d_max):
    """``T[d] = Σ_{j=d+1}^{d_max} e^-lam lam^j / j!`` for ``d = 0..d_max``.

    Terms follow the recurrence ``t_{j+1} = t_j * lam / (j + 1)``, carried in log
    space so that no factorial or large power is formed.
    """
    j = np.arange(1, d_max + 1, dtype=np.float64)
    log_terms = -lam + np.cumsum(math.log(lam) - np.log(j))
    terms = np.exp(log_terms)
    # summed from the smallest term upwards
    tail = np.cumsum(terms[::-1])[::-1]
    return np.concatenate([tail, [0.0]])


def rank_pd(n_est, d_avg_est, d_max_est, d_u):
    """Poisson degree rank ``n * e^-d_avg Σ_{j=d_u+1}^{d_max} d_avg^j / j! + 1``."""
    if not d_avg_est > 0:
        raise ParameterError('average degree must be positive, got %g' % d_avg_est)
    if d_max_est < 1:
        raise ParameterError('maximum degree must be at least 1, got %s' % d_max_est)
    tail = poisson_tail(float(d_avg_est), int(d_max_est))
    d = np.asarray(d_u, dtype=np.int64)
    vals = np.where(d >= d_max_est, 0.0, tail[np.clip(d, 0, int(d_max_est))])
    return _clamp(float(n_est) * vals + 1.0, n_est)


def estimate_ranks(method, degrees, sample: SampleSet = None, params: NetworkParams = None):
    """Batch API: estimated ranks of an array of degrees with one method.

    Args:
        method (str): one of ``METHODS``
        degrees (array-like): degrees to rank
        sample (SampleSet, optional): sample for us, mh and rw
        params (NetworkParams): estimated parameters for pl, pd and the n' of the
            sampling methods; actual parameters for pl-ap and pd-ap

    Returns:
        numpy.ndarray
    """
    if method not in METHODS:
        raise ParameterError('unknown method %r, choose from %s' % (method, ', '.join(METHODS)))
    if params is None:
        raise ParameterError('method %s needs network parameters' % method)
    degrees = np.atleast_1d(np.asarray(degrees, dtype=np.int64))
    if method in ('pl', 'pl-ap'):
        return np.atleast_1d(rank_pl(params, degrees))
    if method in ('pd', 'pd-ap'):
        return np.atleast_1d(rank_pd(params.est_size, params.est_avg_degree, params.est_max_degree, degrees))
    if sample is None:
        raise ParameterError('method %s needs a sample' % method)
    if method == 'us':
        return np.atleast_1d(rank_us(params.est_size, sample.size, local_rank(sample, degrees)))
    if method == 'mh':
        return np.atleast_1d(rank_mh(sample, params.est_size, degrees))
    return np.atleast_1d(rank_rw(sample, params.est_size, degrees))


def rank_table_frame(method, degrees, est, ranks: RankTable = None, round_ranks=False):
    """Output rows ``(degree, method, est_rank, act_rank, abs_err, wtd_err)``; the truth
    columns are filled when `ranks` is given."""
    est = np.asarray(est, dtype=np.float64)
    if round_ranks:
        est = np.floor(est + 0.5)
    df = pd.DataFrame({'degree': np.asarray(degrees, dtype=np.int64), 'method': method, 'est_rank': est})
    if ranks is not None:
        from eval import abs_error, weighted_error
        act = ranks.rank_of_degree(df['degree'].to_numpy())
        df['act_rank'] = act
        df['abs_err'] = abs_error(est, act)
        df['wtd_err'] = weighted_error(est, act, ranks.node_count)
    return df
