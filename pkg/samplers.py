"""Node samplers: uniform, random walk, Metropolis-Hastings walk and smoothed walk.

Walks emit one sample per time step, so a rejected move (MHRW) or a virtual
self-loop (smoothed walk) repeats the current node in the trace.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from dataset.graph import Graph
from utils.exceptions import ParameterError
from utils.utils import get_rng, read_csv, write_csv

METHODS = ('uniform', 'rw', 'mhrw', 'smoothed')


@dataclass(frozen=True)
class SampleSet:
    """Ordered multiset of sampled nodes.

    Attributes:
        method: one of ``METHODS``
        trace: node ids in the order they were sampled, with repetition
        degrees: degree of every trace entry
        seed: seed the sample was drawn with
        smoothing_c: self-loop mass of a smoothed walk, else None
        start: first node of a walk, else None
    """
    method: str
    trace: np.ndarray
    degrees: np.ndarray
    seed: int
    smoothing_c: Optional[float] = None
    start: Optional[int] = None
    degree_counts: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError('unknown sampling method %r' % self.method)
        trace = np.asarray(self.trace, dtype=np.int64)
        degrees = np.asarray(self.degrees, dtype=np.int64)
        trace.flags.writeable = False
        degrees.flags.writeable = False
        object.__setattr__(self, 'trace', trace)
        object.__setattr__(self, 'degrees', degrees)
        values, counts = np.unique(degrees, return_counts=True)
        object.__setattr__(self, 'degree_counts', dict(zip(values.tolist(), counts.tolist())))
        assert len(trace) == len(degrees) == sum(self.degree_counts.values())

    @classmethod
    def from_trace(cls, g: Graph, method, trace, seed, smoothing_c=None, start=None):
        trace = np.asarray(trace, dtype=np.int64)
        return cls(method, trace, g.degrees[trace], seed, smoothing_c, start)

    @property
    def size(self):
        return len(self.trace)

    @property
    def observed_max_degree(self):
        return int(self.degrees.max())

    @property
    def observed_min_degree(self):
        return int(self.degrees.min())

    def degree_classes(self):
        """Distinct sampled degrees in ascending order and their counts n'_j."""
        values = np.fromiter(self.degree_counts.keys(), dtype=np.int64, count=len(self.degree_counts))
        counts = np.fromiter(self.degree_counts.values(), dtype=np.int64, count=len(self.degree_counts))
        return values, counts

    def visit_frequencies(self, n):
        """Empirical visit frequency of every node id in ``0..n-1``."""
        return np.bincount(self.trace, minlength=n) / self.size

    def check(self, g: Graph):
        """Assert that the sample is consistent with the graph it was drawn from."""
        assert self.trace.min() >= 0 and self.trace.max() < g.node_count
        assert np.array_equal(g.degrees[self.trace], self.degrees)
        values, counts = np.unique(self.degrees, return_counts=True)
        assert dict(zip(values.tolist(), counts.tolist())) == self.degree_counts

    def to_frame(self):
        return pd.DataFrame({'step': np.arange(self.size), 'node_id': self.trace, 'degree': self.degrees})

    def metadata(self):
        return {'method': self.method, 'seed': self.seed, 'smoothing_c': self.smoothing_c, 'start': self.start,
                'size': self.size}

    def to_csv(self, path, extra=None):
        meta = self.metadata()
        meta.update(extra or {})
        write_csv(self.to_frame(), path, meta)


def read_sample_csv(path) -> SampleSet:
    df, meta = read_csv(path)
    return SampleSet(meta['method'], df['node_id'].to_numpy(), df['degree'].to_numpy(), meta['seed'],
                     meta.get('smoothing_c'), meta.get('start'))


def sample_uniform(g: Graph, s: int, seed: int, replace=True) -> SampleSet:
    """Draw `s` nodes, each node equiprobable.

    Args:
        g (Graph): graph to sample from
        s (int): sample size
        seed (int): random seed
        replace (bool, optional): independent draws with replacement. Without
            replacement ``s <= n`` is required, and ``s = n`` returns every node once.
            Defaults to True.

    Returns:
        SampleSet
    """
    if s < 1:
        raise ParameterError('sample size must be positive, got %i' % s)
    if not replace and s > g.node_count:
        raise ParameterError('cannot draw %i distinct nodes from %i' % (s, g.node_count))
    rng = get_rng(seed)
    if replace:
        trace = rng.integers(0, g.node_count, size=s)
    else:
        trace = rng.choice(g.node_count, size=s, replace=False)
    sample = SampleSet.from_trace(g, 'uniform', trace, seed)
    sample.check(g)
    return sample


def _start_node(g: Graph, rng, start):
    if start is None:
        candidates = np.flatnonzero(g.degrees > 0)
        if len(candidates) == 0:
            raise ParameterError('graph has no edges, a walk cannot move')
        return int(candidates[rng.integers(len(candidates))])
    if not 0 <= start < g.node_count:
        raise ParameterError('start node %i outside [0, %i)' % (start, g.node_count))
    if g.degrees[start] == 0:
        raise ParameterError('start node %i has degree 0, a walk cannot move' % start)
    return int(start)


def _walk(g: Graph, s, seed, start, kind, c=0.0):
    if s < 1:
        raise ParameterError('walk length must be positive, got %i' % s)
    rng = get_rng(seed)
    u = _start_node(g, rng, start)
    first = u
    # neighbor choices first, so all kernels consume the same stream for it
    moves = rng.random(s - 1)
    coins = rng.random(s - 1) if kind != 'rw' else None
    indptr, indices, degrees = g.indptr, g.indices, g.degrees
    trace = np.empty(s, dtype=np.int64)
    trace[0] = u
    for t in range(s - 1):
        d_u = degrees[u]
        if kind == 'smoothed' and coins[t] * (d_u + c) < c:
            trace[t + 1] = u
            continue
        v = indices[indptr[u] + int(moves[t] * d_u)]
        if kind == 'mhrw' and coins[t] * degrees[v] >= d_u:
            # rejected with probability 1 - min(1, d_u / d_v)
            trace[t + 1] = u
            continue
        u = v
        trace[t + 1] = u
    return first, trace


def sample_rw(g: Graph, s: int, seed: int, start: Optional[int] = None) -> SampleSet:
    """Simple random walk of `s` steps including the start node.

    The walk moves to a uniformly chosen neighbor at every step; its stationary
    law is ``d_u / 2m`` on the component of the start node. No burn-in is removed.

    Args:
        g (Graph): graph to walk on
        s (int): number of samples
        seed (int): random seed
        start (int, optional): first node. Defaults to a uniformly chosen node with
            at least one neighbor.

    Returns:
        SampleSet
    """
    first, trace = _walk(g, s, seed, start, 'rw')
    sample = SampleSet.from_trace(g, 'rw', trace, seed, start=first)
    sample.check(g)
    return sample


def sample_mhrw(g: Graph, s: int, seed: int, start: Optional[int] = None) -> SampleSet:
    """Metropolis-Hastings random walk with uniform stationary law.

    A move from u to the proposed neighbor v is accepted with probability
    ``min(1, d_u / d_v)``, otherwise the walk stays at u for this step.
    """
    first, trace = _walk(g, s, seed, start, 'mhrw')
    sample = SampleSet.from_trace(g, 'mhrw', trace, seed, start=first)
    sample.check(g)
    return sample


def sample_smoothed(g: Graph, s: int, c: float, seed: int, start: Optional[int] = None) -> SampleSet:
    """Random walk on the graph with c/2 virtual self-loops added at every node.

    At node u the walk stays with probability ``c / (d_u + c)``, otherwise it moves
    to a uniform neighbor, giving a stationary law proportional to ``d_u + c``.
    With ``c = 0`` the trace equals the one of `sample_rw` for the same seed.
    """
    if c < 0:
        raise ParameterError('smoothing constant must be non-negative, got %g' % c)
    first, trace = _walk(g, s, seed, start, 'smoothed', float(c))
    sample = SampleSet.from_trace(g, 'smoothed', trace, seed, smoothing_c=float(c), start=first)
    sample.check(g)
    logging.debug('smoothed walk c=%g stayed %i times' % (c, int(np.sum(trace[1:] == trace[:-1]))))
    return sample


SAMPLERS = {
    'uniform': sample_uniform,
    'rw': sample_rw,
    'mhrw': sample_mhrw,
    'smoothed': sample_smoothed,
}
