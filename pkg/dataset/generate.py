"""Synthetic network models: Barabasi-Albert and Erdos-Renyi."""
import logging

import numpy as np
from tqdm.auto import tqdm

from dataset.graph import Graph
from utils.exceptions import ParameterError
from utils.utils import get_rng


def generate_ba(n: int, k: int, seed: int, progress=False) -> Graph:
    """Preferential attachment graph G(n, k).

    The first k nodes start isolated and node k connects to all of them. Every
    later node attaches to k distinct existing nodes, each picked with
    probability proportional to its current degree (draws from the list of all
    edge endpoints so far; a repeated target is redrawn). This gives exactly
    ``k * (n - k)`` edges.

    Args:
        n (int): number of nodes
        k (int): edges brought in by every new node
        seed (int): random seed
        progress (bool, optional): show a progress bar. Defaults to False.

    Returns:
        Graph
    """
    if k < 1 or n <= k:
        raise ParameterError('need n > k >= 1, got n=%i, k=%i' % (n, k))
    rng = get_rng(seed)
    m = k * (n - k)
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    # every edge contributes both endpoints
    endpoints = np.empty(2 * m, dtype=np.int64)
    src[:k] = k
    dst[:k] = np.arange(k)
    endpoints[0:2 * k:2] = k
    endpoints[1:2 * k:2] = np.arange(k)
    filled = 2 * k
    e = k
    for node in tqdm(range(k + 1, n), disable=not progress):
        targets = {}  # insertion ordered
        while len(targets) < k:
            for t in endpoints[rng.integers(0, filled, size=k - len(targets))]:
                targets[int(t)] = None
                if len(targets) == k:
                    break
        chosen = np.fromiter(targets, dtype=np.int64, count=k)
        src[e:e + k] = node
        dst[e:e + k] = chosen
        endpoints[filled:filled + 2 * k:2] = node
        endpoints[filled + 1:filled + 2 * k:2] = chosen
        filled += 2 * k
        e += k
    g = Graph.from_edges(n, src, dst)
    assert g.edge_count == m
    logging.info('generated BA %r' % g)
    return g


def _pair_from_index(idx):
    """Map linear indices over the pairs ``w < v`` (ordered by v, then w) to (v, w)."""
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) // 2).astype(np.int64)
    # float rounding may be off by one near perfect squares
    v -= (v * (v - 1) // 2) > idx
    v += ((v + 1) * v // 2) <= idx
    w = idx - v * (v - 1) // 2
    return v, w


def generate_er(n: int, avg_degree_target: float, seed: int, chunk=1 << 20) -> Graph:
    """Erdos-Renyi graph G(n, p) with ``p = avg_degree_target / (n - 1)``.

    Pairs are visited by geometric skips over the linearized pair space, so the
    cost is proportional to the number of edges instead of n^2. Isolated nodes
    are kept.

    Args:
        n (int): number of nodes
        avg_degree_target (float): expected average degree, in ``(0, n - 1]``
        seed (int): random seed
        chunk (int, optional): skips drawn per batch. Defaults to 2^20.

    Returns:
        Graph
    """
    if n < 2:
        raise ParameterError('need n >= 2, got %i' % n)
    if not 0 < avg_degree_target <= n - 1:
        raise ParameterError('avg degree target must lie in (0, %i], got %g' % (n - 1, avg_degree_target))
    p = avg_degree_target / (n - 1)
    rng = get_rng(seed)
    total = n * (n - 1) // 2
    parts = []
    last = -1
    while True:
        idx = last + np.cumsum(rng.geometric(p, size=chunk))
        hit = idx[idx < total]
        parts.append(hit)
        if len(hit) < len(idx):
            break
        last = int(idx[-1])
    idx = np.concatenate(parts)
    v, w = _pair_from_index(idx)
    g = Graph.from_edges(n, v, w)
    logging.info('generated ER %r with p=%g' % (g, p))
    return g
