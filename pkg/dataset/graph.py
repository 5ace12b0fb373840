"""Immutable undirected graph storage and the exact degree rank oracle."""
import json
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from utils.exceptions import CacheFormatError, ParameterError
from utils.utils import metadata_json

CACHE_VERSION = 1


def _frozen(arr, dtype=np.int64):
    arr = np.ascontiguousarray(arr, dtype=dtype)
    arr.flags.writeable = False
    return arr


class Graph:
    """Undirected simple graph in compressed sparse row form.

    Node ids are the dense integers ``0..node_count-1``. ``labels[u]`` keeps the
    id node ``u`` had in the source it was read from. All arrays are read-only,
    so a graph can be shared between concurrent readers.
    """

    def __init__(self, indptr, indices, labels=None):
        self._indptr = _frozen(indptr)
        self._indices = _frozen(indices)
        n = len(self._indptr) - 1
        self._degrees = _frozen(np.diff(self._indptr))
        self._labels = _frozen(np.arange(n) if labels is None else labels)
        assert len(self._labels) == n
        assert self._degrees.sum() == len(self._indices)

    @classmethod
    def from_edges(cls, n, u, v, labels=None):
        """Build a graph from endpoint arrays. Self-loops and duplicate edges
        (in either orientation) are dropped.

        Args:
            n (int): number of nodes
            u (array-like): first endpoints, ids in ``[0, n)``
            v (array-like): second endpoints, ids in ``[0, n)``
            labels (array-like, optional): original node ids. Defaults to ``0..n-1``.

        Returns:
            Graph
        """
        if n < 1:
            raise ParameterError('a graph needs at least one node')
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ParameterError('edge endpoint outside [0, %i)' % n)
        keep = u != v
        lo, hi = np.minimum(u[keep], v[keep]), np.maximum(u[keep], v[keep])
        key = np.unique(lo * n + hi)
        lo, hi = key // n, key % n
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        adj = sp.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        adj.sort_indices()
        return cls(adj.indptr, adj.indices, labels)

    @property
    def indptr(self):
        return self._indptr

    @property
    def indices(self):
        return self._indices

    @property
    def degrees(self):
        return self._degrees

    @property
    def labels(self):
        return self._labels

    @property
    def node_count(self):
        return len(self._degrees)

    @property
    def edge_count(self):
        return len(self._indices) // 2

    @property
    def max_degree(self):
        return int(self._degrees.max())

    @property
    def min_degree(self):
        return int(self._degrees.min())

    @property
    def avg_degree(self):
        return 2 * self.edge_count / self.node_count

    def __len__(self):
        return self.node_count

    def __repr__(self):
        return 'Graph(n=%i, m=%i, d_avg=%.2f)' % (self.node_count, self.edge_count, self.avg_degree)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self._indptr, other._indptr) and np.array_equal(self._indices, other._indices)
                and np.array_equal(self._labels, other._labels))

    __hash__ = None

    def neighbors(self, u):
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def degree_histogram(self):
        """Number of nodes n_j of every degree j in ``0..max_degree``."""
        return np.bincount(self._degrees, minlength=self.max_degree + 1)

    def edges(self):
        """Both endpoint arrays of every edge, each edge once with ``u < v``."""
        src = np.repeat(np.arange(self.node_count), self._degrees)
        mask = src < self._indices
        return src[mask], self._indices[mask]

    def to_scipy(self):
        data = np.ones(len(self._indices), dtype=np.int8)
        return sp.csr_matrix((data, self._indices, self._indptr), shape=(self.node_count, self.node_count))

    def subgraph(self, nodes):
        """Induced subgraph on `nodes`, relabelled densely in ascending order of id."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        adj = self.to_scipy()[nodes][:, nodes].tocsr()
        adj.sort_indices()
        return Graph(adj.indptr, adj.indices, self._labels[nodes])


class RankTable:
    """Exact degree ranks of a graph.

    ``rank_of[u] = 1 + |{v : d_v > d_u}|`` and ``nodes_above[d]`` is the number of
    nodes with degree strictly greater than ``d``.
    """

    def __init__(self, rank_of, nodes_above):
        self.rank_of = _frozen(rank_of)
        self.nodes_above = _frozen(nodes_above)

    @property
    def node_count(self):
        return len(self.rank_of)

    def rank_of_degree(self, d):
        """Rank shared by all nodes of degree `d` (also defined for absent degrees)."""
        d = np.asarray(d, dtype=np.int64)
        clipped = np.clip(d, 0, len(self.nodes_above) - 1)
        return np.where(d >= len(self.nodes_above), 1, self.nodes_above[clipped] + 1)


def exact_degree_ranks(g: Graph) -> RankTable:
    """Degree rank of every node from the degree histogram and its suffix sums.

    Args:
        g (Graph): non-empty graph

    Returns:
        RankTable
    """
    if g.node_count == 0:
        raise ParameterError('empty graph')
    hist = g.degree_histogram()
    nodes_above = g.node_count - np.cumsum(hist)
    return RankTable(nodes_above[g.degrees] + 1, nodes_above)


def largest_component(g: Graph):
    """Node ids of the largest connected component (ties: lowest component label)."""
    _, labels = connected_components(g.to_scipy(), directed=False)
    sizes = np.bincount(labels)
    nodes = np.flatnonzero(labels == sizes.argmax())
    logging.debug('largest component holds %i of %i nodes' % (len(nodes), g.node_count))
    return nodes


def save_cache(g: Graph, path, metadata=None):
    """Write `g` to a versioned ``.npz`` binary cache.

    Args:
        g (Graph): graph to store
        path (str): destination, conventionally ending in ``.npz``
        metadata (dict, optional): run configuration and seeds, stored as a json string
    """
    meta = metadata_json(metadata or {})
    with open(path, 'wb') as f:
        np.savez_compressed(f, format_version=np.int64(CACHE_VERSION), indptr=g.indptr, indices=g.indices,
                            labels=g.labels, metadata=np.array(meta))


def load_cache_metadata(path):
    """Metadata dict stored with a cache, empty for caches written without it."""
    with np.load(path) as data:
        if 'metadata' not in data.files:
            return {}
        return json.loads(str(data['metadata']))


def load_cache(path) -> Graph:
    with np.load(path) as data:
        if 'format_version' not in data.files:
            raise CacheFormatError('%s has no version header' % path)
        version = int(data['format_version'])
        if version != CACHE_VERSION:
            raise CacheFormatError('%s has cache version %i, expected %i' % (path, version, CACHE_VERSION))
        return Graph(data['indptr'], data['indices'], data['labels'])
